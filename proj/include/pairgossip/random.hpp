#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace pairgossip {

// Deterministic random stream.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. The standard distributions are implementation-defined, so every
// draw below is derived from raw engine words by hand; a (seed, role) pair
// reproduces the same draws on every platform.
//
// Each stochastic role (edge draws, baseline pair draws, data generation,
// graph generation, ...) owns its own stream keyed by a role name, so adding
// draws to one role never shifts the sequence seen by another.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::string_view role);

  std::uint64_t next_u64() { return engine_(); }

  // Uniform integer in [0, bound). bound must be positive.
  std::uint64_t uniform_index(std::uint64_t bound);

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01();

  // Standard normal via the Marsaglia polar method.
  double normal();

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace pairgossip
