#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "pairgossip/losses.hpp"

namespace pairgossip {

/// UCI breast-cancer-wisconsin.data layout: id, 9 integer attributes, class
/// (2 benign, 4 malignant). Class 4 maps to +1. "?" cells take the mean of
/// the column over rows where it is present. Features are the 9 attributes,
/// a constant 1 and a constant 0 (d = 11).
Dataset load_breast_cancer(const std::string& path);
Dataset parse_breast_cancer(std::istream& in);

/// Gaussian mixture with class means in a random low-dimensional subspace.
struct SyntheticSpec {
  int n = 1000;
  int dim = 40;
  int classes = 10;
  int subspace_dim = 5;
  double variance_factor = 0.3;  // noise standard deviation per coordinate
  std::uint64_t seed = 0;
};

/// Means are U a_c with U an orthonormal dim x subspace_dim basis and
/// a_c ~ N(0, I). Point k belongs to class (pi(k) mod classes) for a seeded
/// permutation pi, so class sizes differ by at most one. Even classes get
/// label +1, odd classes -1.
Dataset gen_gaussian_mixture(const SyntheticSpec& spec);

/// Two balanced classes N(+-(separation/2) u, I) with u = 1/sqrt(d) (1, ..., 1),
/// in shuffled order.
Dataset gen_two_class(int n, int dim, double separation, std::uint64_t seed);

// CSV "label,x0,...,x{d-1}" with a header row.
void write_dataset_csv(const Dataset& data, std::ostream& out);
Dataset read_dataset_csv(std::istream& in);
Dataset read_dataset_csv(const std::string& path);

}  // namespace pairgossip
