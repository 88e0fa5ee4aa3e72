#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "pairgossip/analysis.hpp"
#include "pairgossip/datasets.hpp"

using namespace pairgossip;

namespace {

Parameter scalar(double v) { return Parameter::from_vector(Eigen::VectorXd::Constant(1, v)); }

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream s(line);
  std::string cell;
  while (std::getline(s, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

TEST_CASE("bound constants on a hand-computed instance") {
  // gamma(1) = 1, gamma(2) = 1/sqrt(2), lambda_2 = 1/4.
  BoundInputs in;
  in.optimum_norm = 1.0;
  in.lipschitz = 2.0;
  in.schedule = StepSchedule::inv_sqrt(1.0);
  in.T = 2;
  in.spectral_gap = 0.75;
  const BoundConstants c = bound_constants(in);
  CHECK(c.c1 == doctest::Approx(1.0 / (4.0 / std::sqrt(2.0)) + 1.0));
  CHECK(c.c2 == doctest::Approx(12.0));
}

TEST_CASE("bound constants scale and order as expected") {
  RandomStream rng(31, "test");
  for (int rep = 0; rep < 200; ++rep) {
    BoundInputs in;
    in.optimum_norm = 0.0;
    in.lipschitz = 0.1 + 3.0 * rng.uniform01();
    in.schedule = StepSchedule::inv_sqrt(0.1 + rng.uniform01());
    in.T = 2 + static_cast<long>(rng.uniform_index(300));
    in.spectral_gap = 0.01 + 0.98 * rng.uniform01();
    const BoundConstants base = bound_constants(in);
    BoundInputs scaled = in;
    const double a = 0.5 + 2.0 * rng.uniform01();
    scaled.lipschitz *= a;
    const BoundConstants s = bound_constants(scaled);
    CHECK(s.c1 == doctest::Approx(a * a * base.c1));
    CHECK(s.c2 == doctest::Approx(a * a * base.c2));
    BoundInputs wider = in;
    wider.spectral_gap = std::min(1.0, in.spectral_gap * 1.5);
    CHECK(bound_constants(wider).c2 <= base.c2);
    CHECK(base.c2 >= 6.0 * base.c1);  // 1 - sqrt(lambda_2) <= 1 and no optimum term
  }
  BoundInputs bad;
  bad.schedule = StepSchedule::inv_sqrt(1.0);
  bad.T = 1;
  CHECK_THROWS(bound_constants(bad));
  bad.T = 5;
  bad.spectral_gap = 0.0;
  CHECK_THROWS(bound_constants(bad));
  bad.spectral_gap = 1.5;
  CHECK_THROWS(bound_constants(bad));
}

TEST_CASE("dual disagreement") {
  CHECK(dual_disagreement({scalar(0), scalar(2)}) == doctest::Approx(1.0));
  CHECK(dual_disagreement({scalar(3), scalar(3), scalar(3)}) == 0.0);
  CHECK(dual_disagreement({scalar(0), scalar(0), scalar(3)}) == doctest::Approx((1 + 1 + 2) / 3.0));
  RandomStream rng(32, "test");
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<Parameter> z, shifted;
    const Parameter offset = oracle::random_parameter(rng, {ShapeKind::vector, 3});
    for (int k = 0; k < 5; ++k) {
      z.push_back(oracle::random_parameter(rng, {ShapeKind::vector, 3}));
      shifted.push_back(z.back() + offset);
    }
    CHECK(dual_disagreement(shifted) == doctest::Approx(dual_disagreement(z)));
  }
  CHECK_THROWS(mean_of({}));
}

TEST_CASE("bias sample") {
  const Problem p{gen_two_class(6, 2, 1.0, 1), PairwiseLoss::auc_logistic(), Regularizer::zero(),
                  StepSchedule::inv_sqrt(1.0)};
  RandomStream rng(33, "test");
  const Shape shape = p.parameter_shape();
  for (int rep = 0; rep < 50; ++rep) {
    const Parameter zbar = oracle::random_parameter(rng, shape);
    const Parameter theta = oracle::random_parameter(rng, shape);
    const int node = static_cast<int>(rng.uniform_index(6));
    const int partner = static_cast<int>(rng.uniform_index(6));
    const Parameter d = loss_grad(p.loss, theta, p.data.point(node), p.data.point(partner));
    const double w = 0.5 + rng.uniform01();
    const double t = 1.0 + 10.0 * rng.uniform01();

    const Parameter exact = exact_partial_gradient(theta, node, p.data, p.loss);
    const Parameter omega = smoothing_op(p.reg, -zbar, t, step_gamma(p.schedule, t));
    const Parameter eps = (w / 6.0) * (d - exact);
    const Parameter optimum = oracle::random_parameter(rng, shape);
    const BiasSample s = bias_sample({{node, theta, d, w}}, zbar, t, p, &optimum);
    CHECK(s.bias_term == doctest::Approx(eps.dot(omega)));
    CHECK(s.bias_term_centered == doctest::Approx((omega - optimum).dot(eps)));
    CHECK(bias_sample({{node, theta, d, w}}, zbar, t, p, &omega).bias_term_centered == 0.0);
    CHECK(std::isnan(bias_sample({{node, theta, d, w}}, zbar, t, p, nullptr).bias_term_centered));
    CHECK(bias_sample({{node, theta, exact, w}}, zbar, t, p, &optimum).bias_term ==
          doctest::Approx(0.0).epsilon(1e-14));
  }
  // Indices below one are clamped.
  CHECK_NOTHROW(bias_sample({}, Parameter::zeros(shape), 0.0, p, nullptr));
}

TEST_CASE("bias vanishes when every point is the same") {
  const Eigen::MatrixXd x = Eigen::MatrixXd::Constant(4, 3, -0.7);
  const Problem p{Dataset(x, {1, -1, 1, -1}), PairwiseLoss::auc_logistic(), Regularizer::zero(),
                  StepSchedule::inv_sqrt(1.0)};
  RandomStream rng(34, "test");
  for (int rep = 0; rep < 20; ++rep) {
    const Parameter theta = oracle::random_parameter(rng, p.parameter_shape());
    std::vector<AppliedGradient> applied;
    for (int k = 0; k < 4; ++k)
      applied.push_back({k, theta, loss_grad(p.loss, theta, p.data.point(k), p.data.point((k + 1) % 4)), 1.0});
    const BiasSample s = bias_sample(applied, oracle::random_parameter(rng, p.parameter_shape()), 3.0, p, nullptr);
    CHECK(s.bias_term == 0.0);
  }
}

TEST_CASE("objective statistics") {
  const ObjectiveStats s = objective_stats({1.0, 2.0, 3.0});
  CHECK(s.mean == doctest::Approx(2.0));
  CHECK(s.std == doctest::Approx(std::sqrt(2.0 / 3.0)));
  CHECK(s.max == 3.0);
  const ObjectiveStats inf = objective_stats({1.0, kInfeasible});
  CHECK(inf.max == kInfeasible);
  CHECK(std::isnan(inf.std));
  CHECK_THROWS(objective_stats({}));
}

TEST_CASE("smallest eigenvalue over a set") {
  CHECK(std::isnan(min_eigenvalue_over({scalar(1)})));
  CHECK(std::isnan(min_eigenvalue_over({})));
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(2, 2), b = a;
  b(1, 1) = -0.5;
  CHECK(min_eigenvalue_over({Parameter::from_symmetric(a), Parameter::from_symmetric(b)}) ==
        doctest::Approx(-0.5));
}

TEST_CASE("trace CSV layout") {
  TraceRecord r;
  r.t = 10;
  r.grad_evals = 40;
  r.obj_mean = 0.1;
  r.obj_std = 1.0 / 3.0;
  r.obj_max = 0.5;
  r.bias_avg = -2e-7;
  std::ostringstream plain, timed;
  write_trace_csv({r}, false, plain);
  write_trace_csv({r, r}, true, timed);

  std::istringstream in(plain.str());
  std::string header, row, extra;
  std::getline(in, header);
  std::getline(in, row);
  CHECK_FALSE(std::getline(in, extra));
  CHECK(header ==
        "t,grad_evals,obj_mean,obj_std,obj_max,gap_mean,bias_term,bias_term_centered,bias_avg,"
        "dual_disagreement,c3_empirical,min_eig");
  const auto cells = split(row);
  REQUIRE(cells.size() == 12);
  CHECK(cells[0] == "10");
  CHECK(cells[1] == "40");
  CHECK(std::stod(cells[3]) == 1.0 / 3.0);
  CHECK(std::stod(cells[8]) == -2e-7);
  CHECK(cells[5] == "nan");

  std::istringstream tin(timed.str());
  std::getline(tin, header);
  CHECK(split(header).size() == 16);
  CHECK(header.substr(header.size() - 24) == "m_min,m_max,m_mean,m_dev");
  int rows = 0;
  while (std::getline(tin, row)) {
    CHECK(split(row).size() == 16);
    ++rows;
  }
  CHECK(rows == 2);
}
