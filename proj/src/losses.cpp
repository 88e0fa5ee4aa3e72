#include "pairgossip/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pairgossip {

Dataset::Dataset(Eigen::MatrixXd features, std::vector<int> labels)
    : x_(std::move(features)), labels_(std::move(labels)) {
  if (x_.rows() != static_cast<Eigen::Index>(labels_.size()))
    throw std::invalid_argument("Dataset: feature rows and labels differ in count");
  if (labels_.size() < 2) throw std::invalid_argument("Dataset: needs at least 2 points");
  if (x_.cols() < 1) throw std::invalid_argument("Dataset: zero feature dimension");
  if (!x_.allFinite()) throw std::invalid_argument("Dataset: non-finite feature");
  for (int l : labels_) {
    if (l != 1 && l != -1) throw std::invalid_argument("Dataset: labels must be -1 or +1");
    if (l == 1) ++positives_;
  }
}

namespace {

Eigen::MatrixXd stack_points(const std::vector<DataPoint>& points) {
  if (points.empty()) throw std::invalid_argument("Dataset: no points");
  const auto d = points.front().features.size();
  Eigen::MatrixXd x(static_cast<Eigen::Index>(points.size()), d);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].features.size() != d)
      throw std::invalid_argument("Dataset: points of different dimension");
    x.row(static_cast<Eigen::Index>(i)) = points[i].features.transpose();
  }
  return x;
}

std::vector<int> collect_labels(const std::vector<DataPoint>& points) {
  std::vector<int> labels;
  labels.reserve(points.size());
  for (const auto& p : points) labels.push_back(p.label);
  return labels;
}

void require_shape(const PairwiseLoss& loss, const Parameter& theta, Eigen::Index d,
                   const char* op) {
  if (!(theta.shape() == loss.parameter_shape(static_cast<int>(d))))
    throw std::invalid_argument(std::string(op) + ": parameter shape " +
                                to_string(theta.shape()) + " does not fit " +
                                to_string(loss.kind) + " on dimension " + std::to_string(d));
}

}  // namespace

Dataset::Dataset(const std::vector<DataPoint>& points)
    : Dataset(stack_points(points), collect_labels(points)) {}

LossKind parse_loss_kind(const std::string& name) {
  if (name == "auc_logistic") return LossKind::auc_logistic;
  if (name == "metric_hinge") return LossKind::metric_hinge;
  throw std::invalid_argument("unknown loss kind: " + name);
}

std::string to_string(LossKind kind) {
  return kind == LossKind::auc_logistic ? "auc_logistic" : "metric_hinge";
}

PairwiseLoss PairwiseLoss::metric_hinge(double b) {
  if (!(b > 0.0)) throw std::invalid_argument("metric_hinge: margin b must be positive");
  return {LossKind::metric_hinge, b};
}

Shape PairwiseLoss::parameter_shape(int d) const {
  return {kind == LossKind::auc_logistic ? ShapeKind::vector : ShapeKind::symmetric_matrix, d};
}

double softplus(double s) { return s > 0.0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s)); }

double sigmoid(double s) {
  if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
  const double e = std::exp(s);
  return e / (1.0 + e);
}

double loss_value(const PairwiseLoss& loss, const Parameter& theta, const DataPoint& pi,
                  const DataPoint& pj) {
  require_shape(loss, theta, pi.features.size(), "loss_value");
  if (pj.features.size() != pi.features.size())
    throw std::invalid_argument("loss_value: points of different dimension");
  const Eigen::VectorXd diff = pj.features - pi.features;
  if (loss.kind == LossKind::auc_logistic) {
    if (!(pi.label > pj.label)) return 0.0;
    return softplus(diff.dot(theta.flat()));
  }
  const double dist = diff.dot(theta.values() * diff);
  return std::max(0.0, 1.0 - pi.label * pj.label * (loss.margin - dist));
}

void accumulate_grad(const PairwiseLoss& loss, const Parameter& theta,
                     const Eigen::Ref<const Eigen::VectorXd>& xi, int li,
                     const Eigen::Ref<const Eigen::VectorXd>& xj, int lj, double scale,
                     Parameter& out) {
  if (loss.kind == LossKind::auc_logistic) {
    if (!(li > lj)) return;
    const double s = xj.dot(theta.flat()) - xi.dot(theta.flat());
    const double w = scale * sigmoid(s);
    out.axpy_vector(w, xj);
    out.axpy_vector(-w, xi);
    return;
  }
  const Eigen::VectorXd diff = xi - xj;
  const double dist = diff.dot(theta.values() * diff);
  const double sign = li * lj;
  if (1.0 - sign * (loss.margin - dist) > 0.0) out.add_outer(scale * sign, diff);
}

Parameter loss_grad(const PairwiseLoss& loss, const Parameter& theta, const DataPoint& pi,
                    const DataPoint& pj) {
  require_shape(loss, theta, pi.features.size(), "loss_grad");
  if (pj.features.size() != pi.features.size())
    throw std::invalid_argument("loss_grad: points of different dimension");
  Parameter g = Parameter::zeros(theta.shape());
  accumulate_grad(loss, theta, pi.features, pi.label, pj.features, pj.label, 1.0, g);
  return g;
}

// Via the Gram matrix X M X^T.
Eigen::MatrixXd mahalanobis_distances(const Parameter& metric, const Eigen::MatrixXd& x) {
  if (!metric.is_matrix() || metric.dim() != x.cols())
    throw std::invalid_argument("mahalanobis_distances: needs a matching matrix parameter");
  const Eigen::MatrixXd xm = x * metric.values();
  const Eigen::MatrixXd gram = xm * x.transpose();
  const Eigen::VectorXd diag = gram.diagonal();
  Eigen::MatrixXd dist = -2.0 * gram;
  dist.colwise() += diag;
  dist.rowwise() += diag.transpose();
  return dist;
}

namespace {

// Hinge-active mask times l_i l_j.
Eigen::MatrixXd hinge_weights(const Parameter& theta, const Dataset& data, double margin) {
  const Eigen::MatrixXd dist = mahalanobis_distances(theta, data.features());
  const int n = data.size();
  Eigen::MatrixXd w(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double sign = data.label(i) * data.label(j);
      w(i, j) = 1.0 - sign * (margin - dist(i, j)) > 0.0 ? sign : 0.0;
    }
  return w;
}

}  // namespace

double pairwise_mean(const Parameter& theta, const Dataset& data, const PairwiseLoss& loss) {
  require_shape(loss, theta, data.dim(), "pairwise_mean");
  const int n = data.size();
  const double nn = static_cast<double>(n) * n;
  double total = 0.0;
  if (loss.kind == LossKind::auc_logistic) {
    const Eigen::VectorXd s = data.features() * theta.flat();
    for (int i = 0; i < n; ++i) {
      if (data.label(i) != 1) continue;
      for (int j = 0; j < n; ++j)
        if (data.label(j) == -1) total += softplus(s[j] - s[i]);
    }
    return total / nn;
  }
  const Eigen::MatrixXd dist = mahalanobis_distances(theta, data.features());
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double sign = data.label(i) * data.label(j);
      total += std::max(0.0, 1.0 - sign * (loss.margin - dist(i, j)));
    }
  return total / nn;
}

double full_objective(const Parameter& theta, const Dataset& data, const PairwiseLoss& loss,
                      const Regularizer& reg) {
  const double psi = psi_value(reg, theta);
  if (psi == kInfeasible) return kInfeasible;
  return pairwise_mean(theta, data, loss) + psi;
}

Parameter full_gradient(const Parameter& theta, const Dataset& data, const PairwiseLoss& loss) {
  require_shape(loss, theta, data.dim(), "full_gradient");
  const int n = data.size();
  const double nn = static_cast<double>(n) * n;
  const Eigen::MatrixXd& x = data.features();
  if (loss.kind == LossKind::auc_logistic) {
    const Eigen::VectorXd s = x * theta.flat();
    Eigen::VectorXd coef = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
      if (data.label(i) != 1) continue;
      for (int j = 0; j < n; ++j) {
        if (data.label(j) != -1) continue;
        const double w = sigmoid(s[j] - s[i]);
        coef[j] += w;
        coef[i] -= w;
      }
    }
    return Parameter::from_vector(x.transpose() * coef / nn);
  }
  // sum_ij w_ij (x_i - x_j)(x_i - x_j)^T = 2 X^T (diag(W 1) - W) X for symmetric W.
  Eigen::MatrixXd w = hinge_weights(theta, data, loss.margin);
  const Eigen::VectorXd rows = w.rowwise().sum();
  w = -w;
  w.diagonal() += rows;
  const Eigen::MatrixXd g = (2.0 / nn) * (x.transpose() * w * x);
  return Parameter::from_symmetric(0.5 * (g + g.transpose()));
}

Parameter exact_partial_gradient(const Parameter& theta, int i, const Dataset& data,
                                 const PairwiseLoss& loss) {
  require_shape(loss, theta, data.dim(), "exact_partial_gradient");
  const int n = data.size();
  if (i < 0 || i >= n) throw std::out_of_range("exact_partial_gradient: node index out of range");
  const Eigen::MatrixXd& x = data.features();
  const Eigen::VectorXd xi = x.row(i).transpose();
  if (loss.kind == LossKind::auc_logistic) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(data.dim());
    if (data.label(i) == 1) {
      const Eigen::VectorXd s = x * theta.flat();
      for (int j = 0; j < n; ++j) {
        if (data.label(j) != -1) continue;
        g += sigmoid(s[j] - s[i]) * (x.row(j).transpose() - xi);
      }
    }
    return Parameter::from_vector(g / n);
  }
  // Row i of the pair distances only.
  const Eigen::MatrixXd diffs = x.rowwise() - xi.transpose();  // rows x_j - x_i
  const Eigen::VectorXd dist = (diffs * theta.values()).cwiseProduct(diffs).rowwise().sum();
  Eigen::VectorXd w(n);
  for (int j = 0; j < n; ++j) {
    const double sign = data.label(i) * data.label(j);
    w[j] = 1.0 - sign * (loss.margin - dist[j]) > 0.0 ? sign : 0.0;
  }
  const Eigen::MatrixXd g = diffs.transpose() * w.asDiagonal() * diffs / n;
  return Parameter::from_symmetric(0.5 * (g + g.transpose()));
}

double auc_score(const Parameter& theta, const Dataset& data) {
  if (theta.is_matrix() || theta.dim() != data.dim())
    throw std::invalid_argument("auc_score: needs a vector parameter of the data dimension");
  if (data.num_positive() == 0 || data.num_negative() == 0)
    throw std::invalid_argument("auc_score: needs both positive and negative points");
  const Eigen::VectorXd s = data.features() * theta.flat();
  long correct = 0;
  for (int i = 0; i < data.size(); ++i) {
    if (data.label(i) != 1) continue;
    for (int j = 0; j < data.size(); ++j)
      if (data.label(j) == -1 && s[i] > s[j]) ++correct;
  }
  return static_cast<double>(correct) /
         (static_cast<double>(data.num_positive()) * data.num_negative());
}

double lipschitz_bound(const PairwiseLoss& loss, const Dataset& data) {
  const Eigen::MatrixXd& x = data.features();
  const Eigen::VectorXd sq = x.rowwise().squaredNorm();
  const Eigen::MatrixXd gram = x * x.transpose();
  double best = 0.0;
  for (int i = 0; i < data.size(); ++i)
    for (int j = i + 1; j < data.size(); ++j)
      best = std::max(best, sq[i] + sq[j] - 2.0 * gram(i, j));
  best = std::max(best, 0.0);
  return loss.kind == LossKind::auc_logistic ? std::sqrt(best) : best;
}

}  // namespace pairgossip
