#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pairgossip/parameter.hpp"
#include "pairgossip/regularizers.hpp"

namespace pairgossip {

struct DataPoint {
  Eigen::VectorXd features;
  int label = 1;  // -1 or +1
};

/// n >= 2 labelled points of a common dimension. Immutable.
///
/// Features are kept as one n x d matrix so that whole-dataset objectives
/// reduce to a few matrix products.
class Dataset {
 public:
  Dataset(Eigen::MatrixXd features, std::vector<int> labels);
  explicit Dataset(const std::vector<DataPoint>& points);

  int size() const { return static_cast<int>(labels_.size()); }
  int dim() const { return static_cast<int>(x_.cols()); }
  const Eigen::MatrixXd& features() const { return x_; }
  const std::vector<int>& labels() const { return labels_; }
  int label(int i) const { return labels_.at(i); }
  Eigen::VectorXd row(int i) const { return x_.row(i).transpose(); }
  DataPoint point(int i) const { return {row(i), label(i)}; }

  int num_positive() const { return positives_; }
  int num_negative() const { return size() - positives_; }

 private:
  Eigen::MatrixXd x_;
  std::vector<int> labels_;
  int positives_ = 0;
};

enum class LossKind { auc_logistic, metric_hinge };

LossKind parse_loss_kind(const std::string& name);
std::string to_string(LossKind kind);

struct PairwiseLoss {
  LossKind kind = LossKind::auc_logistic;
  double margin = 1.0;  // metric_hinge only

  static PairwiseLoss auc_logistic() { return {}; }
  static PairwiseLoss metric_hinge(double b);

  /// vector(d) for AUC, symmetric_matrix(d) for metric learning.
  Shape parameter_shape(int d) const;
};

// f(theta; x_i, x_j)
double loss_value(const PairwiseLoss& loss, const Parameter& theta, const DataPoint& pi,
                  const DataPoint& pj);
Parameter loss_grad(const PairwiseLoss& loss, const Parameter& theta, const DataPoint& pi,
                    const DataPoint& pj);

/// out += scale * grad f(theta; (xi, li), (xj, lj)) without temporaries.
void accumulate_grad(const PairwiseLoss& loss, const Parameter& theta,
                     const Eigen::Ref<const Eigen::VectorXd>& xi, int li,
                     const Eigen::Ref<const Eigen::VectorXd>& xj, int lj, double scale,
                     Parameter& out);

/// (1/n^2) sum_{i,j} f(theta; x_i, x_j), i = j included.
double pairwise_mean(const Parameter& theta, const Dataset& data, const PairwiseLoss& loss);

/// pairwise_mean + psi. Returns kInfeasible outside dom psi.
double full_objective(const Parameter& theta, const Dataset& data, const PairwiseLoss& loss,
                      const Regularizer& reg);

/// Gradient of pairwise_mean.
Parameter full_gradient(const Parameter& theta, const Dataset& data, const PairwiseLoss& loss);

/// (1/n) sum_j grad f(theta; x_i, x_j).
Parameter exact_partial_gradient(const Parameter& theta, int i, const Dataset& data,
                                 const PairwiseLoss& loss);

/// Fraction of (positive, negative) pairs ranked strictly correctly.
double auc_score(const Parameter& theta, const Dataset& data);

/// Bound on ||grad f|| over all pairs of the dataset: max ||x_j - x_i|| for
/// AUC, max ||x_j - x_i||^2 for the hinge (norm of the rank-one gradient).
double lipschitz_bound(const PairwiseLoss& loss, const Dataset& data);

/// D_ij = (x_i - x_j)^T M (x_i - x_j) for all pairs of rows of x.
Eigen::MatrixXd mahalanobis_distances(const Parameter& metric, const Eigen::MatrixXd& x);

/// log(1 + exp(s)) without overflow.
double softplus(double s);
double sigmoid(double s);

}  // namespace pairgossip
