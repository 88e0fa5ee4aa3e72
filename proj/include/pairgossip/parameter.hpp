#pragma once

#include <string>

#include <Eigen/Dense>

namespace pairgossip {

enum class ShapeKind { vector, symmetric_matrix };

struct Shape {
  ShapeKind kind = ShapeKind::vector;
  int dim = 0;

  bool operator==(const Shape&) const = default;
};

std::string to_string(const Shape& shape);

/// Model point: a d-vector or a d x d symmetric matrix, viewed uniformly as
/// an element of a Euclidean space (Frobenius inner product for matrices).
///
/// Storage is a d x 1 or d x d Eigen matrix. Mutation goes only through the
/// linear-space operations below, which keep matrices symmetric.
class Parameter {
 public:
  Parameter() = default;

  static Parameter zeros(Shape shape);
  static Parameter from_vector(Eigen::VectorXd v);
  /// Symmetrizes `m`; throws if it is not square or not symmetric to 1e-9 relative.
  static Parameter from_symmetric(const Eigen::MatrixXd& m);

  const Shape& shape() const { return shape_; }
  int dim() const { return shape_.dim; }
  bool is_matrix() const { return shape_.kind == ShapeKind::symmetric_matrix; }

  const Eigen::MatrixXd& values() const { return values_; }
  Eigen::Map<const Eigen::VectorXd> flat() const {
    return {values_.data(), values_.size()};
  }

  Parameter& operator+=(const Parameter& other);
  Parameter& operator-=(const Parameter& other);
  Parameter& operator*=(double s);
  /// this += a * x
  Parameter& axpy(double a, const Parameter& x);
  /// this = (1 - w) * this + w * x
  Parameter& blend(double w, const Parameter& x);
  void set_zero() { values_.setZero(); }

  // Adds a * u. Vector shape only.
  Parameter& axpy_vector(double a, const Eigen::Ref<const Eigen::VectorXd>& u);
  // Adds s * u u^T. Matrix shape only.
  Parameter& add_outer(double s, const Eigen::Ref<const Eigen::VectorXd>& u);

  // Coefficient-wise maps keep symmetry.
  template <class F>
  Parameter map_coeffs(F f) const {
    return Parameter(shape_, values_.unaryExpr(f).eval());
  }

  double dot(const Parameter& other) const;
  double squared_norm() const { return values_.squaredNorm(); }
  double norm() const { return values_.norm(); }
  bool all_finite() const { return values_.allFinite(); }

  friend Parameter operator+(Parameter a, const Parameter& b) { return a += b; }
  friend Parameter operator-(Parameter a, const Parameter& b) { return a -= b; }
  friend Parameter operator*(double s, Parameter a) { return a *= s; }
  friend Parameter operator-(Parameter a) { return a *= -1.0; }

 private:
  Parameter(Shape shape, Eigen::MatrixXd values) : shape_(shape), values_(std::move(values)) {}
  void require_same_shape(const Parameter& other, const char* op) const;

  Shape shape_{};
  Eigen::MatrixXd values_;
};

}  // namespace pairgossip
