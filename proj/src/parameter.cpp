#include "pairgossip/parameter.hpp"

#include <stdexcept>

namespace pairgossip {

std::string to_string(const Shape& shape) {
  const std::string d = std::to_string(shape.dim);
  return shape.kind == ShapeKind::vector ? "vector(" + d + ")" : "symmetric_matrix(" + d + ")";
}

Parameter Parameter::zeros(Shape shape) {
  if (shape.dim < 1) throw std::invalid_argument("Parameter: dimension must be positive");
  const int cols = shape.kind == ShapeKind::vector ? 1 : shape.dim;
  return Parameter(shape, Eigen::MatrixXd::Zero(shape.dim, cols));
}

Parameter Parameter::from_vector(Eigen::VectorXd v) {
  if (v.size() < 1) throw std::invalid_argument("Parameter: empty vector");
  const Shape shape{ShapeKind::vector, static_cast<int>(v.size())};
  return Parameter(shape, Eigen::MatrixXd(std::move(v)));
}

Parameter Parameter::from_symmetric(const Eigen::MatrixXd& m) {
  if (m.rows() < 1 || m.rows() != m.cols())
    throw std::invalid_argument("Parameter: symmetric matrix must be square and non-empty");
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9 * (1.0 + m.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("Parameter: matrix is not symmetric");
  const Shape shape{ShapeKind::symmetric_matrix, static_cast<int>(m.rows())};
  return Parameter(shape, 0.5 * (m + m.transpose()));
}

void Parameter::require_same_shape(const Parameter& other, const char* op) const {
  if (!(shape_ == other.shape_))
    throw std::invalid_argument(std::string("Parameter::") + op + ": shape mismatch " +
                                to_string(shape_) + " vs " + to_string(other.shape_));
}

Parameter& Parameter::operator+=(const Parameter& other) {
  require_same_shape(other, "+=");
  values_ += other.values_;
  return *this;
}

Parameter& Parameter::operator-=(const Parameter& other) {
  require_same_shape(other, "-=");
  values_ -= other.values_;
  return *this;
}

Parameter& Parameter::operator*=(double s) {
  values_ *= s;
  return *this;
}

Parameter& Parameter::axpy(double a, const Parameter& x) {
  require_same_shape(x, "axpy");
  values_ += a * x.values_;
  return *this;
}

Parameter& Parameter::blend(double w, const Parameter& x) {
  require_same_shape(x, "blend");
  values_ = (1.0 - w) * values_ + w * x.values_;
  return *this;
}

Parameter& Parameter::axpy_vector(double a, const Eigen::Ref<const Eigen::VectorXd>& u) {
  if (is_matrix() || u.size() != shape_.dim)
    throw std::invalid_argument("Parameter::axpy_vector: needs a matching vector parameter");
  values_.col(0) += a * u;
  return *this;
}

Parameter& Parameter::add_outer(double s, const Eigen::Ref<const Eigen::VectorXd>& u) {
  if (!is_matrix() || u.size() != shape_.dim)
    throw std::invalid_argument("Parameter::add_outer: needs a matching matrix parameter");
  values_.noalias() += s * u * u.transpose();
  return *this;
}

double Parameter::dot(const Parameter& other) const {
  require_same_shape(other, "dot");
  return values_.cwiseProduct(other.values_).sum();
}

}  // namespace pairgossip
