#include "pairgossip/datasets.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <Eigen/QR>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "pairgossip/random.hpp"

namespace pairgossip {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& cell, long line_no) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != cell.size())
    throw std::invalid_argument(fmt::format("line {}: cannot parse number '{}'", line_no, cell));
  return v;
}

std::vector<std::size_t> shuffled(std::size_t n, RandomStream& rng) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.uniform_index(i)]);
  return perm;
}

}  // namespace

Dataset parse_breast_cancer(std::istream& in) {
  constexpr int kAttributes = 9;
  std::vector<std::array<std::optional<double>, kAttributes>> rows;
  std::vector<int> labels;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(trim(line), ',');
    if (cells.size() != kAttributes + 2)
      throw std::invalid_argument(fmt::format("breast cancer line {}: expected {} columns, got {}",
                                              line_no, kAttributes + 2, cells.size()));
    std::array<std::optional<double>, kAttributes> row;
    for (int a = 0; a < kAttributes; ++a) {
      const std::string cell = trim(cells[a + 1]);
      if (cell != "?") row[a] = parse_double(cell, line_no);
    }
    const std::string cls = trim(cells.back());
    if (cls == "4") labels.push_back(1);
    else if (cls == "2") labels.push_back(-1);
    else throw std::invalid_argument(fmt::format("breast cancer line {}: class must be 2 or 4", line_no));
    rows.push_back(row);
  }
  if (rows.empty()) throw std::invalid_argument("breast cancer file has no rows");

  std::array<double, kAttributes> mean{};
  for (int a = 0; a < kAttributes; ++a) {
    double sum = 0.0;
    long count = 0;
    for (const auto& r : rows)
      if (r[a]) {
        sum += *r[a];
        ++count;
      }
    if (count == 0) throw std::invalid_argument(fmt::format("attribute {} is missing everywhere", a + 1));
    mean[a] = sum / static_cast<double>(count);
  }
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), kAttributes + 2);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int a = 0; a < kAttributes; ++a) x(i, a) = rows[i][a].value_or(mean[a]);
    x(i, kAttributes) = 1.0;
    x(i, kAttributes + 1) = 0.0;
  }
  return Dataset(std::move(x), std::move(labels));
}

Dataset load_breast_cancer(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_breast_cancer(in);
}

Dataset gen_gaussian_mixture(const SyntheticSpec& spec) {
  if (spec.n < 2 || spec.dim < 1 || spec.classes < 2 || spec.subspace_dim < 1 ||
      spec.subspace_dim > spec.dim)
    throw std::invalid_argument("gen_gaussian_mixture: invalid dimensions");
  if (!(spec.variance_factor >= 0.0))
    throw std::invalid_argument("gen_gaussian_mixture: variance factor must be >= 0");
  RandomStream rng(spec.seed, "data");

  Eigen::MatrixXd raw(spec.dim, spec.subspace_dim);
  for (int c = 0; c < spec.subspace_dim; ++c)
    for (int r = 0; r < spec.dim; ++r) raw(r, c) = rng.normal();
  const Eigen::MatrixXd basis =
      Eigen::HouseholderQR<Eigen::MatrixXd>(raw).householderQ() *
      Eigen::MatrixXd::Identity(spec.dim, spec.subspace_dim);

  Eigen::MatrixXd means(spec.classes, spec.dim);
  for (int c = 0; c < spec.classes; ++c) {
    Eigen::VectorXd a(spec.subspace_dim);
    for (int s = 0; s < spec.subspace_dim; ++s) a[s] = rng.normal();
    means.row(c) = (basis * a).transpose();
  }

  const auto perm = shuffled(spec.n, rng);
  Eigen::MatrixXd x(spec.n, spec.dim);
  std::vector<int> labels(spec.n);
  for (int k = 0; k < spec.n; ++k) {
    const int cls = static_cast<int>(perm[k] % spec.classes);
    labels[k] = cls % 2 == 0 ? 1 : -1;
    for (int r = 0; r < spec.dim; ++r) x(k, r) = means(cls, r) + spec.variance_factor * rng.normal();
  }
  return Dataset(std::move(x), std::move(labels));
}

Dataset gen_two_class(int n, int dim, double separation, std::uint64_t seed) {
  if (n < 2 || dim < 1) throw std::invalid_argument("gen_two_class: invalid dimensions");
  RandomStream rng(seed, "data");
  const auto perm = shuffled(n, rng);
  const double shift = 0.5 * separation / std::sqrt(static_cast<double>(dim));
  Eigen::MatrixXd x(n, dim);
  std::vector<int> labels(n);
  for (int k = 0; k < n; ++k) {
    labels[k] = perm[k] % 2 == 0 ? 1 : -1;
    for (int r = 0; r < dim; ++r) x(k, r) = labels[k] * shift + rng.normal();
  }
  return Dataset(std::move(x), std::move(labels));
}

void write_dataset_csv(const Dataset& data, std::ostream& out) {
  out << "label";
  for (int r = 0; r < data.dim(); ++r) out << ",x" << r;
  out << '\n';
  for (int k = 0; k < data.size(); ++k) {
    out << data.label(k);
    for (int r = 0; r < data.dim(); ++r) fmt::print(out, ",{:.17g}", data.features()(k, r));
    out << '\n';
  }
}

Dataset read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("dataset csv: empty input");
  const auto header = split(trim(line), ',');
  if (header.size() < 2 || trim(header[0]) != "label")
    throw std::invalid_argument("dataset csv: header must be label,x0,...");
  const std::size_t d = header.size() - 1;
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(trim(line), ',');
    if (cells.size() != d + 1)
      throw std::invalid_argument(fmt::format("dataset csv line {}: expected {} columns", line_no, d + 1));
    const double l = parse_double(trim(cells[0]), line_no);
    if (l != 1.0 && l != -1.0)
      throw std::invalid_argument(fmt::format("dataset csv line {}: label must be -1 or 1", line_no));
    labels.push_back(static_cast<int>(l));
    std::vector<double> row(d);
    for (std::size_t r = 0; r < d; ++r) row[r] = parse_double(trim(cells[r + 1]), line_no);
    rows.push_back(std::move(row));
  }
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  for (std::size_t k = 0; k < rows.size(); ++k)
    for (std::size_t r = 0; r < d; ++r) x(k, r) = rows[k][r];
  return Dataset(std::move(x), std::move(labels));
}

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_dataset_csv(in);
}

}  // namespace pairgossip
