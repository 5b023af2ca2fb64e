#include "mrecon/tucker.hpp"

#include <sstream>
#include <stdexcept>
#include <string>

#include "mrecon/linalg.hpp"

namespace mrecon {

bool is_feasible_rank(const Dims& dims, const RankTuple& r) {
  if (r.size() != dims.size() || r.empty()) return false;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] < 1 || r[i] > dims[i]) return false;
    std::size_t others = 1;
    for (std::size_t j = 0; j < r.size(); ++j)
      if (j != i) others *= r[j];
    if (r.size() > 1 && r[i] > others) return false;
  }
  return true;
}

void require_feasible_rank(const Dims& dims, const RankTuple& r) {
  if (!is_feasible_rank(dims, r)) {
    std::ostringstream os;
    os << "infeasible multilinear rank (";
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << ") for dims (";
    for (std::size_t i = 0; i < dims.size(); ++i) os << (i ? "," : "") << dims[i];
    os << ")";
    throw std::invalid_argument(os.str());
  }
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("cannot parse integer list '" + text + "'");
    }
    if (pos != item.size() && item.find_first_not_of(" \t", pos) != std::string::npos)
      throw std::invalid_argument("cannot parse integer list '" + text + "'");
    if (v < 0) throw std::invalid_argument("negative entry in list '" + text + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw std::invalid_argument("empty integer list");
  return out;
}

Dims TuckerTensor::dims() const {
  Dims d;
  for (const auto& u : factors) d.push_back(static_cast<std::size_t>(u.rows()));
  return d;
}

RankTuple TuckerTensor::ranks() const { return core.dims(); }

void TuckerTensor::validate_shapes() const {
  if (factors.size() != core.ndim())
    throw std::invalid_argument("Tucker tensor: factor count does not match core order");
  for (std::size_t i = 0; i < factors.size(); ++i)
    if (static_cast<std::size_t>(factors[i].cols()) != core.dim(i))
      throw std::invalid_argument("Tucker tensor: factor " + std::to_string(i) +
                                  " column count does not match core dimension");
}

double TuckerTensor::orthonormality_error() const {
  double worst = 0.0;
  for (const auto& u : factors) {
    const Matrix g = u.adjoint() * u - Matrix::Identity(u.cols(), u.cols());
    worst = std::max(worst, g.norm());
  }
  return worst;
}

DenseTensor tucker_assemble(const TuckerTensor& t) {
  t.validate_shapes();
  DenseTensor x = t.core;
  for (std::size_t i = 0; i < t.factors.size(); ++i) x = mode_product(x, t.factors[i], i);
  return x;
}

TuckerTensor hosvd_truncate(const DenseTensor& x, const RankTuple& r) {
  require_feasible_rank(x.dims(), r);
  TuckerTensor t;
  DenseTensor y = x;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const auto n = static_cast<Eigen::Index>(x.dim(i));
    if (r[i] == x.dim(i)) {
      t.factors.push_back(Matrix::Identity(n, n));
      continue;
    }
    Matrix u = leading_left_singular_vectors(matricize(y, i), r[i]);
    y = mode_product(y, u.adjoint(), i);
    t.factors.push_back(std::move(u));
  }
  t.core = std::move(y);
  return t;
}

RankTuple multilinear_rank(const DenseTensor& x, double rel_tol) {
  RankTuple r;
  for (std::size_t i = 0; i < x.ndim(); ++i) {
    const Eigen::VectorXd s = singular_values(matricize(x, i));
    std::size_t k = 0;
    const double top = s.size() > 0 ? s(0) : 0.0;
    for (Eigen::Index j = 0; j < s.size(); ++j)
      if (s(j) > rel_tol * top && top > 0.0) ++k;
    r.push_back(k);
  }
  return r;
}

}  // namespace mrecon
