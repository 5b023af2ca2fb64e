#include "mrecon/tensor.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>

#include "mrecon/kernels.hpp"

namespace mrecon {

std::size_t product(const Dims& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

namespace {

void validate_dims(const Dims& dims) {
  if (dims.empty()) throw std::invalid_argument("tensor must have at least one dimension");
  for (auto n : dims)
    if (n == 0) throw std::invalid_argument("tensor dimensions must be positive");
}

struct Split {
  std::size_t left;   // prod of dims before the mode
  std::size_t n;      // dim of the mode
  std::size_t right;  // prod of dims after the mode
};

Split split_at(const Dims& dims, std::size_t mode) {
  if (mode >= dims.size())
    throw std::out_of_range("mode index " + std::to_string(mode) + " out of range for " +
                            std::to_string(dims.size()) + "-d tensor");
  Split s{1, dims[mode], 1};
  for (std::size_t k = 0; k < mode; ++k) s.left *= dims[k];
  for (std::size_t k = mode + 1; k < dims.size(); ++k) s.right *= dims[k];
  return s;
}

}  // namespace

DenseTensor::DenseTensor(Dims dims) : dims_(std::move(dims)) {
  validate_dims(dims_);
  data_.assign(product(dims_), cplx{0.0, 0.0});
}

DenseTensor::DenseTensor(Dims dims, std::vector<cplx> data)
    : dims_(std::move(dims)), data_(std::move(data)) {
  validate_dims(dims_);
  if (data_.size() != product(dims_))
    throw std::invalid_argument("tensor data length " + std::to_string(data_.size()) +
                                " does not match product of dims " +
                                std::to_string(product(dims_)));
}

double DenseTensor::squared_norm() const {
  double s = 0.0;
  for (const auto& v : data_) s += std::norm(v);
  return s;
}

double DenseTensor::norm() const { return std::sqrt(squared_norm()); }

DenseTensor& DenseTensor::operator+=(const DenseTensor& other) {
  require_same_dims(*this, other, "operator+=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

DenseTensor& DenseTensor::operator-=(const DenseTensor& other) {
  require_same_dims(*this, other, "operator-=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

DenseTensor& DenseTensor::operator*=(cplx s) {
  for (auto& v : data_) v *= s;
  return *this;
}

void DenseTensor::axpy(cplx s, const DenseTensor& other) {
  require_same_dims(*this, other, "axpy");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += s * other.data_[k];
}

DenseTensor operator+(DenseTensor a, const DenseTensor& b) { return a += b; }
DenseTensor operator-(DenseTensor a, const DenseTensor& b) { return a -= b; }
DenseTensor operator*(cplx s, DenseTensor a) { return a *= s; }

cplx inner(const DenseTensor& a, const DenseTensor& b) {
  require_same_dims(a, b, "inner");
  cplx s{0.0, 0.0};
  for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
  return s;
}

double inner_real(const DenseTensor& a, const DenseTensor& b) {
  require_same_dims(a, b, "inner_real");
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    s += a[k].real() * b[k].real() + a[k].imag() * b[k].imag();
  return s;
}

void require_same_dims(const DenseTensor& a, const DenseTensor& b, const char* what) {
  if (a.dims() != b.dims())
    throw std::invalid_argument(std::string(what) + ": tensor dimensions differ");
}

Matrix matricize(const DenseTensor& x, std::size_t mode) {
  const Split s = split_at(x.dims(), mode);
  Matrix m(static_cast<Eigen::Index>(s.n), static_cast<Eigen::Index>(s.left * s.right));
  for (std::size_t r = 0; r < s.right; ++r)
    for (std::size_t j = 0; j < s.n; ++j)
      for (std::size_t l = 0; l < s.left; ++l)
        m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l + s.left * r)) =
            x[l + s.left * (j + s.n * r)];
  return m;
}

DenseTensor dematricize(const Matrix& m, std::size_t mode, const Dims& dims) {
  DenseTensor x(dims);
  const Split s = split_at(dims, mode);
  if (static_cast<std::size_t>(m.rows()) != s.n ||
      static_cast<std::size_t>(m.cols()) != s.left * s.right)
    throw std::invalid_argument("dematricize: matrix shape does not match tensor dims");
  for (std::size_t r = 0; r < s.right; ++r)
    for (std::size_t j = 0; j < s.n; ++j)
      for (std::size_t l = 0; l < s.left; ++l)
        x[l + s.left * (j + s.n * r)] =
            m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l + s.left * r));
  return x;
}

DenseTensor mode_product(const DenseTensor& x, const Matrix& m, std::size_t mode) {
  return kernels::mode_product(x, m, mode);
}

}  // namespace mrecon
