#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mrecon {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Dims = std::vector<std::size_t>;

std::size_t product(const Dims& dims);

// Dense complex tensor. Linear order is first-index-fastest:
// element (j_0, ..., j_{d-1}) lives at j_0 + n_0 * (j_1 + n_1 * (j_2 + ...)).
class DenseTensor {
 public:
  DenseTensor() = default;
  explicit DenseTensor(Dims dims);
  DenseTensor(Dims dims, std::vector<cplx> data);

  const Dims& dims() const { return dims_; }
  std::size_t ndim() const { return dims_.size(); }
  std::size_t dim(std::size_t i) const { return dims_.at(i); }
  std::size_t size() const { return data_.size(); }

  std::span<const cplx> data() const { return data_; }
  std::span<cplx> data() { return data_; }
  const std::vector<cplx>& storage() const { return data_; }

  cplx& operator[](std::size_t k) { return data_[k]; }
  const cplx& operator[](std::size_t k) const { return data_[k]; }

  // 3-D convenience accessors.
  cplx& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return data_[i + dims_[0] * (j + dims_[1] * k)];
  }
  const cplx& operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[i + dims_[0] * (j + dims_[1] * k)];
  }

  double squared_norm() const;
  double norm() const;

  DenseTensor& operator+=(const DenseTensor& other);
  DenseTensor& operator-=(const DenseTensor& other);
  DenseTensor& operator*=(cplx s);

  // this += s * other
  void axpy(cplx s, const DenseTensor& other);

  bool operator==(const DenseTensor& other) const = default;

 private:
  Dims dims_;
  std::vector<cplx> data_;
};

DenseTensor operator+(DenseTensor a, const DenseTensor& b);
DenseTensor operator-(DenseTensor a, const DenseTensor& b);
DenseTensor operator*(cplx s, DenseTensor a);

// <a, b> = sum conj(a) * b
cplx inner(const DenseTensor& a, const DenseTensor& b);
// Real inner product Re<a, b>, the metric used for gradients of real functions.
double inner_real(const DenseTensor& a, const DenseTensor& b);

void require_same_dims(const DenseTensor& a, const DenseTensor& b, const char* what);

// Mode-i unfolding (zero-based mode). Row index j_i; column index
// sum_{k != i} j_k * J_k with J_k = prod_{m < k, m != i} n_m.
Matrix matricize(const DenseTensor& x, std::size_t mode);
DenseTensor dematricize(const Matrix& m, std::size_t mode, const Dims& dims);

// y = x x_mode M, i.e. y_(mode) = M * x_(mode). Runs the parallel kernel.
DenseTensor mode_product(const DenseTensor& x, const Matrix& m, std::size_t mode);

}  // namespace mrecon
