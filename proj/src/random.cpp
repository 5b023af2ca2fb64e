#include "mrecon/random.hpp"

#include <cmath>
#include <numbers>

namespace mrecon {

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double rad = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * std::numbers::pi * u2;
  spare_ = rad * std::sin(ang);
  has_spare_ = true;
  return rad * std::cos(ang);
}

cplx Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return cplx{re, im} * std::numbers::sqrt2 * 0.5;
}

DenseTensor random_tensor(const Dims& dims, Rng& rng) {
  DenseTensor x(dims);
  for (auto& v : x.data()) v = rng.complex_normal();
  return x;
}

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.complex_normal();
  return m;
}

Matrix random_orthonormal(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  const Matrix a = random_matrix(rows, cols, rng);
  Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ() * Matrix::Identity(rows, cols);
}

}  // namespace mrecon
