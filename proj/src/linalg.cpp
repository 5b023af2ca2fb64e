#include "mrecon/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mrecon {

namespace {

void check_k(const Matrix& m, std::size_t k) {
  const auto lim = static_cast<std::size_t>(std::min(m.rows(), m.cols()));
  if (k == 0 || k > lim)
    throw std::out_of_range("truncated_svd: k=" + std::to_string(k) + " outside [1, " +
                            std::to_string(lim) + "]");
}

// Phase that makes the largest-magnitude entry of column j real positive.
cplx canonical_phase(const Matrix& u, Eigen::Index j) {
  Eigen::Index best = 0;
  double best_abs = -1.0;
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    const double a = std::abs(u(i, j));
    if (a > best_abs) {
      best_abs = a;
      best = i;
    }
  }
  if (best_abs == 0.0) return {1.0, 0.0};
  return std::conj(u(best, j)) / best_abs;
}

}  // namespace

SvdResult truncated_svd(const Matrix& m, std::size_t k) {
  check_k(m, k);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto kk = static_cast<Eigen::Index>(k);
  SvdResult r{svd.matrixU().leftCols(kk), svd.singularValues().head(kk),
              svd.matrixV().leftCols(kk)};
  for (Eigen::Index j = 0; j < kk; ++j) {
    const cplx ph = canonical_phase(r.u, j);
    r.u.col(j) *= ph;
    r.v.col(j) *= ph;
  }
  return r;
}

Matrix leading_left_singular_vectors(const Matrix& m, std::size_t k) {
  check_k(m, k);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  Matrix u = svd.matrixU().leftCols(static_cast<Eigen::Index>(k));
  for (Eigen::Index j = 0; j < u.cols(); ++j) u.col(j) *= canonical_phase(u, j);
  return u;
}

Eigen::VectorXd singular_values(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues();
}

}  // namespace mrecon
