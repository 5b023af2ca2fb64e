#pragma once

// Hand-rolled generators and independent oracles shared by the unit tests.

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <vector>

#include "mrecon/manifold.hpp"
#include "mrecon/random.hpp"
#include "mrecon/tucker.hpp"

namespace testing_support {

using namespace mrecon;

inline std::size_t uniform_int(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.uniform() * static_cast<double>(hi - lo + 1));
}

inline Dims random_dims(Rng& rng, std::size_t d, std::size_t lo, std::size_t hi) {
  Dims dims(d);
  for (auto& n : dims) n = uniform_int(rng, lo, hi);
  return dims;
}

// Feasible rank with r_i <= n_i and r_i <= prod of the other ranks.
inline RankTuple random_feasible_rank(Rng& rng, const Dims& dims) {
  for (;;) {
    RankTuple r(dims.size());
    for (std::size_t i = 0; i < dims.size(); ++i) r[i] = uniform_int(rng, 1, dims[i]);
    if (is_feasible_rank(dims, r)) return r;
  }
}

inline TuckerTensor random_tucker(const Dims& dims, const RankTuple& r, Rng& rng) {
  TuckerTensor t;
  t.core = random_tensor(r, rng);
  for (std::size_t i = 0; i < dims.size(); ++i)
    t.factors.push_back(random_orthonormal(static_cast<Eigen::Index>(dims[i]),
                                           static_cast<Eigen::Index>(r[i]), rng));
  return t;
}

// Random tangent vector satisfying the gauge condition at x.
inline TangentVector random_tangent(const ManifoldPoint& x, Rng& rng) {
  TangentVector xi;
  xi.g = random_tensor(x.ranks(), rng);
  for (std::size_t i = 0; i < x.order(); ++i) {
    const Matrix& u = x.factor(i);
    Matrix v = random_matrix(u.rows(), u.cols(), rng);
    v -= u * (u.adjoint() * v);
    v -= u * (u.adjoint() * v);
    xi.v.push_back(v);
  }
  return xi;
}

// Entry-by-entry unfolding straight from the index formula.
inline Matrix unfold_oracle(const DenseTensor& x, std::size_t mode) {
  const Dims& n = x.dims();
  const std::size_t d = n.size();
  const std::size_t cols = x.size() / n[mode];
  Matrix m(static_cast<Eigen::Index>(n[mode]), static_cast<Eigen::Index>(cols));
  std::vector<std::size_t> idx(d, 0);
  for (std::size_t lin = 0; lin < x.size(); ++lin) {
    std::size_t rem = lin;
    for (std::size_t k = 0; k < d; ++k) {
      idx[k] = rem % n[k];
      rem /= n[k];
    }
    std::size_t col = 0, stride = 1;
    for (std::size_t k = 0; k < d; ++k) {
      if (k == mode) continue;
      col += idx[k] * stride;
      stride *= n[k];
    }
    m(static_cast<Eigen::Index>(idx[mode]), static_cast<Eigen::Index>(col)) = x[lin];
  }
  return m;
}

// Singular values from the Hermitian eigenproblem of M^H M or M M^H,
// descending. Independent of the SVD used by the library.
inline Eigen::VectorXd singular_values_oracle(const Matrix& m) {
  const Matrix g = m.rows() <= m.cols() ? Matrix(m * m.adjoint()) : Matrix(m.adjoint() * m);
  Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
  Eigen::VectorXd ev = es.eigenvalues();
  std::vector<double> s(ev.data(), ev.data() + ev.size());
  for (auto& v : s) v = std::sqrt(std::max(v, 0.0));
  std::sort(s.begin(), s.end(), std::greater<>());
  return Eigen::Map<Eigen::VectorXd>(s.data(), static_cast<Eigen::Index>(s.size()));
}

inline double tail_energy(const Eigen::VectorXd& s, std::size_t keep) {
  double e = 0.0;
  for (Eigen::Index j = static_cast<Eigen::Index>(keep); j < s.size(); ++j) e += s[j] * s[j];
  return e;
}

inline double rel_diff(const DenseTensor& a, const DenseTensor& b) {
  const double base = std::max(a.norm(), b.norm());
  return base > 0.0 ? (a - b).norm() / base : 0.0;
}

}  // namespace testing_support
