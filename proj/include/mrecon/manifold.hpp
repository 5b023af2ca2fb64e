#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "mrecon/tucker.hpp"

namespace mrecon {

// Raised when a core unfolding loses full row rank, i.e. the point sits
// (numerically) on the boundary of the fixed-rank manifold.
class RankDeficientError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Threshold on sigma_min / sigma_max of every core unfolding.
inline constexpr double kCoreConditionFloor = 1e-10;
// Tolerance on ||U_i^H U_i - I|| and on the gauge ||V_i^H U_i||.
inline constexpr double kOrthonormalTol = 1e-10;

// dim M_r = prod r_j + sum_i (r_i n_i - r_i^2)
std::size_t manifold_dim(const Dims& dims, const RankTuple& r);

// A point x = C x_1 U_1 ... x_d U_d of the fixed-rank manifold together with
// the cached core unfoldings, their pseudo-inverses and the ambient tensor.
class ManifoldPoint {
 public:
  explicit ManifoldPoint(TuckerTensor t);

  const TuckerTensor& tucker() const { return tucker_; }
  const DenseTensor& core() const { return tucker_.core; }
  const Matrix& factor(std::size_t i) const { return tucker_.factors[i]; }
  const std::vector<Matrix>& factors() const { return tucker_.factors; }
  const DenseTensor& ambient() const { return ambient_; }
  Dims dims() const { return ambient_.dims(); }
  RankTuple ranks() const { return tucker_.core.dims(); }
  std::size_t order() const { return tucker_.factors.size(); }

  const Matrix& core_unfolding(std::size_t i) const { return unfoldings_[i]; }
  // C_(i)^H (C_(i) C_(i)^H)^{-1}
  const Matrix& core_pinv(std::size_t i) const { return pinvs_[i]; }
  // sigma_min / sigma_max of C_(i)
  double core_condition_ratio(std::size_t i) const { return condition_[i]; }

 private:
  TuckerTensor tucker_;
  DenseTensor ambient_;
  std::vector<Matrix> unfoldings_;
  std::vector<Matrix> pinvs_;
  std::vector<double> condition_;
};

// Tangent vector G x_i U_i + sum_i C x_i V_i x_{j != i} U_j, gauge V_i^H U_i = 0.
struct TangentVector {
  DenseTensor g;
  std::vector<Matrix> v;

  TangentVector& operator*=(double s);
  TangentVector operator-() const;
};

TangentVector zero_tangent(const ManifoldPoint& x);

// max_i ||V_i^H U_i||_F
double gauge_error(const ManifoldPoint& x, const TangentVector& xi);

DenseTensor tangent_embed(const ManifoldPoint& x, const TangentVector& xi);

// ||tangent_embed(x, xi)||_F evaluated from the parameters:
// sqrt(||G||^2 + sum_i ||V_i C_(i)||^2), exact under the gauge condition.
double tangent_norm(const ManifoldPoint& x, const TangentVector& xi);

// Orthogonal projection of an ambient tensor onto the tangent space at x:
// G = A x_j U_j^H (all j); V_i = (I - U_i U_i^H) [A x_{j != i} U_j^H]_(i) C_(i)^+.
TangentVector project_tangent(const ManifoldPoint& x, const DenseTensor& a);

// Projection of the ambient Euclidean gradient.
TangentVector riemannian_gradient(const ManifoldPoint& x, const DenseTensor& euclidean_grad);

// HOSVD retraction of x + step * xi. The caller passes the direction to move
// along; a descent step uses -grad with a positive step.
ManifoldPoint retract(const ManifoldPoint& x, const TangentVector& xi, double step);

}  // namespace mrecon
