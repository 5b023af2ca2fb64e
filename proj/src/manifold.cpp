#include "mrecon/manifold.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "mrecon/linalg.hpp"

namespace mrecon {

std::size_t manifold_dim(const Dims& dims, const RankTuple& r) {
  require_feasible_rank(dims, r);
  std::size_t core = 1;
  for (auto ri : r) core *= ri;
  std::size_t total = core;
  for (std::size_t i = 0; i < r.size(); ++i) total += r[i] * dims[i] - r[i] * r[i];
  return total;
}

ManifoldPoint::ManifoldPoint(TuckerTensor t) : tucker_(std::move(t)) {
  tucker_.validate_shapes();
  require_feasible_rank(tucker_.dims(), tucker_.ranks());
  const double orth = tucker_.orthonormality_error();
  if (orth > kOrthonormalTol) {
    std::ostringstream os;
    os << "manifold point factors are not orthonormal (error " << orth << ")";
    throw std::invalid_argument(os.str());
  }
  ambient_ = tucker_assemble(tucker_);
  for (std::size_t i = 0; i < order(); ++i) {
    Matrix c = matricize(tucker_.core, i);
    const Eigen::VectorXd s = singular_values(c);
    const double top = s.size() ? s(0) : 0.0;
    const double ratio = top > 0.0 ? s(s.size() - 1) / top : 0.0;
    if (!(ratio > kCoreConditionFloor)) {
      std::ostringstream os;
      os << "core unfolding " << i << " is rank deficient (sigma_min/sigma_max = " << ratio << ")";
      throw RankDeficientError(os.str());
    }
    // C^H = Q R  =>  C C^H = R^H R and C^H (C C^H)^{-1} = Q R^{-H}.
    const Matrix ch = c.adjoint();
    Eigen::HouseholderQR<Matrix> qr(ch);
    const auto rows = c.rows();
    const Matrix q = qr.householderQ() * Matrix::Identity(ch.rows(), rows);
    const Matrix r = qr.matrixQR().topRows(rows).triangularView<Eigen::Upper>();
    // Solve X R^H = Q for X, i.e. R X^H = Q^H.
    const Matrix xh = r.triangularView<Eigen::Upper>().solve(q.adjoint());
    pinvs_.push_back(xh.adjoint());
    unfoldings_.push_back(std::move(c));
    condition_.push_back(ratio);
  }
}

TangentVector& TangentVector::operator*=(double s) {
  g *= cplx{s, 0.0};
  for (auto& m : v) m *= s;
  return *this;
}

TangentVector TangentVector::operator-() const {
  TangentVector out = *this;
  out *= -1.0;
  return out;
}

TangentVector zero_tangent(const ManifoldPoint& x) {
  TangentVector xi{DenseTensor(x.ranks()), {}};
  for (std::size_t i = 0; i < x.order(); ++i)
    xi.v.push_back(Matrix::Zero(x.factor(i).rows(), x.factor(i).cols()));
  return xi;
}

namespace {

void check_tangent_shapes(const ManifoldPoint& x, const TangentVector& xi) {
  if (xi.g.dims() != x.ranks() || xi.v.size() != x.order())
    throw std::invalid_argument("tangent vector does not match the base point's ranks");
  for (std::size_t i = 0; i < x.order(); ++i)
    if (xi.v[i].rows() != x.factor(i).rows() || xi.v[i].cols() != x.factor(i).cols())
      throw std::invalid_argument("tangent factor perturbation " + std::to_string(i) +
                                  " has the wrong shape");
}

bool full_mode(const ManifoldPoint& x, std::size_t i) {
  return x.factor(i).rows() == x.factor(i).cols();
}

}  // namespace

double gauge_error(const ManifoldPoint& x, const TangentVector& xi) {
  check_tangent_shapes(x, xi);
  double worst = 0.0;
  for (std::size_t i = 0; i < x.order(); ++i)
    worst = std::max(worst, (xi.v[i].adjoint() * x.factor(i)).norm());
  return worst;
}

DenseTensor tangent_embed(const ManifoldPoint& x, const TangentVector& xi) {
  check_tangent_shapes(x, xi);
  for (std::size_t i = 0; i < x.order(); ++i) {
    const double err = (xi.v[i].adjoint() * x.factor(i)).norm();
    if (err > kOrthonormalTol * std::max(1.0, xi.v[i].norm())) {
      std::ostringstream os;
      os << "tangent vector violates the gauge condition in mode " << i << " (" << err << ")";
      throw std::invalid_argument(os.str());
    }
  }
  DenseTensor out = tucker_assemble(TuckerTensor{xi.g, x.factors()});
  for (std::size_t i = 0; i < x.order(); ++i) {
    if (full_mode(x, i)) continue;  // V_i = 0 is forced by the gauge
    DenseTensor term = x.core();
    for (std::size_t j = 0; j < x.order(); ++j)
      term = mode_product(term, j == i ? xi.v[i] : x.factor(j), j);
    out += term;
  }
  return out;
}

double tangent_norm(const ManifoldPoint& x, const TangentVector& xi) {
  check_tangent_shapes(x, xi);
  double s = xi.g.squared_norm();
  for (std::size_t i = 0; i < x.order(); ++i) {
    if (full_mode(x, i)) continue;
    s += (xi.v[i] * x.core_unfolding(i)).squaredNorm();
  }
  return std::sqrt(s);
}

TangentVector project_tangent(const ManifoldPoint& x, const DenseTensor& a) {
  if (a.dims() != x.dims())
    throw std::invalid_argument("project_tangent: tensor does not have the ambient dims");
  const std::size_t d = x.order();
  TangentVector xi;
  xi.g = a;
  for (std::size_t j = 0; j < d; ++j) xi.g = mode_product(xi.g, x.factor(j).adjoint(), j);
  for (std::size_t i = 0; i < d; ++i) {
    const Matrix& u = x.factor(i);
    if (full_mode(x, i)) {
      xi.v.push_back(Matrix::Zero(u.rows(), u.cols()));
      continue;
    }
    DenseTensor b = a;
    for (std::size_t j = 0; j < d; ++j)
      if (j != i) b = mode_product(b, x.factor(j).adjoint(), j);
    const Matrix w = matricize(b, i) * x.core_pinv(i);
    Matrix v = w - u * (u.adjoint() * w);
    v -= u * (u.adjoint() * v);  // second pass keeps V^H U at rounding level relative to V
    xi.v.push_back(std::move(v));
  }
  return xi;
}

TangentVector riemannian_gradient(const ManifoldPoint& x, const DenseTensor& euclidean_grad) {
  return project_tangent(x, euclidean_grad);
}

ManifoldPoint retract(const ManifoldPoint& x, const TangentVector& xi, double step) {
  DenseTensor y = x.ambient();
  if (step != 0.0) y.axpy(cplx{step, 0.0}, tangent_embed(x, xi));
  return ManifoldPoint(hosvd_truncate(y, x.ranks()));
}

}  // namespace mrecon
