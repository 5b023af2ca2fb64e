// Serial reference implementations. Deliberately literal; used by tests and
// the kernel benchmark, never on the hot path.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "mrecon/kernels.hpp"

namespace mrecon::reference {

DenseTensor mode_product(const DenseTensor& x, const Matrix& m, std::size_t mode) {
  const Matrix xm = matricize(x, mode);
  if (m.cols() != xm.rows()) throw std::invalid_argument("mode_product: dimension mismatch");
  Dims out = x.dims();
  out[mode] = static_cast<std::size_t>(m.rows());
  return dematricize(m * xm, mode, out);
}

namespace {

// Centered DFT matrix: entry (k, j) = exp(s * 2 pi i (k - c)(j - c) / n) / sqrt(n), c = floor(n/2).
Matrix centered_dft_matrix(std::size_t n, double s) {
  Matrix f(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const double c = static_cast<double>(n / 2);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j) {
      // Reduce the phase index mod n before forming the angle to keep it small.
      const long long kk = static_cast<long long>(k) - static_cast<long long>(c);
      const long long jj = static_cast<long long>(j) - static_cast<long long>(c);
      long long p = (kk * jj) % static_cast<long long>(n);
      if (p < 0) p += static_cast<long long>(n);
      const double ang = s * 2.0 * std::numbers::pi * static_cast<double>(p) / static_cast<double>(n);
      f(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) =
          std::polar(scale, ang);
    }
  return f;
}

}  // namespace

DenseTensor centered_dft2_frames(const DenseTensor& x, FftDirection dir) {
  if (x.ndim() != 3) throw std::invalid_argument("centered_dft2_frames expects a 3-d tensor");
  const double s = dir == FftDirection::Forward ? -1.0 : 1.0;
  const std::size_t nx = x.dim(0), ny = x.dim(1), nt = x.dim(2);
  const Matrix fx = centered_dft_matrix(nx, s);
  const Matrix fy = centered_dft_matrix(ny, s);
  DenseTensor y(x.dims());
  for (std::size_t t = 0; t < nt; ++t) {
    Matrix frame(static_cast<Eigen::Index>(nx), static_cast<Eigen::Index>(ny));
    for (std::size_t j = 0; j < ny; ++j)
      for (std::size_t i = 0; i < nx; ++i)
        frame(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = x(i, j, t);
    const Matrix out = fx * frame * fy.transpose();
    for (std::size_t j = 0; j < ny; ++j)
      for (std::size_t i = 0; i < nx; ++i)
        y(i, j, t) = out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  return y;
}

namespace {

std::size_t stride_of(const Dims& dims, std::size_t axis) {
  if (axis >= dims.size()) throw std::out_of_range("axis out of range");
  std::size_t s = 1;
  for (std::size_t k = 0; k < axis; ++k) s *= dims[k];
  return s;
}

}  // namespace

DenseTensor forward_difference(const DenseTensor& x, std::size_t axis, bool periodic) {
  const std::size_t stride = stride_of(x.dims(), axis);
  const std::size_t n = x.dim(axis);
  DenseTensor d(x.dims());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const std::size_t j = (k / stride) % n;
    if (j + 1 < n)
      d[k] = x[k + stride] - x[k];
    else if (periodic)
      d[k] = x[k - j * stride] - x[k];
  }
  return d;
}

DenseTensor forward_difference_adjoint(const DenseTensor& d, std::size_t axis, bool periodic) {
  const std::size_t stride = stride_of(d.dims(), axis);
  const std::size_t n = d.dim(axis);
  DenseTensor x(d.dims());
  for (std::size_t k = 0; k < d.size(); ++k) {
    const std::size_t j = (k / stride) % n;
    if (periodic) {
      const std::size_t prev = j == 0 ? k + (n - 1) * stride : k - stride;
      x[k] = d[prev] - d[k];
    } else {
      if (j >= 1) x[k] += d[k - stride];
      if (j + 1 < n) x[k] -= d[k];
    }
  }
  return x;
}

double ssim_frame(std::span<const double> ref, std::span<const double> rec, std::size_t nx,
                  std::size_t ny, double dynamic_range) {
  constexpr std::size_t win = 11;
  constexpr double sigma = 1.5;
  if (nx < win || ny < win) throw std::invalid_argument("ssim: frame smaller than 11x11 window");
  if (ref.size() != nx * ny || rec.size() != nx * ny)
    throw std::invalid_argument("ssim: frame size mismatch");

  std::vector<double> w(win * win);
  double wsum = 0.0;
  for (std::size_t b = 0; b < win; ++b)
    for (std::size_t a = 0; a < win; ++a) {
      const double da = static_cast<double>(a) - 5.0, db = static_cast<double>(b) - 5.0;
      w[a + win * b] = std::exp(-(da * da + db * db) / (2.0 * sigma * sigma));
      wsum += w[a + win * b];
    }
  for (auto& v : w) v /= wsum;

  const double c1 = std::pow(0.01 * dynamic_range, 2);
  const double c2 = std::pow(0.03 * dynamic_range, 2);
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t j = 0; j + win <= ny; ++j)
    for (std::size_t i = 0; i + win <= nx; ++i) {
      double mx = 0, my = 0, sxx = 0, syy = 0, sxy = 0;
      for (std::size_t b = 0; b < win; ++b)
        for (std::size_t a = 0; a < win; ++a) {
          const double wt = w[a + win * b];
          const double p = ref[(i + a) + nx * (j + b)];
          const double q = rec[(i + a) + nx * (j + b)];
          mx += wt * p;
          my += wt * q;
          sxx += wt * p * p;
          syy += wt * q * q;
          sxy += wt * p * q;
        }
      const double vx = sxx - mx * mx, vy = syy - my * my, cxy = sxy - mx * my;
      total += ((2 * mx * my + c1) * (2 * cxy + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
      ++count;
    }
  return total / static_cast<double>(count);
}

}  // namespace mrecon::reference
