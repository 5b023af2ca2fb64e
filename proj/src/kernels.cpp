#include "mrecon/kernels.hpp"

#include <fftw3.h>

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace mrecon::kernels {

namespace {

// Fixed work granularity; must not depend on the number of threads.
constexpr std::size_t kColumnChunk = 256;
constexpr std::size_t kRowChunk = 256;

using Stride = Eigen::OuterStride<>;
using ConstBlock = Eigen::Map<const Matrix, 0, Stride>;
using Block = Eigen::Map<Matrix, 0, Stride>;

std::tuple<std::size_t, std::size_t, std::size_t> split(const Dims& dims, std::size_t axis) {
  if (axis >= dims.size()) throw std::out_of_range("axis out of range");
  std::size_t left = 1, right = 1;
  for (std::size_t k = 0; k < axis; ++k) left *= dims[k];
  for (std::size_t k = axis + 1; k < dims.size(); ++k) right *= dims[k];
  return {left, dims[axis], right};
}

}  // namespace

DenseTensor mode_product(const DenseTensor& x, const Matrix& m, std::size_t mode) {
  const auto [left, n, right] = split(x.dims(), mode);
  if (static_cast<std::size_t>(m.cols()) != n)
    throw std::invalid_argument("mode_product: matrix has " + std::to_string(m.cols()) +
                                " columns, mode has size " + std::to_string(n));
  const std::size_t mrows = static_cast<std::size_t>(m.rows());
  Dims out_dims = x.dims();
  out_dims[mode] = mrows;
  DenseTensor y(out_dims);

  const cplx* in = x.data().data();
  cplx* out = y.data().data();

  if (left == 1) {
    // Mode 0: X is n x right, column-major. Y = M * X, split over column blocks.
    const std::size_t nchunks = (right + kColumnChunk - 1) / kColumnChunk;
#pragma omp parallel for schedule(static)
    for (std::size_t c = 0; c < nchunks; ++c) {
      const std::size_t c0 = c * kColumnChunk;
      const std::size_t w = std::min(kColumnChunk, right - c0);
      ConstBlock xb(in + c0 * n, static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(w),
                    Stride(static_cast<Eigen::Index>(n)));
      Block yb(out + c0 * mrows, static_cast<Eigen::Index>(mrows), static_cast<Eigen::Index>(w),
               Stride(static_cast<Eigen::Index>(mrows)));
      yb.noalias() = m * xb;
    }
    return y;
  }

  // Each slab r is a left x n column-major matrix; Y_r = X_r * M^T.
  const std::size_t row_chunks = (left + kRowChunk - 1) / kRowChunk;
  const std::size_t tasks = right * row_chunks;
  const Matrix mt = m.transpose();
#pragma omp parallel for schedule(static)
  for (std::size_t t = 0; t < tasks; ++t) {
    const std::size_t r = t / row_chunks;
    const std::size_t l0 = (t % row_chunks) * kRowChunk;
    const std::size_t h = std::min(kRowChunk, left - l0);
    ConstBlock xb(in + r * left * n + l0, static_cast<Eigen::Index>(h),
                  static_cast<Eigen::Index>(n), Stride(static_cast<Eigen::Index>(left)));
    Block yb(out + r * left * mrows + l0, static_cast<Eigen::Index>(h),
             static_cast<Eigen::Index>(mrows), Stride(static_cast<Eigen::Index>(left)));
    yb.noalias() = xb * mt;
  }
  return y;
}

namespace {

class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  // Plans are created on fftw_malloc'ed (aligned) in-place buffers and may be
  // executed concurrently through fftw_execute_dft on other aligned buffers.
  fftw_plan get(std::size_t nx, std::size_t ny, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto key = std::make_tuple(nx, ny, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * nx * ny));
    fftw_plan plan = fftw_plan_dft_2d(static_cast<int>(ny), static_cast<int>(nx), buf, buf, sign,
                                      FFTW_ESTIMATE);
    fftw_free(buf);
    if (plan == nullptr) throw std::runtime_error("FFTW plan creation failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<std::size_t, std::size_t, int>, fftw_plan> plans_;
};

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : ptr(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (ptr == nullptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* ptr;
};

}  // namespace

DenseTensor centered_fft2_frames(const DenseTensor& x, FftDirection dir) {
  if (x.ndim() != 3) throw std::invalid_argument("centered_fft2_frames expects a 3-d tensor");
  const std::size_t nx = x.dim(0), ny = x.dim(1), nt = x.dim(2);
  const std::size_t frame = nx * ny;
  const int sign = dir == FftDirection::Forward ? FFTW_FORWARD : FFTW_BACKWARD;
  fftw_plan plan = PlanCache::instance().get(nx, ny, sign);
  const double scale = 1.0 / std::sqrt(static_cast<double>(frame));
  // ifftshift before, fftshift after.
  const std::size_t pre_x = nx / 2, pre_y = ny / 2;
  const std::size_t post_x = (nx + 1) / 2, post_y = (ny + 1) / 2;

  DenseTensor y(x.dims());
  const cplx* in = x.data().data();
  cplx* out = y.data().data();

#pragma omp parallel
  {
    FftwBuffer buf(frame);
    auto* b = reinterpret_cast<cplx*>(buf.ptr);
#pragma omp for schedule(static)
    for (std::size_t t = 0; t < nt; ++t) {
      const cplx* src = in + t * frame;
      cplx* dst = out + t * frame;
      for (std::size_t j = 0; j < ny; ++j) {
        const std::size_t sj = (j + pre_y) % ny;
        for (std::size_t i = 0; i < nx; ++i) b[i + nx * j] = src[(i + pre_x) % nx + nx * sj];
      }
      fftw_execute_dft(plan, buf.ptr, buf.ptr);
      for (std::size_t j = 0; j < ny; ++j) {
        const std::size_t sj = (j + post_y) % ny;
        for (std::size_t i = 0; i < nx; ++i) dst[i + nx * j] = b[(i + post_x) % nx + nx * sj] * scale;
      }
    }
  }
  return y;
}

DenseTensor forward_difference(const DenseTensor& x, std::size_t axis, bool periodic) {
  const auto [left, n, right] = split(x.dims(), axis);
  DenseTensor d(x.dims());
  const cplx* in = x.data().data();
  cplx* out = d.data().data();
  const std::size_t total = x.size();
#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < total; ++k) {
    const std::size_t j = (k / left) % n;
    if (j + 1 < n) {
      out[k] = in[k + left] - in[k];
    } else if (periodic) {
      out[k] = in[k - j * left] - in[k];
    } else {
      out[k] = cplx{0.0, 0.0};
    }
  }
  (void)right;
  return d;
}

DenseTensor forward_difference_adjoint(const DenseTensor& d, std::size_t axis, bool periodic) {
  const auto [left, n, right] = split(d.dims(), axis);
  DenseTensor x(d.dims());
  const cplx* in = d.data().data();
  cplx* out = x.data().data();
  const std::size_t total = d.size();
#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < total; ++k) {
    const std::size_t j = (k / left) % n;
    cplx v{0.0, 0.0};
    if (periodic) {
      const std::size_t prev = j == 0 ? k + (n - 1) * left : k - left;
      v = in[prev] - in[k];
    } else {
      if (j >= 1) v += in[k - left];
      if (j + 1 < n) v -= in[k];
    }
    out[k] = v;
  }
  (void)right;
  return x;
}

namespace {

constexpr std::size_t kWin = 11;
constexpr double kSigma = 1.5;
constexpr double kK1 = 0.01;
constexpr double kK2 = 0.03;

std::array<double, kWin> gaussian_window() {
  std::array<double, kWin> w{};
  double s = 0.0;
  for (std::size_t k = 0; k < kWin; ++k) {
    const double d = static_cast<double>(k) - static_cast<double>(kWin / 2);
    w[k] = std::exp(-d * d / (2.0 * kSigma * kSigma));
    s += w[k];
  }
  for (auto& v : w) v /= s;
  return w;
}

}  // namespace

double ssim_frame(std::span<const double> ref, std::span<const double> rec, std::size_t nx,
                  std::size_t ny, double dynamic_range) {
  if (nx < kWin || ny < kWin) throw std::invalid_argument("ssim: frame smaller than 11x11 window");
  if (ref.size() != nx * ny || rec.size() != nx * ny)
    throw std::invalid_argument("ssim: frame size mismatch");
  const auto w = gaussian_window();
  const std::size_t ox = nx - kWin + 1, oy = ny - kWin + 1;

  // Pass 1: filter along x for every row -> (ox, ny) for the five moments.
  std::vector<std::array<double, 5>> tmp(ox * ny);
#pragma omp parallel for schedule(static)
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < ox; ++i) {
      std::array<double, 5> acc{};
      for (std::size_t k = 0; k < kWin; ++k) {
        const double a = ref[i + k + nx * j];
        const double b = rec[i + k + nx * j];
        acc[0] += w[k] * a;
        acc[1] += w[k] * b;
        acc[2] += w[k] * a * a;
        acc[3] += w[k] * b * b;
        acc[4] += w[k] * a * b;
      }
      tmp[i + ox * j] = acc;
    }
  }

  const double c1 = (kK1 * dynamic_range) * (kK1 * dynamic_range);
  const double c2 = (kK2 * dynamic_range) * (kK2 * dynamic_range);

  // Pass 2: filter along y; each output row j reduced to a partial sum.
  std::vector<double> row_sums(oy, 0.0);
#pragma omp parallel for schedule(static)
  for (std::size_t j = 0; j < oy; ++j) {
    double row = 0.0;
    for (std::size_t i = 0; i < ox; ++i) {
      std::array<double, 5> acc{};
      for (std::size_t k = 0; k < kWin; ++k) {
        const auto& t = tmp[i + ox * (j + k)];
        for (std::size_t q = 0; q < 5; ++q) acc[q] += w[k] * t[q];
      }
      const double mx = acc[0], my = acc[1];
      const double vx = acc[2] - mx * mx, vy = acc[3] - my * my, cxy = acc[4] - mx * my;
      row += ((2.0 * mx * my + c1) * (2.0 * cxy + c2)) /
             ((mx * mx + my * my + c1) * (vx + vy + c2));
    }
    row_sums[j] = row;
  }
  double total = 0.0;
  for (double v : row_sums) total += v;
  return total / static_cast<double>(ox * oy);
}

}  // namespace mrecon::kernels
