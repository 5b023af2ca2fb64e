#include "mrecon/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>

#include "mrecon/kernels.hpp"

namespace mrecon {

std::vector<double> magnitude(const DenseTensor& x) {
  std::vector<double> m(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) m[k] = std::abs(x[k]);
  return m;
}

namespace {

double squared_diff(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return s;
}

double psnr_from(double peak, double n, double sq) {
  if (sq == 0.0) return std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(peak * std::sqrt(n) / std::sqrt(sq));
}

double peak_of(const std::vector<double>& m) {
  const double peak = m.empty() ? 0.0 : *std::max_element(m.begin(), m.end());
  if (!(peak > 0.0)) throw std::domain_error("psnr undefined: reference image is all zero");
  return peak;
}

void frame_shape(const DenseTensor& x, std::size_t& nx, std::size_t& ny, std::size_t& nt) {
  if (x.ndim() == 2) {
    nx = x.dim(0), ny = x.dim(1), nt = 1;
  } else if (x.ndim() == 3) {
    nx = x.dim(0), ny = x.dim(1), nt = x.dim(2);
  } else {
    throw std::invalid_argument("ssim expects 2-d frames or (nx, ny, nt) data");
  }
}

}  // namespace

double mse(const DenseTensor& ref, const DenseTensor& rec) {
  require_same_dims(ref, rec, "mse");
  const auto a = magnitude(ref), b = magnitude(rec);
  return squared_diff(a, b) / static_cast<double>(a.size());
}

double psnr(const DenseTensor& ref, const DenseTensor& rec) {
  require_same_dims(ref, rec, "psnr");
  const auto a = magnitude(ref), b = magnitude(rec);
  return psnr_from(peak_of(a), static_cast<double>(a.size()), squared_diff(a, b));
}

double ssim_real(const std::vector<double>& ref, const std::vector<double>& rec, std::size_t nx,
                 std::size_t ny, double dynamic_range) {
  return kernels::ssim_frame(ref, rec, nx, ny, dynamic_range);
}

double ssim(const DenseTensor& ref, const DenseTensor& rec) {
  return evaluate_metrics(ref, rec).ssim;
}

MetricReport evaluate_metrics(const DenseTensor& ref, const DenseTensor& rec) {
  require_same_dims(ref, rec, "metrics");
  std::size_t nx = 0, ny = 0, nt = 0;
  frame_shape(ref, nx, ny, nt);
  const auto a = magnitude(ref), b = magnitude(rec);
  const double peak = peak_of(a);
  const std::size_t frame = nx * ny;

  MetricReport rep;
  rep.mse = squared_diff(a, b) / static_cast<double>(a.size());
  rep.psnr = psnr_from(peak, static_cast<double>(a.size()), squared_diff(a, b));
  double ssim_sum = 0.0;
  for (std::size_t t = 0; t < nt; ++t) {
    std::span<const double> fa(a.data() + t * frame, frame), fb(b.data() + t * frame, frame);
    const double sq = squared_diff(fa, fb);
    rep.frame_mse.push_back(sq / static_cast<double>(frame));
    rep.frame_psnr.push_back(psnr_from(peak, static_cast<double>(frame), sq));
    rep.frame_ssim.push_back(kernels::ssim_frame(fa, fb, nx, ny, peak));
    ssim_sum += rep.frame_ssim.back();
  }
  rep.ssim = ssim_sum / static_cast<double>(nt);
  return rep;
}

}  // namespace mrecon
