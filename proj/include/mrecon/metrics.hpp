#pragma once

#include <vector>

#include "mrecon/tensor.hpp"

namespace mrecon {

// All metrics compare magnitude images. For (nx, ny, nt) inputs the per-frame
// breakdown uses the whole-volume max(ref) as peak/dynamic range.
struct MetricReport {
  double mse = 0.0;
  double psnr = 0.0;  // dB, +inf when rec == ref
  double ssim = 0.0;
  std::vector<double> frame_mse;
  std::vector<double> frame_psnr;
  std::vector<double> frame_ssim;
};

// Magnitudes of a complex tensor.
std::vector<double> magnitude(const DenseTensor& x);

// ||ref - rec||^2 / N over magnitudes.
double mse(const DenseTensor& ref, const DenseTensor& rec);

// 20 log10(max(ref) sqrt(N) / ||ref - rec||). Throws for an all-zero ref.
double psnr(const DenseTensor& ref, const DenseTensor& rec);

// Mean over frames of the mean-SSIM map (11x11 Gaussian window, sigma 1.5,
// K1 = 0.01, K2 = 0.03, L = max(ref), valid positions only).
double ssim(const DenseTensor& ref, const DenseTensor& rec);

// SSIM of two real-valued frames (column-major, nx fastest).
double ssim_real(const std::vector<double>& ref, const std::vector<double>& rec, std::size_t nx,
                 std::size_t ny, double dynamic_range);

MetricReport evaluate_metrics(const DenseTensor& ref, const DenseTensor& rec);

}  // namespace mrecon
