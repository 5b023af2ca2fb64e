#pragma once

// Data-parallel kernels (OpenMP) and their serial reference counterparts.
// Work is split into fixed-size chunks independent of the thread count, and
// every output element is produced by exactly one thread, so results are
// bit-identical for any OMP_NUM_THREADS.

#include <cstddef>
#include <span>

#include "mrecon/tensor.hpp"

namespace mrecon {

enum class FftDirection { Forward, Inverse };

namespace kernels {

DenseTensor mode_product(const DenseTensor& x, const Matrix& m, std::size_t mode);

// Centered, orthonormal 2-D DFT applied to each frame of an (nx, ny, nt) tensor.
DenseTensor centered_fft2_frames(const DenseTensor& x, FftDirection dir);

// First-order forward difference along `axis`. Periodic boundary when
// `periodic`, otherwise replicate (difference at the last index is zero).
DenseTensor forward_difference(const DenseTensor& x, std::size_t axis, bool periodic);
DenseTensor forward_difference_adjoint(const DenseTensor& d, std::size_t axis, bool periodic);

// Mean SSIM of a single real frame pair (column-major, nx fastest) using an
// 11x11 Gaussian window (sigma 1.5) over valid positions only.
double ssim_frame(std::span<const double> ref, std::span<const double> rec, std::size_t nx,
                  std::size_t ny, double dynamic_range);

}  // namespace kernels

namespace reference {

// y_(mode) = M * x_(mode) computed literally through the unfolding.
DenseTensor mode_product(const DenseTensor& x, const Matrix& m, std::size_t mode);

// Direct (separable) evaluation of the centered DFT sum, O(n^3) per frame.
DenseTensor centered_dft2_frames(const DenseTensor& x, FftDirection dir);

DenseTensor forward_difference(const DenseTensor& x, std::size_t axis, bool periodic);
DenseTensor forward_difference_adjoint(const DenseTensor& d, std::size_t axis, bool periodic);

double ssim_frame(std::span<const double> ref, std::span<const double> rec, std::size_t nx,
                  std::size_t ny, double dynamic_range);

}  // namespace reference

}  // namespace mrecon
