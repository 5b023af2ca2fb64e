#include "mrecon/mri_model.hpp"

#include <limits>
#include <stdexcept>

#include "mrecon/kernels.hpp"

namespace mrecon {

SamplingMask::SamplingMask(Dims dims, bool fill) : dims_(std::move(dims)) {
  if (dims_.empty()) throw std::invalid_argument("mask must have at least one dimension");
  for (auto n : dims_)
    if (n == 0) throw std::invalid_argument("mask dimensions must be positive");
  kept_.assign(product(dims_), fill ? 1 : 0);
}

SamplingMask::SamplingMask(Dims dims, std::vector<std::uint8_t> kept)
    : dims_(std::move(dims)), kept_(std::move(kept)) {
  if (dims_.empty()) throw std::invalid_argument("mask must have at least one dimension");
  for (auto n : dims_)
    if (n == 0) throw std::invalid_argument("mask dimensions must be positive");
  if (kept_.size() != product(dims_))
    throw std::invalid_argument("mask data length does not match dims");
  for (auto& v : kept_)
    if (v > 1) throw std::invalid_argument("mask entries must be 0 or 1");
}

std::size_t SamplingMask::kept_count() const {
  std::size_t n = 0;
  for (auto v : kept_) n += v;
  return n;
}

double SamplingMask::sampling_fraction() const {
  return static_cast<double>(kept_count()) / static_cast<double>(kept_.size());
}

double SamplingMask::acceleration() const {
  const auto k = kept_count();
  if (k == 0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(kept_.size()) / static_cast<double>(k);
}

void apply_mask(DenseTensor& y, const SamplingMask& mask) {
  if (y.dims() != mask.dims()) throw std::invalid_argument("mask dims do not match tensor dims");
  auto data = y.data();
  for (std::size_t k = 0; k < data.size(); ++k)
    if (!mask[k]) data[k] = cplx{0.0, 0.0};
}

namespace {

void check_fourier_dims(const DenseTensor& x, const SamplingMask& mask) {
  if (x.ndim() != 3) throw std::invalid_argument("Fourier encoding expects (nx, ny, nt) data");
  if (x.dims() != mask.dims()) throw std::invalid_argument("mask dims do not match image dims");
}

}  // namespace

DenseTensor forward(const DenseTensor& x, const SamplingMask& mask) {
  check_fourier_dims(x, mask);
  DenseTensor y = kernels::centered_fft2_frames(x, FftDirection::Forward);
  apply_mask(y, mask);
  return y;
}

DenseTensor adjoint(const DenseTensor& y, const SamplingMask& mask) {
  check_fourier_dims(y, mask);
  DenseTensor masked = y;
  apply_mask(masked, mask);
  return kernels::centered_fft2_frames(masked, FftDirection::Inverse);
}

DenseTensor data_gradient(const DenseTensor& x, const DenseTensor& y, const SamplingMask& mask) {
  check_fourier_dims(x, mask);
  require_same_dims(x, y, "data_gradient");
  DenseTensor r = forward(x, mask);
  r -= y;
  return adjoint(r, mask);
}

EncodingOperator::EncodingOperator(EncodingKind kind, SamplingMask mask)
    : kind_(kind), mask_(std::move(mask)) {
  if (kind_ == EncodingKind::Fourier && mask_.dims().size() != 3)
    throw std::invalid_argument("Fourier encoding needs a 3-d (kx, ky, t) mask");
}

DenseTensor EncodingOperator::forward(const DenseTensor& x) const {
  if (kind_ == EncodingKind::Fourier) return mrecon::forward(x, mask_);
  DenseTensor y = x;
  apply_mask(y, mask_);
  return y;
}

DenseTensor EncodingOperator::adjoint(const DenseTensor& y) const {
  if (kind_ == EncodingKind::Fourier) return mrecon::adjoint(y, mask_);
  DenseTensor x = y;
  apply_mask(x, mask_);
  return x;
}

}  // namespace mrecon
