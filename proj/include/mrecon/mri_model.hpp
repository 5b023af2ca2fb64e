#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mrecon/tensor.hpp"

namespace mrecon {

// Binary sampling pattern over the full (kx, ky, t) grid (or any grid shape in
// completion mode). One byte per sample, same linear order as DenseTensor.
class SamplingMask {
 public:
  SamplingMask() = default;
  explicit SamplingMask(Dims dims, bool fill = false);
  SamplingMask(Dims dims, std::vector<std::uint8_t> kept);

  const Dims& dims() const { return dims_; }
  std::size_t size() const { return kept_.size(); }
  const std::vector<std::uint8_t>& kept() const { return kept_; }

  bool operator[](std::size_t k) const { return kept_[k] != 0; }
  void set(std::size_t k, bool v) { kept_[k] = v ? 1 : 0; }
  bool operator()(std::size_t i, std::size_t j, std::size_t t) const {
    return kept_[i + dims_[0] * (j + dims_[1] * t)] != 0;
  }
  void set(std::size_t i, std::size_t j, std::size_t t, bool v) {
    kept_[i + dims_[0] * (j + dims_[1] * t)] = v ? 1 : 0;
  }

  std::size_t kept_count() const;
  double sampling_fraction() const;
  // total / kept; infinity for an empty mask.
  double acceleration() const;

  bool operator==(const SamplingMask&) const = default;

 private:
  Dims dims_;
  std::vector<std::uint8_t> kept_;
};

// Zero the entries of y that the mask does not keep.
void apply_mask(DenseTensor& y, const SamplingMask& mask);

// A = P F: per-frame centered orthonormal 2-D DFT followed by masking.
DenseTensor forward(const DenseTensor& x, const SamplingMask& mask);
// A^H = F^H P^H: zero-filled inverse transform.
DenseTensor adjoint(const DenseTensor& y, const SamplingMask& mask);
// A^H (A x - y), the gradient of 1/2 ||A x - y||^2.
DenseTensor data_gradient(const DenseTensor& x, const DenseTensor& y, const SamplingMask& mask);

enum class EncodingKind {
  Fourier,    // A = P F
  Pointwise,  // A = P, plain tensor completion
};

class EncodingOperator {
 public:
  EncodingOperator(EncodingKind kind, SamplingMask mask);

  EncodingKind kind() const { return kind_; }
  const SamplingMask& mask() const { return mask_; }

  DenseTensor forward(const DenseTensor& x) const;
  DenseTensor adjoint(const DenseTensor& y) const;

 private:
  EncodingKind kind_;
  SamplingMask mask_;
};

}  // namespace mrecon
