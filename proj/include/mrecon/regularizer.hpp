#pragma once

#include <string>

#include "mrecon/tensor.hpp"

namespace mrecon {

enum class RegularizerKind {
  None,
  TemporalDifference,  // along t, periodic boundary
  SpatialDifference,   // along x and along y, replicate boundary
};

struct RegularizerConfig {
  RegularizerKind kind = RegularizerKind::TemporalDifference;
  double epsilon = 1e-3;  // Charbonnier smoothing
  double lambda = 0.0;

  void validate() const;
};

RegularizerKind parse_regularizer_kind(const std::string& s);
std::string to_string(RegularizerKind k);

// lambda * D_eps(x), D_eps(x) = sum sqrt(|W x|^2 + eps^2) over every difference
// entry (summed over both spatial axes for SpatialDifference).
double reg_value(const DenseTensor& x, const RegularizerConfig& cfg);

// lambda * grad D_eps(x) = lambda * W^H (W x / sqrt(|W x|^2 + eps^2)).
DenseTensor reg_gradient(const DenseTensor& x, const RegularizerConfig& cfg);

}  // namespace mrecon
