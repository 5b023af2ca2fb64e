#include "mrecon/regularizer.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mrecon/kernels.hpp"

namespace mrecon {

void RegularizerConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("regularization weight must be finite and >= 0");
  if (kind != RegularizerKind::None && !(epsilon > 0.0))
    throw std::invalid_argument("Charbonnier epsilon must be > 0");
}

RegularizerKind parse_regularizer_kind(const std::string& s) {
  if (s == "none") return RegularizerKind::None;
  if (s == "temporal") return RegularizerKind::TemporalDifference;
  if (s == "spatial") return RegularizerKind::SpatialDifference;
  throw std::invalid_argument("unknown regularizer kind '" + s + "'");
}

std::string to_string(RegularizerKind k) {
  switch (k) {
    case RegularizerKind::None: return "none";
    case RegularizerKind::TemporalDifference: return "temporal";
    case RegularizerKind::SpatialDifference: return "spatial";
  }
  return "unknown";
}

namespace {

// (axis, periodic) pairs making up W.
std::vector<std::pair<std::size_t, bool>> difference_axes(const DenseTensor& x,
                                                          RegularizerKind kind) {
  if (kind == RegularizerKind::None) return {};
  if (x.ndim() != 3) throw std::invalid_argument("regularizer expects (nx, ny, nt) data");
  if (kind == RegularizerKind::TemporalDifference) return {{2, true}};
  return {{0, false}, {1, false}};
}

}  // namespace

double reg_value(const DenseTensor& x, const RegularizerConfig& cfg) {
  cfg.validate();
  if (cfg.kind == RegularizerKind::None || cfg.lambda == 0.0) return 0.0;
  const double eps2 = cfg.epsilon * cfg.epsilon;
  double total = 0.0;
  for (auto [axis, periodic] : difference_axes(x, cfg.kind)) {
    const DenseTensor d = kernels::forward_difference(x, axis, periodic);
    for (const auto& v : d.data()) total += std::sqrt(std::norm(v) + eps2);
  }
  return cfg.lambda * total;
}

DenseTensor reg_gradient(const DenseTensor& x, const RegularizerConfig& cfg) {
  cfg.validate();
  DenseTensor g(x.dims());
  if (cfg.kind == RegularizerKind::None || cfg.lambda == 0.0) return g;
  const double eps2 = cfg.epsilon * cfg.epsilon;
  for (auto [axis, periodic] : difference_axes(x, cfg.kind)) {
    DenseTensor d = kernels::forward_difference(x, axis, periodic);
    for (auto& v : d.data()) v /= std::sqrt(std::norm(v) + eps2);
    g += kernels::forward_difference_adjoint(d, axis, periodic);
  }
  g *= cplx{cfg.lambda, 0.0};
  return g;
}

}  // namespace mrecon
