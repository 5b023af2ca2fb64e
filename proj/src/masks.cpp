#include "mrecon/masks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "mrecon/random.hpp"

namespace mrecon {

namespace {

void check_3d(const Dims& dims) {
  if (dims.size() != 3) throw std::invalid_argument("k-t masks need dims (nx, ny, nt)");
  for (auto n : dims)
    if (n == 0) throw std::invalid_argument("mask dimensions must be positive");
}

void keep_line(SamplingMask& mask, std::size_t ky, std::size_t t) {
  for (std::size_t kx = 0; kx < mask.dims()[0]; ++kx) mask.set(kx, ky, t, true);
}

// Sum of exp(-k^2 / (2 s^2)) over the candidate offsets.
double expected_lines(const std::vector<double>& offsets, double sigma) {
  double s = 0.0;
  for (double k : offsets) s += std::exp(-k * k / (2.0 * sigma * sigma));
  return s;
}

}  // namespace

SamplingMask gen_mask_gaussian(const Dims& dims, double acceleration, std::uint64_t seed,
                               bool per_frame) {
  check_3d(dims);
  const std::size_t ny = dims[1], nt = dims[2];
  if (!(acceleration >= 1.0) || !std::isfinite(acceleration))
    throw std::invalid_argument("acceleration must be >= 1");
  if (ny < kCentralLines)
    throw std::invalid_argument("fewer than 4 phase-encode lines available");
  const auto target = static_cast<std::size_t>(std::llround(static_cast<double>(ny) / acceleration));
  if (target < kCentralLines)
    throw std::invalid_argument("acceleration too high: fewer than 4 lines per frame would remain");
  if (target >= ny) return SamplingMask(dims, true);

  const std::size_t center = ny / 2;
  const std::size_t first_central = center - kCentralLines / 2;
  std::vector<std::size_t> candidates;
  std::vector<double> offsets;
  for (std::size_t j = 0; j < ny; ++j) {
    if (j >= first_central && j < first_central + kCentralLines) continue;
    candidates.push_back(j);
    offsets.push_back(static_cast<double>(j) - static_cast<double>(center));
  }
  const std::size_t extra = target - kCentralLines;

  // Inclusion probabilities p_j = exp(-k_j^2 / (2 sigma^2)) with sum p_j = extra.
  std::vector<double> p(candidates.size(), 0.0);
  if (extra > 0) {
    double lo = 1e-3, hi = static_cast<double>(ny);
    while (expected_lines(offsets, hi) < static_cast<double>(extra)) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (expected_lines(offsets, mid) < static_cast<double>(extra) ? lo : hi) = mid;
    }
    const double sigma = 0.5 * (lo + hi);
    for (std::size_t c = 0; c < candidates.size(); ++c)
      p[c] = std::exp(-offsets[c] * offsets[c] / (2.0 * sigma * sigma));
  }

  SamplingMask mask(dims, false);
  Rng rng(seed);
  std::vector<std::size_t> frame_lines;
  for (std::size_t t = 0; t < nt; ++t) {
    for (std::size_t k = 0; k < kCentralLines; ++k) keep_line(mask, first_central + k, t);
    if (extra == 0) continue;
    if (t == 0 || per_frame) {
      // Systematic sampling: line c is chosen when an integer lies in
      // [cum_c + u - 1, cum_{c+1} + u - 1) for a single uniform offset u.
      frame_lines.clear();
      const double u = rng.uniform();
      double cum = 0.0;
      std::vector<std::uint8_t> chosen(candidates.size(), 0);
      for (std::size_t c = 0; c < candidates.size(); ++c) {
        const double before = std::floor(cum + u);
        cum += p[c];
        if (std::floor(cum + u) > before) chosen[c] = 1;
      }
      // Rounding in the cumulative sum can shift the count by one; repair by
      // adding the most probable unchosen line or dropping the least probable.
      auto count = static_cast<std::size_t>(std::count(chosen.begin(), chosen.end(), 1));
      while (count < extra) {
        std::size_t best = candidates.size();
        for (std::size_t c = 0; c < candidates.size(); ++c)
          if (!chosen[c] && (best == candidates.size() || p[c] > p[best])) best = c;
        chosen[best] = 1;
        ++count;
      }
      while (count > extra) {
        std::size_t worst = candidates.size();
        for (std::size_t c = 0; c < candidates.size(); ++c)
          if (chosen[c] && (worst == candidates.size() || p[c] < p[worst])) worst = c;
        chosen[worst] = 0;
        --count;
      }
      for (std::size_t c = 0; c < candidates.size(); ++c)
        if (chosen[c]) frame_lines.push_back(candidates[c]);
    }
    for (auto j : frame_lines) keep_line(mask, j, t);
  }
  return mask;
}

SamplingMask gen_mask_radial(const Dims& dims, std::size_t spokes, std::uint64_t seed) {
  check_3d(dims);
  if (spokes == 0) throw std::invalid_argument("number of spokes must be positive");
  const std::size_t nx = dims[0], ny = dims[1], nt = dims[2];
  const double cx = static_cast<double>(nx / 2), cy = static_cast<double>(ny / 2);
  const double rho_max = 0.5 * std::hypot(static_cast<double>(nx), static_cast<double>(ny)) + 1.0;
  const double golden = std::numbers::pi * (std::sqrt(5.0) - 1.0) / 2.0;
  Rng rng(seed);
  const double offset = rng.uniform() * std::numbers::pi / static_cast<double>(spokes);

  SamplingMask mask(dims, false);
  for (std::size_t t = 0; t < nt; ++t) {
    for (std::size_t s = 0; s < spokes; ++s) {
      const double theta = offset + static_cast<double>(s) * std::numbers::pi / static_cast<double>(spokes) +
                           static_cast<double>(t) * golden;
      const double c = std::cos(theta), sn = std::sin(theta);
      const auto steps = static_cast<long>(std::ceil(rho_max / 0.5));
      for (long q = -steps; q <= steps; ++q) {
        const double rho = 0.5 * static_cast<double>(q);
        const double kx = std::round(cx + rho * c);
        const double ky = std::round(cy + rho * sn);
        if (kx < 0 || ky < 0 || kx >= static_cast<double>(nx) || ky >= static_cast<double>(ny)) continue;
        mask.set(static_cast<std::size_t>(kx), static_cast<std::size_t>(ky), t, true);
      }
    }
  }
  return mask;
}

SamplingMask gen_mask_uniform_interleaved(const Dims& dims, std::size_t acceleration) {
  check_3d(dims);
  const std::size_t ny = dims[1], nt = dims[2];
  if (acceleration == 0 || acceleration > ny)
    throw std::invalid_argument("interleaved acceleration must be in [1, ny]");
  SamplingMask mask(dims, false);
  for (std::size_t t = 0; t < nt; ++t) {
    const std::size_t shift = t % acceleration;
    for (std::size_t j = shift; j < ny; j += acceleration) keep_line(mask, j, t);
  }
  return mask;
}

SamplingMask gen_mask_random_points(const Dims& dims, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw std::invalid_argument("sampling fraction must be in (0, 1]");
  SamplingMask mask(dims, false);
  Rng rng(seed);
  for (std::size_t k = 0; k < mask.size(); ++k) mask.set(k, rng.uniform() < fraction);
  return mask;
}

}  // namespace mrecon
