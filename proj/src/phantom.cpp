#include "mrecon/phantom.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "mrecon/random.hpp"

namespace mrecon {

namespace {

struct Ellipse {
  double cx, cy;  // center, normalized [-1, 1] coordinates
  double a, b;    // semi-axes, normalized
  double angle;
  double intensity;
  bool moving;
  double phase;
};

std::vector<Ellipse> make_ellipses(std::size_t count, Rng& rng) {
  std::vector<Ellipse> out;
  for (std::size_t k = 0; k < count; ++k) {
    if (k == 0) {
      out.push_back({0.0, 0.0, 0.85, 0.7, 0.0, 0.3, false, 0.0});
    } else if (k == 1) {
      out.push_back({0.1, -0.05, 0.28, 0.22, 0.3, 0.7, true, 0.0});
    } else {
      const double r = 0.55 * std::sqrt(rng.uniform());
      const double phi = 2.0 * std::numbers::pi * rng.uniform();
      Ellipse e{};
      e.cx = r * std::cos(phi);
      e.cy = r * std::sin(phi);
      e.a = rng.uniform(0.06, 0.2);
      e.b = rng.uniform(0.06, 0.2);
      e.angle = rng.uniform(0.0, std::numbers::pi);
      e.intensity = rng.uniform(0.1, 0.45);
      e.moving = (k % 2) == 1;
      e.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
      out.push_back(e);
    }
  }
  return out;
}

}  // namespace

DenseTensor gen_phantom(const PhantomConfig& cfg) {
  if (cfg.dims.size() != 3) throw std::invalid_argument("phantom dims must be (nx, ny, nt)");
  DenseTensor x(cfg.dims);
  const std::size_t nx = cfg.dims[0], ny = cfg.dims[1], nt = cfg.dims[2];
  Rng rng(cfg.seed);
  const auto ellipses = make_ellipses(cfg.ellipses, rng);
  const double hx = 0.5 * static_cast<double>(nx), hy = 0.5 * static_cast<double>(ny);
  const double pixel = 1.0 / std::min(hx, hy);  // one pixel in normalized units

  for (std::size_t t = 0; t < nt; ++t) {
    const double cycle = 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(nt);
    for (const auto& e : ellipses) {
      double a = e.a, b = e.b, cx = e.cx;
      if (e.moving && cfg.motion != 0.0) {
        const double s = std::sin(cycle + e.phase);
        a *= 1.0 + cfg.motion * s;
        b *= 1.0 - 0.5 * cfg.motion * s;
        cx += 0.2 * cfg.motion * s * e.a;
      }
      const double ca = std::cos(e.angle), sa = std::sin(e.angle);
      const double width = pixel / std::min(a, b);
      for (std::size_t j = 0; j < ny; ++j) {
        const double v = (static_cast<double>(j) - hy) / hy;
        for (std::size_t i = 0; i < nx; ++i) {
          const double u = (static_cast<double>(i) - hx) / hx;
          const double du = u - cx, dv = v - e.cy;
          const double p = (ca * du + sa * dv) / a;
          const double q = (-sa * du + ca * dv) / b;
          const double rho = std::sqrt(p * p + q * q);
          const double w = 0.5 * (1.0 - std::tanh((rho - 1.0) / width));
          if (w > 1e-12) x(i, j, t) += e.intensity * w;
        }
      }
    }
  }

  // Smooth phase ramp, fixed over time.
  for (std::size_t j = 0; j < ny; ++j) {
    const double v = (static_cast<double>(j) - hy) / hy;
    for (std::size_t i = 0; i < nx; ++i) {
      const double u = (static_cast<double>(i) - hx) / hx;
      const cplx ramp = std::polar(1.0, std::numbers::pi * (0.25 * u + 0.15 * v));
      for (std::size_t t = 0; t < nt; ++t) x(i, j, t) *= ramp;
    }
  }
  return x;
}

}  // namespace mrecon
