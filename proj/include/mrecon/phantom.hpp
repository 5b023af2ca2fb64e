#pragma once

#include <cstdint>

#include "mrecon/tensor.hpp"

namespace mrecon {

struct PhantomConfig {
  Dims dims{64, 64, 16};
  std::size_t ellipses = 6;
  // Relative amplitude of the sinusoidal axis/center oscillation.
  double motion = 0.12;
  std::uint64_t seed = 1;
};

// Synthetic dynamic (nx, ny, nt) phantom. Ellipse 0 is a static body outline,
// ellipse 1 a bright moving "ventricle", the rest are random structures inside
// the body; odd-indexed ellipses oscillate over one cycle across the frames.
// Edges are smoothed over about one pixel and a fixed linear phase ramp makes
// the image complex.
DenseTensor gen_phantom(const PhantomConfig& cfg);

}  // namespace mrecon
