#pragma once

#include <cstdint>
#include <string>

#include "mrecon/mri_model.hpp"

namespace mrecon {

// Number of central phase encodes always kept by the variable-density mask.
inline constexpr std::size_t kCentralLines = 4;

// Cartesian variable-density mask on (nx, ny, nt), fully sampled along kx.
// Per frame, the 4 central ky lines are forced; every other line is kept with
// inclusion probability exp(-k^2 / (2 sigma^2)), k = ky - ny/2, with sigma
// solved so that the expected line count equals round(ny / R). Lines are drawn
// by systematic sampling, so each frame keeps exactly round(ny / R) lines.
// `per_frame` false reuses frame 0's lines for every frame.
SamplingMask gen_mask_gaussian(const Dims& dims, double acceleration, std::uint64_t seed,
                               bool per_frame = true);

// Pseudo-radial spokes through the k-space center rasterized onto the
// Cartesian grid (samples every half pixel along the spoke, rounded to the
// nearest grid point). Spokes are evenly spread over [0, pi) within a frame,
// the pattern rotates by the golden angle from frame to frame, and the seed
// sets the initial angular offset.
SamplingMask gen_mask_radial(const Dims& dims, std::size_t spokes, std::uint64_t seed);

// VISTA-like interleaved lattice: frame t keeps ky lines with
// (ky - t) mod R == 0, so any R consecutive frames cover every line.
SamplingMask gen_mask_uniform_interleaved(const Dims& dims, std::size_t acceleration);

// Pointwise mask keeping each sample independently with probability `fraction`.
SamplingMask gen_mask_random_points(const Dims& dims, double fraction, std::uint64_t seed);

}  // namespace mrecon
