#pragma once

#include <cstdint>
#include <random>

#include "mrecon/tensor.hpp"

namespace mrecon {

// Seeded generator with platform-independent output. The standard
// distributions are implementation-defined, so uniforms and normals are
// derived from raw mt19937_64 words here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Standard normal (Box-Muller).
  double normal();
  // Circular complex normal with E|z|^2 = 1.
  cplx complex_normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

DenseTensor random_tensor(const Dims& dims, Rng& rng);
Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng);
// Random matrix with orthonormal columns (Q factor of a Gaussian matrix).
Matrix random_orthonormal(Eigen::Index rows, Eigen::Index cols, Rng& rng);

}  // namespace mrecon
