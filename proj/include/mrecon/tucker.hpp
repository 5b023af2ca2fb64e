#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mrecon/tensor.hpp"

namespace mrecon {

using RankTuple = std::vector<std::size_t>;

// Throws std::invalid_argument unless 1 <= r_i <= n_i and r_i <= prod_{j != i} r_j.
void require_feasible_rank(const Dims& dims, const RankTuple& r);
bool is_feasible_rank(const Dims& dims, const RankTuple& r);

// Parses "4,4,3" style rank/dims lists.
std::vector<std::size_t> parse_size_list(const std::string& text);

// x = core x_1 U_1 x_2 U_2 ... x_d U_d, factors with orthonormal columns.
struct TuckerTensor {
  DenseTensor core;
  std::vector<Matrix> factors;

  Dims dims() const;
  RankTuple ranks() const;
  // Throws if shapes are inconsistent.
  void validate_shapes() const;
  // max_i ||U_i^H U_i - I||_F
  double orthonormality_error() const;
};

DenseTensor tucker_assemble(const TuckerTensor& t);

// Sequentially truncated HOSVD in mode order 0, 1, ..., d-1: each step
// replaces the current tensor's mode-i unfolding Y by U U^H Y with U the r_i
// dominant left singular vectors, and the core shrinks accordingly. A mode
// with r_i == n_i is left untouched and gets the identity factor.
TuckerTensor hosvd_truncate(const DenseTensor& x, const RankTuple& r);

// Numerical multilinear rank with relative singular value tolerance.
RankTuple multilinear_rank(const DenseTensor& x, double rel_tol = 1e-10);

}  // namespace mrecon
