#pragma once

#include <cstddef>

#include "mrecon/tensor.hpp"

namespace mrecon {

struct SvdResult {
  Matrix u;                 // rows x k, orthonormal columns
  Eigen::VectorXd s;        // k singular values, descending
  Matrix v;                 // cols x k, orthonormal columns
};

// Best rank-k approximation u * diag(s) * v^H of m.
//
// Deterministic conventions: singular values are sorted descending with ties
// kept in the order the decomposition returns them (column index); every left
// singular vector is rotated by a unit phase so that its largest-magnitude
// entry (first one on ties) is real and positive, and the matching right
// vector receives the same phase so the product is unchanged.
SvdResult truncated_svd(const Matrix& m, std::size_t k);

// Leading k left singular vectors only, same sign convention.
Matrix leading_left_singular_vectors(const Matrix& m, std::size_t k);

// All singular values of m, descending.
Eigen::VectorXd singular_values(const Matrix& m);

}  // namespace mrecon
