#pragma once

// Dense exact linear algebra over Q[i].

#include "gwp/numeric.hpp"

#include <optional>
#include <vector>

namespace gwp {

using Vector = std::vector<GaussianRational>;
using Matrix = std::vector<Vector>;  // row-major

Matrix identity_matrix(std::size_t n);
Matrix transpose(const Matrix& m);
Matrix matmul(const Matrix& a, const Matrix& b);

/// Basis of the right null space {x : m x = 0}, one vector per free column.
std::vector<Vector> nullspace(const Matrix& m, std::size_t cols);

/// Inverse of a square matrix; nullopt when singular.
std::optional<Matrix> inverse(const Matrix& m);

}  // namespace gwp
