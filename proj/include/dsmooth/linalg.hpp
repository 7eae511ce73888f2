#pragma once

#include <span>
#include <vector>

// Small dense kernels for k x k symmetric matrices (k <= 20), row-major.
namespace dsmooth::linalg {

/// Overwrites the lower triangle of `a` with L such that a = L L'. Returns
/// false if a nonpositive pivot is met; `a` is then left partially factored.
bool cholesky_in_place(std::span<double> a, int k) noexcept;

/// Solves L y = b in place for the lower-triangular factor from cholesky_in_place.
void forward_substitute(std::span<const double> lower, std::span<double> b, int k) noexcept;

/// Eigenvalues of a symmetric matrix in ascending order (cyclic Jacobi).
std::vector<double> symmetric_eigenvalues(std::span<const double> a, int k);

}  // namespace dsmooth::linalg
