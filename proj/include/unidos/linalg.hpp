#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "unidos/torus.hpp"

namespace unidos {

/// Eigenvalues of a dense n x n column-major complex matrix (LAPACK zgeev).
std::vector<cplx> dense_eigenvalues(std::vector<cplx> a, std::size_t n);

/// Eigenvalues of an upper Hessenberg matrix by single-shift QR with
/// Givens rotations and Wilkinson shifts. `h` is column-major n x n.
std::vector<cplx> hessenberg_eigenvalues(std::vector<cplx> h, std::size_t n);

/// Roots of sum_k c[k] z^k (ascending order; leading c must be nonzero),
/// from the balanced companion matrix, then Newton-polished.
std::vector<cplx> polynomial_roots(std::span<const cplx> coeffs);

}  // namespace unidos
