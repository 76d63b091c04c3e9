#pragma once

#include <optional>
#include <vector>

#include "sandwich/numeric.hpp"

namespace sandwich {

/// Fraction-free (Bareiss) determinant of a square integer matrix.
Int determinant(IntMat m);

/// Determinants of the leading principal k x k blocks, k = 1..n.
IntVec leading_principal_minors(const IntMat& m);

/// Exact solution of an (possibly non-square) rational system m.x = rhs by
/// Gaussian elimination. Returns nothing when the system is inconsistent;
/// requires the columns to be linearly independent (unique solution).
std::optional<RatVec> solve_exact(const std::vector<RatVec>& m, const RatVec& rhs);

std::vector<RatVec> to_rational(const IntMat& m);

}  // namespace sandwich
