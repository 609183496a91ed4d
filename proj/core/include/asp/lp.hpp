#pragma once

#include <optional>
#include <vector>

#include "asp/rational.hpp"

namespace asp {

using RationalMatrix = std::vector<std::vector<Rational>>;

/// Exact feasibility of {x >= 0 : A x <= b}. Phase-I simplex over the
/// rationals with Bland's rule, so it always terminates.
bool linear_feasible(const RationalMatrix& a, const std::vector<Rational>& b);

/// The unique x with A x = b for square A, or nullopt when A is singular.
/// Exact Gaussian elimination.
std::optional<std::vector<Rational>> solve_linear(RationalMatrix a, std::vector<Rational> b);

}  // namespace asp
