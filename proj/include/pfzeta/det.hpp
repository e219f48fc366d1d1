#pragma once

#include <vector>

#include "pfzeta/ball.hpp"

namespace pfzeta {

/// Exact determinant by fraction-free (Bareiss) elimination.  Denominators
/// are cleared row-wise first so the elimination runs over integers.
Rational det_exact(std::vector<std::vector<Rational>> m);

/// Enclosure of the determinant of an interval matrix.  Gaussian elimination
/// with full pivoting on midpoints; if no pivot excluding zero remains, falls
/// back to a Hadamard-bound enclosure centred at zero (still sound, callers
/// escalate precision).  Exact-zero rows and columns short-circuit to an
/// exact zero.
Ball det_ball(std::vector<std::vector<Ball>> m);

}  // namespace pfzeta
