#pragma once

#include <functional>

#include "pfzeta/ball.hpp"

namespace pfzeta {

struct BracketError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bisection for g(x) = target with g strictly increasing on [lo, hi]
/// (monotonicity is the caller's obligation).  Returns a ball of width at
/// most tol containing the root, or a wider enclosure when certified
/// comparisons stop resolving at this precision.  A bracket that certifiably
/// excludes the target raises BracketError.
Ball solve_monotone(const std::function<Ball(const Ball&)>& g, const Ball& target,
                    const Rational& lo, const Rational& hi, const Rational& tol,
                    mpfr_prec_t prec);

}  // namespace pfzeta
