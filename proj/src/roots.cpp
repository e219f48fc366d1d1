#include "pfzeta/roots.hpp"

namespace pfzeta {

Ball solve_monotone(const std::function<Ball(const Ball&)>& g, const Ball& target,
                    const Rational& lo, const Rational& hi, const Rational& tol,
                    mpfr_prec_t prec) {
  if (lo >= hi) throw BracketError("solve_monotone: empty bracket");
  if (tol <= 0) throw std::invalid_argument("solve_monotone: tol must be positive");

  auto eval = [&](const Rational& x) { return g(Ball::of_rational(x, prec)); };
  {
    auto cl = certified_cmp(eval(lo), target);
    auto ch = certified_cmp(eval(hi), target);
    if (cl.value_or(-1) > 0)
      throw BracketError("solve_monotone: g(lo) > target");
    if (ch.value_or(1) < 0)
      throw BracketError("solve_monotone: g(hi) < target");
    if (cl.value_or(-1) == 0) return Ball::of_rational(lo, prec);
    if (ch.value_or(1) == 0) return Ball::of_rational(hi, prec);
  }

  Rational a = lo, b = hi;
  while (b - a > tol) {
    Rational m = (a + b) / 2;
    auto c = certified_cmp(eval(m), target);
    if (!c) break;  // undetermined at this precision: stop with the enclosure
    if (*c == 0) return Ball::of_rational(m, prec);
    if (*c > 0)
      b = m;
    else
      a = m;
  }
  mpfr_t fl, fu;
  mpfr_init2(fl, prec);
  mpfr_init2(fu, prec);
  mpfr_set_q(fl, a.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(fu, b.get_mpq_t(), MPFR_RNDU);
  Ball out = Ball::from_endpoints(fl, fu, prec);
  mpfr_clear(fl);
  mpfr_clear(fu);
  return out;
}

}  // namespace pfzeta
