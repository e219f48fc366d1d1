#include "pfzeta/ball.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>

namespace pfzeta {

namespace {

constexpr mpfr_prec_t kRadPrec = 64;

// rad += 2^(exp(mid) - prec) when the midpoint rounding was inexact.
void add_ulp(mpfr_t rad, mpfr_srcptr mid, int ternary) {
  if (ternary == 0) return;
  if (!mpfr_regular_p(mid)) {
    // exact-zero midpoint with inexact flag cannot happen for the operations
    // we use; a subnormal-scale bump keeps this sound regardless
    mpfr_t tiny;
    mpfr_init2(tiny, 8);
    mpfr_set_ui_2exp(tiny, 1, mpfr_get_emin(), MPFR_RNDU);
    mpfr_add(rad, rad, tiny, MPFR_RNDU);
    mpfr_clear(tiny);
    return;
  }
  mpfr_t ulp;
  mpfr_init2(ulp, 8);
  mpfr_set_ui_2exp(ulp, 1, mpfr_get_exp(mid) - mpfr_get_prec(mid), MPFR_RNDU);
  mpfr_add(rad, rad, ulp, MPFR_RNDU);
  mpfr_clear(ulp);
}

}  // namespace

Ball::Ball(mpfr_prec_t prec) {
  mpfr_init2(mid_, prec);
  mpfr_set_zero(mid_, 1);
  mpfr_init2(rad_, kRadPrec);
  mpfr_set_zero(rad_, 1);
}

Ball::Ball(const Ball& o) {
  mpfr_init2(mid_, mpfr_get_prec(o.mid_));
  mpfr_set(mid_, o.mid_, MPFR_RNDN);
  mpfr_init2(rad_, kRadPrec);
  mpfr_set(rad_, o.rad_, MPFR_RNDU);
}

Ball::Ball(Ball&& o) noexcept {
  mid_[0] = o.mid_[0];
  rad_[0] = o.rad_[0];
  mpfr_init2(o.mid_, 8);
  mpfr_init2(o.rad_, 8);
  mpfr_set_zero(o.mid_, 1);
  mpfr_set_zero(o.rad_, 1);
}

Ball& Ball::operator=(const Ball& o) {
  if (this == &o) return *this;
  mpfr_set_prec(mid_, mpfr_get_prec(o.mid_));
  mpfr_set(mid_, o.mid_, MPFR_RNDN);
  mpfr_set(rad_, o.rad_, MPFR_RNDU);
  return *this;
}

Ball& Ball::operator=(Ball&& o) noexcept {
  if (this == &o) return *this;
  mpfr_swap(mid_, o.mid_);
  mpfr_swap(rad_, o.rad_);
  return *this;
}

Ball::~Ball() {
  mpfr_clear(mid_);
  mpfr_clear(rad_);
}

Ball Ball::exact(long v, mpfr_prec_t prec) {
  Ball b(prec);
  int t = mpfr_set_si(b.mid_, v, MPFR_RNDN);
  add_ulp(b.rad_, b.mid_, t);
  return b;
}

Ball Ball::exact(const Integer& v, mpfr_prec_t prec) {
  Ball b(prec);
  int t = mpfr_set_z(b.mid_, v.get_mpz_t(), MPFR_RNDN);
  add_ulp(b.rad_, b.mid_, t);
  return b;
}

Ball Ball::of_rational(const Rational& q, mpfr_prec_t prec) {
  Ball b(prec);
  int t = mpfr_set_q(b.mid_, q.get_mpq_t(), MPFR_RNDN);
  add_ulp(b.rad_, b.mid_, t);
  return b;
}

Ball Ball::of_double(double d, mpfr_prec_t prec) {
  Ball b(prec);
  int t = mpfr_set_d(b.mid_, d, MPFR_RNDN);
  add_ulp(b.rad_, b.mid_, t);
  return b;
}

Ball Ball::pi(mpfr_prec_t prec) {
  Ball b(prec);
  int t = mpfr_const_pi(b.mid_, MPFR_RNDN);
  add_ulp(b.rad_, b.mid_, t);
  return b;
}

Ball Ball::infinite(mpfr_prec_t prec) {
  Ball b(prec);
  mpfr_set_zero(b.mid_, 1);
  mpfr_set_inf(b.rad_, 1);
  return b;
}

Ball Ball::from_endpoints(const mpfr_t lo, const mpfr_t hi, mpfr_prec_t prec) {
  Ball b(prec);
  int t = mpfr_add(b.mid_, lo, hi, MPFR_RNDN);
  mpfr_div_2si(b.mid_, b.mid_, 1, MPFR_RNDN);  // exact
  mpfr_t half;
  mpfr_init2(half, kRadPrec);
  mpfr_sub(half, hi, lo, MPFR_RNDU);
  mpfr_div_2si(half, half, 1, MPFR_RNDU);
  mpfr_set(b.rad_, half, MPFR_RNDU);
  add_ulp(b.rad_, b.mid_, t ? t : 1);
  mpfr_clear(half);
  return b;
}

Ball Ball::from_midrad(mpfr_srcptr mid, mpfr_srcptr rad, mpfr_prec_t prec) {
  Ball b(prec);
  int t = mpfr_set(b.mid_, mid, MPFR_RNDN);
  mpfr_set(b.rad_, rad, MPFR_RNDU);
  add_ulp(b.rad_, b.mid_, t);
  return b;
}

Ball Ball::from_decimal(const std::string& mid10, const std::string& rad10,
                        mpfr_prec_t prec) {
  Ball b(prec);
  if (mpfr_set_str(b.mid_, mid10.c_str(), 10, MPFR_RNDN) != 0)
    throw std::invalid_argument("Ball::from_decimal: bad midpoint string");
  mpfr_t r;
  mpfr_init2(r, kRadPrec);
  if (mpfr_set_str(r, rad10.c_str(), 10, MPFR_RNDU) != 0) {
    mpfr_clear(r);
    throw std::invalid_argument("Ball::from_decimal: bad radius string");
  }
  mpfr_set(b.rad_, r, MPFR_RNDU);
  mpfr_clear(r);
  if (mpfr_sgn(b.rad_) < 0)
    throw std::invalid_argument("Ball::from_decimal: negative radius");
  return b;
}

bool Ball::contains_zero() const {
  if (!is_finite()) return true;
  mpfr_t lo, hi;
  mpfr_init2(lo, prec() + 8);
  mpfr_init2(hi, prec() + 8);
  get_lower(lo);
  get_upper(hi);
  bool r = mpfr_sgn(lo) <= 0 && mpfr_sgn(hi) >= 0;
  mpfr_clear(lo);
  mpfr_clear(hi);
  return r;
}

bool Ball::is_positive() const {
  if (!is_finite()) return false;
  mpfr_t lo;
  mpfr_init2(lo, prec() + 8);
  get_lower(lo);
  bool r = mpfr_sgn(lo) > 0;
  mpfr_clear(lo);
  return r;
}

bool Ball::is_negative() const {
  if (!is_finite()) return false;
  mpfr_t hi;
  mpfr_init2(hi, prec() + 8);
  get_upper(hi);
  bool r = mpfr_sgn(hi) < 0;
  mpfr_clear(hi);
  return r;
}

bool Ball::is_nonnegative() const {
  if (!is_finite()) return false;
  mpfr_t lo;
  mpfr_init2(lo, prec() + 8);
  get_lower(lo);
  bool r = mpfr_sgn(lo) >= 0;
  mpfr_clear(lo);
  return r;
}

bool Ball::contains(const Rational& q) const {
  if (!is_finite()) return true;
  // q in [mid - rad, mid + rad]  <=>  |q - mid| <= rad, decided in exact arithmetic
  mpfr_t lo, hi;
  mpfr_init2(lo, prec() + 8);
  mpfr_init2(hi, prec() + 8);
  get_lower(lo);
  get_upper(hi);
  bool r = mpfr_cmp_q(lo, q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi, q.get_mpq_t()) >= 0;
  mpfr_clear(lo);
  mpfr_clear(hi);
  return r;
}

bool Ball::overlaps(const Ball& o) const {
  if (!is_finite() || !o.is_finite()) return true;
  mpfr_t lo1, hi1, lo2, hi2;
  mpfr_init2(lo1, prec() + 8);
  mpfr_init2(hi1, prec() + 8);
  mpfr_init2(lo2, o.prec() + 8);
  mpfr_init2(hi2, o.prec() + 8);
  get_lower(lo1);
  get_upper(hi1);
  o.get_lower(lo2);
  o.get_upper(hi2);
  bool r = mpfr_cmp(lo1, hi2) <= 0 && mpfr_cmp(lo2, hi1) <= 0;
  mpfr_clear(lo1);
  mpfr_clear(hi1);
  mpfr_clear(lo2);
  mpfr_clear(hi2);
  return r;
}

bool Ball::same_value(const Ball& o) const {
  return prec() == o.prec() && mpfr_equal_p(mid_, o.mid_) &&
         mpfr_equal_p(rad_, o.rad_) &&
         mpfr_signbit(mid_) == mpfr_signbit(o.mid_);
}

void Ball::get_lower(mpfr_t out) const { mpfr_sub(out, mid_, rad_, MPFR_RNDD); }
void Ball::get_upper(mpfr_t out) const { mpfr_add(out, mid_, rad_, MPFR_RNDU); }

Ball Ball::lower() const {
  Ball b(prec() + 8);
  get_lower(b.mid_);
  return b;
}

Ball Ball::upper() const {
  Ball b(prec() + 8);
  get_upper(b.mid_);
  return b;
}

Ball Ball::round_to(mpfr_prec_t prec) const {
  Ball b(prec);
  int t = mpfr_set(b.mid_, mid_, MPFR_RNDN);
  mpfr_set(b.rad_, rad_, MPFR_RNDU);
  add_ulp(b.rad_, b.mid_, t);
  return b;
}

Ball Ball::widened(const Ball& extra) const {
  Ball b(*this);
  mpfr_t u;
  mpfr_init2(u, kRadPrec);
  extra.get_upper(u);
  mpfr_abs(u, u, MPFR_RNDU);
  mpfr_add(b.rad_, b.rad_, u, MPFR_RNDU);
  mpfr_clear(u);
  return b;
}

Ball Ball::plus_interval_upper(const Ball& hi) const {
  mpfr_t u, half;
  mpfr_init2(u, kRadPrec);
  mpfr_init2(half, kRadPrec);
  hi.get_upper(u);
  if (mpfr_sgn(u) < 0) mpfr_set_zero(u, 1);
  mpfr_div_2si(half, u, 1, MPFR_RNDU);
  Ball b(prec());
  int t = mpfr_add(b.mid_, mid_, half, MPFR_RNDN);
  mpfr_add(b.rad_, rad_, half, MPFR_RNDU);
  add_ulp(b.rad_, b.mid_, t);
  mpfr_clear(u);
  mpfr_clear(half);
  return b;
}

std::string Ball::to_string(size_t digits) const {
  char* s = nullptr;
  int n = mpfr_asprintf(&s, "[%.*Rg +/- %.3Rg]", (int)digits, mid_, rad_);
  if (n < 0) return "[?]";
  std::string out(s);
  mpfr_free_str(s);
  return out;
}

std::string Ball::mid_decimal() const {
  // ceil(prec * log10(2)) + 3 digits identify a prec-bit float uniquely
  size_t digits = (size_t)(prec() * 0.30103) + 4;
  char* s = nullptr;
  int n = mpfr_asprintf(&s, "%.*Re", (int)(digits - 1), mid_);
  if (n < 0) throw std::runtime_error("mpfr_asprintf failed");
  std::string out(s);
  mpfr_free_str(s);
  return out;
}

std::string Ball::rad_decimal() const {
  char* s = nullptr;
  int n = mpfr_asprintf(&s, "%.*Re", 24, rad_);
  if (n < 0) throw std::runtime_error("mpfr_asprintf failed");
  std::string out(s);
  mpfr_free_str(s);
  return out;
}

Ball operator+(const Ball& a, const Ball& b) {
  Ball c(std::max(a.prec(), b.prec()));
  int t = mpfr_add(c.mid_, a.mid_, b.mid_, MPFR_RNDN);
  mpfr_add(c.rad_, a.rad_, b.rad_, MPFR_RNDU);
  add_ulp(c.rad_, c.mid_, t);
  return c;
}

Ball operator-(const Ball& a, const Ball& b) {
  Ball c(std::max(a.prec(), b.prec()));
  int t = mpfr_sub(c.mid_, a.mid_, b.mid_, MPFR_RNDN);
  mpfr_add(c.rad_, a.rad_, b.rad_, MPFR_RNDU);
  add_ulp(c.rad_, c.mid_, t);
  return c;
}

Ball operator*(const Ball& a, const Ball& b) {
  Ball c(std::max(a.prec(), b.prec()));
  int t = mpfr_mul(c.mid_, a.mid_, b.mid_, MPFR_RNDN);
  // rad = |a.mid|*b.rad + |b.mid|*a.rad + a.rad*b.rad, all upward
  mpfr_t am, bm, term;
  mpfr_init2(am, kRadPrec);
  mpfr_init2(bm, kRadPrec);
  mpfr_init2(term, kRadPrec);
  mpfr_abs(am, a.mid_, MPFR_RNDU);
  mpfr_abs(bm, b.mid_, MPFR_RNDU);
  mpfr_mul(term, am, b.rad_, MPFR_RNDU);
  mpfr_set(c.rad_, term, MPFR_RNDU);
  mpfr_mul(term, bm, a.rad_, MPFR_RNDU);
  mpfr_add(c.rad_, c.rad_, term, MPFR_RNDU);
  mpfr_mul(term, a.rad_, b.rad_, MPFR_RNDU);
  mpfr_add(c.rad_, c.rad_, term, MPFR_RNDU);
  add_ulp(c.rad_, c.mid_, t);
  mpfr_clear(am);
  mpfr_clear(bm);
  mpfr_clear(term);
  return c;
}

Ball operator-(const Ball& a) {
  Ball c(a);
  mpfr_neg(c.mid_, c.mid_, MPFR_RNDN);  // exact
  return c;
}

Ball abs(const Ball& a) {
  if (!a.is_finite()) return a;
  if (a.is_nonnegative()) {
    Ball c(a);
    mpfr_abs(c.mid_, c.mid_, MPFR_RNDN);
    return c;
  }
  if (a.is_negative()) return -a;
  // straddles zero: |a| in [0, max(|lo|, |hi|)]
  mpfr_t lo, hi;
  mpfr_init2(lo, a.prec() + 8);
  mpfr_init2(hi, a.prec() + 8);
  a.get_lower(lo);
  a.get_upper(hi);
  mpfr_abs(lo, lo, MPFR_RNDU);
  mpfr_abs(hi, hi, MPFR_RNDU);
  if (mpfr_cmp(lo, hi) > 0) mpfr_set(hi, lo, MPFR_RNDU);
  mpfr_set_zero(lo, 1);
  Ball c = Ball::from_endpoints(lo, hi, a.prec());
  mpfr_clear(lo);
  mpfr_clear(hi);
  return c;
}

Ball inv(const Ball& a) {
  if (!a.is_finite() || a.contains_zero()) return Ball::infinite(a.prec());
  mpfr_prec_t p = a.prec();
  mpfr_t lo, hi, il, iu;
  mpfr_init2(lo, p + 8);
  mpfr_init2(hi, p + 8);
  mpfr_init2(il, p);
  mpfr_init2(iu, p);
  a.get_lower(lo);
  a.get_upper(hi);
  mpfr_ui_div(il, 1, hi, MPFR_RNDD);
  mpfr_ui_div(iu, 1, lo, MPFR_RNDU);
  Ball c = Ball::from_endpoints(il, iu, p);
  mpfr_clear(lo);
  mpfr_clear(hi);
  mpfr_clear(il);
  mpfr_clear(iu);
  return c;
}

Ball operator/(const Ball& a, const Ball& b) { return a * inv(b); }

namespace {

// Enclosure of a monotone increasing function from directed endpoint images.
template <typename F>
Ball monotone_incr(const Ball& a, F&& f) {
  mpfr_prec_t p = a.prec();
  mpfr_t lo, hi, fl, fu;
  mpfr_init2(lo, p + 8);
  mpfr_init2(hi, p + 8);
  mpfr_init2(fl, p);
  mpfr_init2(fu, p);
  a.get_lower(lo);
  a.get_upper(hi);
  f(fl, lo, MPFR_RNDD);
  f(fu, hi, MPFR_RNDU);
  Ball c = Ball::from_endpoints(fl, fu, p);
  mpfr_clear(lo);
  mpfr_clear(hi);
  mpfr_clear(fl);
  mpfr_clear(fu);
  return c;
}

}  // namespace

Ball sqrt(const Ball& a) {
  if (!a.is_finite()) return Ball::infinite(a.prec());
  if (a.is_negative()) throw std::domain_error("sqrt of a negative ball");
  mpfr_prec_t p = a.prec();
  mpfr_t lo, hi, fl, fu;
  mpfr_init2(lo, p + 8);
  mpfr_init2(hi, p + 8);
  mpfr_init2(fl, p);
  mpfr_init2(fu, p);
  a.get_lower(lo);
  a.get_upper(hi);
  if (mpfr_sgn(lo) < 0) mpfr_set_zero(lo, 1);  // true value is nonnegative
  mpfr_sqrt(fl, lo, MPFR_RNDD);
  mpfr_sqrt(fu, hi, MPFR_RNDU);
  Ball c = Ball::from_endpoints(fl, fu, p);
  mpfr_clear(lo);
  mpfr_clear(hi);
  mpfr_clear(fl);
  mpfr_clear(fu);
  return c;
}

Ball exp(const Ball& a) {
  if (!a.is_finite()) return Ball::infinite(a.prec());
  return monotone_incr(a, [](mpfr_t out, const mpfr_t in, mpfr_rnd_t r) {
    mpfr_exp(out, in, r);
  });
}

Ball log(const Ball& a) {
  if (!a.is_finite() || !a.is_positive()) return Ball::infinite(a.prec());
  return monotone_incr(a, [](mpfr_t out, const mpfr_t in, mpfr_rnd_t r) {
    mpfr_log(out, in, r);
  });
}

Ball atan(const Ball& a) {
  if (!a.is_finite()) {
    // atan is bounded; return (-pi/2, pi/2) hull
    Ball half_pi = mul_2si(Ball::pi(a.prec()), -1);
    return hull(-half_pi, half_pi);
  }
  return monotone_incr(a, [](mpfr_t out, const mpfr_t in, mpfr_rnd_t r) {
    mpfr_atan(out, in, r);
  });
}

Ball sinh(const Ball& a) {
  if (!a.is_finite()) return Ball::infinite(a.prec());
  return monotone_incr(a, [](mpfr_t out, const mpfr_t in, mpfr_rnd_t r) {
    mpfr_sinh(out, in, r);
  });
}

Ball tanh(const Ball& a) {
  if (!a.is_finite()) {
    mpfr_t lo, hi;
    mpfr_init2(lo, a.prec());
    mpfr_init2(hi, a.prec());
    mpfr_set_si(lo, -1, MPFR_RNDD);
    mpfr_set_si(hi, 1, MPFR_RNDU);
    Ball c = Ball::from_endpoints(lo, hi, a.prec());
    mpfr_clear(lo);
    mpfr_clear(hi);
    return c;
  }
  return monotone_incr(a, [](mpfr_t out, const mpfr_t in, mpfr_rnd_t r) {
    mpfr_tanh(out, in, r);
  });
}

Ball cosh(const Ball& a) {
  if (!a.is_finite()) return Ball::infinite(a.prec());
  mpfr_prec_t p = a.prec();
  mpfr_t lo, hi, fl, fu, tmp;
  mpfr_init2(lo, p + 8);
  mpfr_init2(hi, p + 8);
  mpfr_init2(fl, p);
  mpfr_init2(fu, p);
  mpfr_init2(tmp, p);
  a.get_lower(lo);
  a.get_upper(hi);
  mpfr_cosh(fu, hi, MPFR_RNDU);
  mpfr_cosh(tmp, lo, MPFR_RNDU);
  if (mpfr_cmp(tmp, fu) > 0) mpfr_set(fu, tmp, MPFR_RNDU);
  if (mpfr_sgn(lo) <= 0 && mpfr_sgn(hi) >= 0) {
    mpfr_set_ui(fl, 1, MPFR_RNDD);  // min at 0
  } else if (mpfr_sgn(lo) > 0) {
    mpfr_cosh(fl, lo, MPFR_RNDD);
  } else {
    mpfr_cosh(fl, hi, MPFR_RNDD);
  }
  Ball c = Ball::from_endpoints(fl, fu, p);
  mpfr_clear(lo);
  mpfr_clear(hi);
  mpfr_clear(fl);
  mpfr_clear(fu);
  mpfr_clear(tmp);
  return c;
}

namespace {

// sin/cos via Lipschitz bound |f(x) - f(mid)| <= |x - mid|.
Ball lipschitz1(const Ball& a, int (*f)(mpfr_t, const mpfr_t, mpfr_rnd_t)) {
  mpfr_prec_t p = a.prec();
  if (!a.is_finite() || mpfr_cmp_ui(a.rad(), 4) >= 0) {
    // wider than a period: the exact range suffices
    mpfr_t lo, hi;
    mpfr_init2(lo, p);
    mpfr_init2(hi, p);
    mpfr_set_si(lo, -1, MPFR_RNDD);
    mpfr_set_si(hi, 1, MPFR_RNDU);
    Ball c = Ball::from_endpoints(lo, hi, p);
    mpfr_clear(lo);
    mpfr_clear(hi);
    return c;
  }
  Ball c(p);
  int t = f((mpfr_ptr)c.mid(), a.mid(), MPFR_RNDN);
  mpfr_set((mpfr_ptr)c.rad(), a.rad(), MPFR_RNDU);
  add_ulp((mpfr_ptr)c.rad(), c.mid(), t);
  return c;
}

}  // namespace

Ball sin(const Ball& a) { return lipschitz1(a, mpfr_sin); }
Ball cos(const Ball& a) { return lipschitz1(a, mpfr_cos); }

Ball pow_ui(const Ball& a, unsigned long n) {
  if (n == 0) return Ball::exact(1, a.prec());
  Ball result = Ball::exact(1, a.prec());
  Ball base = a;
  bool started = false;
  while (n > 0) {
    if (n & 1) {
      result = started ? result * base : base;
      started = true;
    }
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

Ball mul_q(const Ball& a, const Rational& q) {
  Ball c(a.prec());
  int t = mpfr_mul_q((mpfr_ptr)c.mid(), a.mid(), q.get_mpq_t(), MPFR_RNDN);
  mpfr_t aq;
  mpfr_init2(aq, kRadPrec);
  mpfr_set_q(aq, q.get_mpq_t(), MPFR_RNDU);
  mpfr_abs(aq, aq, MPFR_RNDU);
  mpfr_mul((mpfr_ptr)c.rad(), a.rad(), aq, MPFR_RNDU);
  add_ulp((mpfr_ptr)c.rad(), c.mid(), t);
  mpfr_clear(aq);
  return c;
}

Ball mul_2si(const Ball& a, long e) {
  Ball c(a);
  mpfr_mul_2si((mpfr_ptr)c.mid(), c.mid(), e, MPFR_RNDN);  // exact
  mpfr_mul_2si((mpfr_ptr)c.rad(), c.rad(), e, MPFR_RNDU);
  return c;
}

Ball hull(const Ball& a, const Ball& b) {
  mpfr_prec_t p = std::max(a.prec(), b.prec());
  if (!a.is_finite() || !b.is_finite()) return Ball::infinite(p);
  mpfr_t lo1, hi1, lo2, hi2;
  mpfr_init2(lo1, p + 8);
  mpfr_init2(hi1, p + 8);
  mpfr_init2(lo2, p + 8);
  mpfr_init2(hi2, p + 8);
  a.get_lower(lo1);
  a.get_upper(hi1);
  b.get_lower(lo2);
  b.get_upper(hi2);
  if (mpfr_cmp(lo2, lo1) < 0) mpfr_set(lo1, lo2, MPFR_RNDD);
  if (mpfr_cmp(hi2, hi1) > 0) mpfr_set(hi1, hi2, MPFR_RNDU);
  Ball c = Ball::from_endpoints(lo1, hi1, p);
  mpfr_clear(lo1);
  mpfr_clear(hi1);
  mpfr_clear(lo2);
  mpfr_clear(hi2);
  return c;
}

Ball min_ball(const Ball& a, const Ball& b) {
  mpfr_prec_t p = std::max(a.prec(), b.prec());
  if (!a.is_finite() || !b.is_finite()) return Ball::infinite(p);
  mpfr_t lo1, hi1, lo2, hi2;
  mpfr_init2(lo1, p + 8);
  mpfr_init2(hi1, p + 8);
  mpfr_init2(lo2, p + 8);
  mpfr_init2(hi2, p + 8);
  a.get_lower(lo1);
  a.get_upper(hi1);
  b.get_lower(lo2);
  b.get_upper(hi2);
  if (mpfr_cmp(lo2, lo1) < 0) mpfr_set(lo1, lo2, MPFR_RNDD);
  if (mpfr_cmp(hi2, hi1) < 0) mpfr_set(hi1, hi2, MPFR_RNDU);
  Ball c = Ball::from_endpoints(lo1, hi1, p);
  mpfr_clear(lo1);
  mpfr_clear(hi1);
  mpfr_clear(lo2);
  mpfr_clear(hi2);
  return c;
}

Ball max_ball(const Ball& a, const Ball& b) { return -min_ball(-a, -b); }

namespace {

Ball sum_range(const std::vector<Ball>& v, size_t lo, size_t hi, mpfr_prec_t prec) {
  if (hi - lo == 1) return v[lo].round_to(prec);
  size_t mid = lo + (hi - lo) / 2;
  return sum_range(v, lo, mid, prec) + sum_range(v, mid, hi, prec);
}

CBall csum_range(const std::vector<CBall>& v, size_t lo, size_t hi, mpfr_prec_t prec) {
  if (hi - lo == 1) return {v[lo].re.round_to(prec), v[lo].im.round_to(prec)};
  size_t mid = lo + (hi - lo) / 2;
  return csum_range(v, lo, mid, prec) + csum_range(v, mid, hi, prec);
}

}  // namespace

Ball sum_pairwise(const std::vector<Ball>& v, mpfr_prec_t prec) {
  if (v.empty()) return Ball(prec);
  return sum_range(v, 0, v.size(), prec);
}

CBall sum_pairwise(const std::vector<CBall>& v, mpfr_prec_t prec) {
  if (v.empty()) return {Ball(prec), Ball(prec)};
  return csum_range(v, 0, v.size(), prec);
}

std::optional<Integer> certified_floor(const Ball& x) {
  if (!x.is_finite()) return std::nullopt;
  mpfr_t lo, hi;
  mpfr_init2(lo, x.prec() + 8);
  mpfr_init2(hi, x.prec() + 8);
  x.get_lower(lo);
  x.get_upper(hi);
  mpfr_floor(lo, lo);
  mpfr_floor(hi, hi);
  Integer fl, fh;
  mpfr_get_z(fl.get_mpz_t(), lo, MPFR_RNDN);
  mpfr_get_z(fh.get_mpz_t(), hi, MPFR_RNDN);
  mpfr_clear(lo);
  mpfr_clear(hi);
  if (fl == fh) return fl;
  return std::nullopt;
}

std::optional<int> certified_cmp(const Ball& a, const Ball& b) {
  Ball d = a - b;
  if (d.is_exact_zero()) return 0;
  if (d.is_positive()) return 1;
  if (d.is_negative()) return -1;
  return std::nullopt;
}

CBall operator+(const CBall& a, const CBall& b) { return {a.re + b.re, a.im + b.im}; }
CBall operator-(const CBall& a, const CBall& b) { return {a.re - b.re, a.im - b.im}; }

CBall operator*(const CBall& a, const CBall& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

CBall operator*(const CBall& a, const Ball& b) { return {a.re * b, a.im * b}; }

CBall operator/(const CBall& a, const Ball& b) {
  Ball ib = inv(b);
  return {a.re * ib, a.im * ib};
}

CBall operator/(const CBall& a, const CBall& b) {
  Ball d = inv(abs2(b));
  CBall num = a * b.conj();
  return {num.re * d, num.im * d};
}

Ball abs2(const CBall& a) { return a.re * a.re + a.im * a.im; }

CBall from_polar(const Ball& r, const Ball& theta) {
  return {r * cos(theta), r * sin(theta)};
}

}  // namespace pfzeta
