#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pfzeta {

using Rational = mpq_class;
using Integer = mpz_class;

/// Midpoint-radius interval over MPFR reals.  The represented exact value
/// lies in [mid - rad, mid + rad].  Every operation returns a ball whose
/// interval contains the exact image of the input intervals; rounding of
/// the midpoint contributes one directed-rounding ulp to the radius.
///
/// The radius is kept at a short fixed precision and always rounded upward,
/// so it can only overestimate.  rad = +inf marks a ball that carries no
/// information (e.g. division by an interval containing zero); downstream
/// sign queries on such balls are undetermined rather than wrong.
class Ball {
 public:
  explicit Ball(mpfr_prec_t prec = 64);
  Ball(const Ball& o);
  Ball(Ball&& o) noexcept;
  Ball& operator=(const Ball& o);
  Ball& operator=(Ball&& o) noexcept;
  ~Ball();

  static mpfr_prec_t radius_prec() { return 64; }

  static Ball exact(long v, mpfr_prec_t prec);
  static Ball exact(const Integer& v, mpfr_prec_t prec);
  static Ball of_rational(const Rational& q, mpfr_prec_t prec);
  static Ball of_double(double d, mpfr_prec_t prec);  // doubles are exact dyadics
  static Ball pi(mpfr_prec_t prec);
  static Ball infinite(mpfr_prec_t prec);
  /// Ball from directed endpoints lo <= hi (any mpfr values).
  static Ball from_endpoints(const mpfr_t lo, const mpfr_t hi, mpfr_prec_t prec);
  /// Ball from a raw midpoint/radius pair (radius taken as-is, rounded up).
  static Ball from_midrad(mpfr_srcptr mid, mpfr_srcptr rad, mpfr_prec_t prec);
  /// Parse midpoint/radius decimal strings as written by mid_decimal()/rad_decimal().
  static Ball from_decimal(const std::string& mid10, const std::string& rad10,
                           mpfr_prec_t prec);

  mpfr_prec_t prec() const { return mpfr_get_prec(mid_); }
  mpfr_srcptr mid() const { return mid_; }
  mpfr_srcptr rad() const { return rad_; }

  bool is_exact() const { return mpfr_zero_p(rad_); }
  bool is_finite() const { return mpfr_number_p(mid_) && mpfr_number_p(rad_); }
  bool is_exact_zero() const { return is_exact() && mpfr_zero_p(mid_); }
  bool contains_zero() const;
  bool is_positive() const;  // mid - rad > 0
  bool is_negative() const;  // mid + rad < 0
  bool is_nonnegative() const;
  bool contains(const Rational& q) const;
  bool overlaps(const Ball& o) const;
  bool same_value(const Ball& o) const;  // bit-identical mid and rad

  /// Exact lower/upper endpoint, rounded outward at this precision.
  Ball lower() const;
  Ball upper() const;
  void get_lower(mpfr_t out) const;  // RNDD
  void get_upper(mpfr_t out) const;  // RNDU

  double mid_d() const { return mpfr_get_d(mid_, MPFR_RNDN); }
  double rad_d() const { return mpfr_get_d(rad_, MPFR_RNDU); }

  Ball round_to(mpfr_prec_t prec) const;
  /// Widen the radius by (an upper bound of) |extra|.
  Ball widened(const Ball& extra) const;
  /// Add the one-sided interval [0, hi] (hi >= 0): mid += hi/2, rad += hi/2.
  Ball plus_interval_upper(const Ball& hi) const;

  std::string to_string(size_t digits = 20) const;
  std::string mid_decimal() const;  // enough digits for exact round-trip
  std::string rad_decimal() const;

  friend Ball operator+(const Ball& a, const Ball& b);
  friend Ball operator-(const Ball& a, const Ball& b);
  friend Ball operator*(const Ball& a, const Ball& b);
  friend Ball operator/(const Ball& a, const Ball& b);
  friend Ball operator-(const Ball& a);
  friend Ball inv(const Ball& a);
  friend Ball abs(const Ball& a);
  friend Ball sqrt(const Ball& a);
  friend Ball exp(const Ball& a);
  friend Ball log(const Ball& a);
  friend Ball sin(const Ball& a);
  friend Ball cos(const Ball& a);
  friend Ball atan(const Ball& a);
  friend Ball sinh(const Ball& a);
  friend Ball cosh(const Ball& a);
  friend Ball tanh(const Ball& a);
  friend Ball pow_ui(const Ball& a, unsigned long n);
  friend Ball mul_q(const Ball& a, const Rational& q);
  friend Ball mul_2si(const Ball& a, long e);
  friend Ball hull(const Ball& a, const Ball& b);

 private:
  mpfr_t mid_;
  mpfr_t rad_;  // RADIUS_PREC bits, always rounded up, >= 0
};

Ball operator+(const Ball& a, const Ball& b);
Ball operator-(const Ball& a, const Ball& b);
Ball operator*(const Ball& a, const Ball& b);
Ball operator/(const Ball& a, const Ball& b);
Ball operator-(const Ball& a);
Ball inv(const Ball& a);
Ball abs(const Ball& a);
Ball sqrt(const Ball& a);
Ball exp(const Ball& a);
Ball log(const Ball& a);
Ball sin(const Ball& a);
Ball cos(const Ball& a);
Ball atan(const Ball& a);
Ball sinh(const Ball& a);
Ball cosh(const Ball& a);
Ball tanh(const Ball& a);
Ball pow_ui(const Ball& a, unsigned long n);
Ball mul_q(const Ball& a, const Rational& q);
Ball mul_2si(const Ball& a, long e);
Ball hull(const Ball& a, const Ball& b);

/// min/max of the set {min(x,y) : x in a, y in b} — endpoint-wise.
Ball min_ball(const Ball& a, const Ball& b);
Ball max_ball(const Ball& a, const Ball& b);

/// Deterministic pairwise (tree) summation.
Ball sum_pairwise(const std::vector<Ball>& v, mpfr_prec_t prec);

/// floor(x) when every point of the ball has the same floor; nullopt otherwise.
std::optional<Integer> certified_floor(const Ball& x);

/// -1, 0, +1 when the sign of (a - b) is certain; nullopt otherwise.
std::optional<int> certified_cmp(const Ball& a, const Ball& b);

/// Rectangular complex ball re + i*im.
struct CBall {
  Ball re, im;

  CBall() = default;
  CBall(Ball r, Ball i) : re(std::move(r)), im(std::move(i)) {}
  static CBall exact(long r, long i, mpfr_prec_t prec) {
    return {Ball::exact(r, prec), Ball::exact(i, prec)};
  }
  CBall conj() const { return {re, -im}; }
};

CBall operator+(const CBall& a, const CBall& b);
CBall operator-(const CBall& a, const CBall& b);
CBall operator*(const CBall& a, const CBall& b);
CBall operator*(const CBall& a, const Ball& b);
CBall operator/(const CBall& a, const Ball& b);
CBall operator/(const CBall& a, const CBall& b);
Ball abs2(const CBall& a);
/// r * (cos(theta) + i*sin(theta))
CBall from_polar(const Ball& r, const Ball& theta);
CBall sum_pairwise(const std::vector<CBall>& v, mpfr_prec_t prec);

}  // namespace pfzeta
