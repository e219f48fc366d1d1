#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pfzeta/ball.hpp"
#include "pfzeta/sign.hpp"

namespace pfzeta {

/// Kernel whose even moments give the power series coefficients of
/// xi1(z) = xi(sqrt(z) + 1/2):
///
///   Phi(t)  = sum_{n>=1} (2 pi^2 n^4 e^{9t} - 3 pi n^2 e^{5t}) exp(-pi n^2 e^{4t})
///   b_k     = 8 * 4^k / (2k)! * integral_0^inf t^{2k} Phi(t) dt
struct PhiConfig {
  long n_cap = 64;            // max index of the n-series (adaptive below cap)
  Rational term_tol = 0;      // relative cutoff; 0 = derive from working precision
  Rational t_max = 2;         // truncation of the t-integral

  void validate() const {
    if (n_cap < 1) throw std::invalid_argument("PhiConfig: n_cap >= 1");
    if (term_tol < 0) throw std::invalid_argument("PhiConfig: term_tol >= 0");
    if (t_max <= 0) throw std::invalid_argument("PhiConfig: t_max > 0");
  }
};

/// Phi(t) with a rigorous bound on the truncated n-series tail.
/// t must be nonnegative (the integral lives on [0, inf)).
Ball phi(const Ball& t, const PhiConfig& cfg);

/// Rigorous upper bound Phi(t) <= phi_envelope_const() * e^{9t - pi e^{4t}}.
Ball phi_envelope_const(mpfr_prec_t prec);

/// Upper bound on the dropped tail  integral_{t_max}^inf t^{2k} Phi(t) dt,
/// valid whenever the integrand's log-derivative is negative at t_max.
Ball phi_moment_tail(long k, const Rational& t_max, mpfr_prec_t prec);

class CoeffTable;
using CoeffTablePtr = std::shared_ptr<const CoeffTable>;

/// Immutable table of certified-positive xi1 coefficients b_0..b_kmax,
/// together with the machinery for bounding coefficients beyond the table.
class CoeffTable {
 public:
  static CoeffTablePtr build(size_t k_max, mpfr_prec_t prec, PhiConfig cfg = {},
                             PrecisionPolicy policy = {});

  size_t k_max() const { return entries_.size() - 1; }
  mpfr_prec_t prec() const { return prec_; }
  const Ball& coeff(size_t k) const;
  const PhiConfig& phi_config() const { return phi_; }
  const PrecisionPolicy& policy() const { return policy_; }

  /// Rigorous upper bound on b_j for any j (also beyond k_max).
  Ball coeff_upper_bound(size_t j) const;

  /// Upper bound on sum_{j > k_max} bound_j * R^j.  Throws
  /// InsufficientTableError when the geometric closure does not hold at this
  /// table length for radius R.
  Ball tail_beyond_table(const Ball& radius_upper) const;

  std::string to_json() const;
  static CoeffTablePtr from_json(const std::string& text);

 private:
  CoeffTable() = default;
  std::vector<Ball> entries_;
  PhiConfig phi_;
  PrecisionPolicy policy_;
  mpfr_prec_t prec_ = 0;
  Ball iphi_upper_;  // upper bound on integral_0^inf Phi
};

struct InsufficientTableError : std::runtime_error {
  size_t k_needed;
  InsufficientTableError(const std::string& msg, size_t k)
      : std::runtime_error(msg), k_needed(k) {}
};

struct CacheFormatError : std::runtime_error {
  std::string field;
  CacheFormatError(const std::string& msg, std::string f)
      : std::runtime_error(msg), field(std::move(f)) {}
};

/// Single coefficient through the generic quadrature path (no node sharing);
/// used for cross-checks against the table generator.
Ball xi1_coeff(long k, const PhiConfig& cfg, mpfr_prec_t prec);

/// Truncated power series evaluation backed by a coefficient table.
struct XiSeries {
  CoeffTablePtr table;

  explicit XiSeries(CoeffTablePtr t) : table(std::move(t)) {}

  /// xi1 at a complex point; the radius absorbs the certified series tail.
  CBall eval(const CBall& z) const;
  /// xi1 on the positive real axis.
  Ball eval_real(const Ball& x) const;
  /// sum_k k^p b_k x^k for p = 0, 1, 2, with certified tails (x > 0).
  Ball power_sum(const Ball& x, int p) const;
};

/// xi(1/2) = -(1/8) pi^{-1/4} Gamma(1/4) zeta(1/2), computed independently of
/// the Phi moments: zeta by Euler-Maclaurin, Gamma by Stirling after an
/// upward argument shift.
Ball xi_half_direct(const PrecisionPolicy& policy);

/// Euler-Maclaurin zeta for real rational s != 1 (internal oracle, exposed
/// for its own tests: zeta(2) = pi^2/6, zeta(1/2) = -1.4603545...).
Ball zeta_real(const Rational& s, mpfr_prec_t prec);

/// Real Gamma via upward recurrence + Stirling (Gamma(1/2) = sqrt(pi)).
Ball gamma_real(const Rational& x, mpfr_prec_t prec);

/// Exact Bernoulli numbers B_0..B_n (even indices; odd > 1 are zero).
const std::vector<Rational>& bernoulli_upto(size_t n);

/// Numerical check of the growth asymptotics of xi1 along rays: for each r,
///   headroom  = (log xi1(r) - lead(r)) / log r     with
///       lead(r) = (1/4) sqrt(r) log r - (1/2) sqrt(r)(log 2 + 1 + log pi)
///   deriv_ratio = 8 b'(eta) / (eta e^{eta/2}),  eta = log r
///   headroom_theta = same headroom at angle theta, including the
///       -(1/4) sqrt(r) theta sin(theta/2) term
struct AsymRow {
  Ball r;
  Ball headroom;
  Ball deriv_ratio;
  Ball headroom_theta;
};
std::vector<AsymRow> asym_diag(const std::vector<Rational>& r_grid,
                               const XiSeries& series, const Ball& theta);

}  // namespace pfzeta
