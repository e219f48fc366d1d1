#include "pfzeta/xicoeffs.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

#include "pfzeta/quadrature.hpp"

namespace pfzeta {

namespace {

// In-place ball accumulator: sequential adds in fixed order, one rounding
// ulp per add tracked in the radius.
struct Acc {
  mpfr_t m, r;
  explicit Acc(mpfr_prec_t p) {
    mpfr_init2(m, p);
    mpfr_set_zero(m, 1);
    mpfr_init2(r, Ball::radius_prec());
    mpfr_set_zero(r, 1);
  }
  ~Acc() {
    mpfr_clear(m);
    mpfr_clear(r);
  }
  Acc(const Acc&) = delete;
  void add(const Ball& b) {
    int t = mpfr_add(m, m, b.mid(), MPFR_RNDN);
    mpfr_add(r, r, b.rad(), MPFR_RNDU);
    if (t != 0 && mpfr_regular_p(m)) {
      mpfr_t u;
      mpfr_init2(u, 8);
      mpfr_set_ui_2exp(u, 1, mpfr_get_exp(m) - mpfr_get_prec(m), MPFR_RNDU);
      mpfr_add(r, r, u, MPFR_RNDU);
      mpfr_clear(u);
    }
  }
  Ball to_ball(mpfr_prec_t p) const { return Ball::from_midrad(m, r, p); }
};

Rational default_term_tol(mpfr_prec_t prec) {
  return Rational(1, Integer(1) << (unsigned long)(prec + 8));
}

int table_level(mpfr_prec_t prec) {
  int l = 1;
  while ((mpfr_prec_t(1) << l) < prec) ++l;
  return l + 2;
}

// t_e(j) = 1 + log(j+1)/4: always admissible in the moment tail bound.
Ball te_formula(size_t j, mpfr_prec_t prec) {
  Ball one = Ball::exact(1, prec);
  return one + mul_2si(log(Ball::exact((long)j + 1, prec)), -2);
}

}  // namespace

Ball phi_envelope_const(mpfr_prec_t prec) {
  // Phi(t) <= C * e^{9t} exp(-pi e^{4t}) with C = 2 pi^2 sum n^4 e^{-pi(n^2-1)}
  mpfr_prec_t wp = prec + 16;
  Ball pi = Ball::pi(wp);
  Ball s(wp);
  const long N = 8;
  for (long n = 1; n <= N; ++n) {
    Ball e = exp(mul_q(pi, Rational(-(n * n - 1))));
    s = s + mul_q(e, Rational(n * n * n * n));
  }
  // tail over n > N via n^2 - 1 >= (N+1)^2 - 1 + 2(N+1)(n - N - 1)
  Ball z = exp(mul_q(pi, Rational(-2 * (N + 1))));
  Ball num = Ball::exact(1, wp) + mul_q(z, 11) + mul_q(z * z, 11) + z * z * z;
  Ball den = pow_ui(Ball::exact(1, wp) - z, 5);
  Ball tail = exp(mul_q(pi, Rational(-((N + 1) * (N + 1) - 1)))) *
              mul_q(num / den, Rational((N + 1) * (N + 1) * (N + 1) * (N + 1)));
  s = s.plus_interval_upper(tail);
  return (mul_2si(pi * pi, 1) * s).upper();
}

Ball phi(const Ball& t_in, const PhiConfig& cfg) {
  cfg.validate();
  Ball t = t_in;
  if (!t.is_nonnegative()) {
    if (t.is_negative()) throw std::domain_error("phi: t must be nonnegative");
    // clamp an interval dipping below 0 by rounding error; the kernel lives
    // on [0, inf) and the enclosed exact t is nonnegative
    mpfr_t lo, hi;
    mpfr_init2(lo, t.prec());
    mpfr_init2(hi, t.prec());
    mpfr_set_zero(lo, 1);
    t.get_upper(hi);
    t = Ball::from_endpoints(lo, hi, t.prec());
    mpfr_clear(lo);
    mpfr_clear(hi);
  }

  mpfr_prec_t wp = t.prec();
  Rational tol = cfg.term_tol == 0 ? default_term_tol(wp) : cfg.term_tol;
  Ball pi = Ball::pi(wp);
  Ball two_pi2 = mul_2si(pi * pi, 1);
  Ball three_pi = mul_q(pi, 3);

  Ball e_t = exp(t);
  Ball e4 = pow_ui(e_t, 4);
  Ball e5 = e4 * e_t;
  Ball e9 = e4 * e4 * e_t;
  Ball y1 = exp(-(pi * e4));

  Acc acc(wp);
  Ball y = y1;  // y1^(n^2)
  Ball q = y1;  // y1^(2n-1)
  Ball y1sq = y1 * y1;
  long n = 1;
  Ball partial(wp);
  for (;; ++n) {
    Rational n2(n * n), n4(Integer(n) * n * n * n);
    Ball term = (mul_q(e9, n4) * two_pi2 - mul_q(e5, n2) * three_pi) * y;
    acc.add(term);
    partial = acc.to_ball(wp);
    q = q * y1sq;
    y = y * q;  // y1^((n+1)^2)
    if (n >= cfg.n_cap) break;
    if (n >= 2) {
      Ball gate = mul_q(abs(partial), tol);
      if (certified_cmp(abs(term).upper(), gate).value_or(1) < 0) break;
    }
  }
  // series tail: sum_{m > n} m^4 y1^(m^2) <= (n+1)^4 y1^((n+1)^2) C(z)
  long m = n + 1;
  Ball z = pow_ui(y1, (unsigned long)(2 * m));
  Ball num = Ball::exact(1, wp) + mul_q(z, 11) + mul_q(z * z, 11) + z * z * z;
  Ball den = pow_ui(Ball::exact(1, wp) - z, 5);
  Ball tail = two_pi2 * e9 * mul_q(y, Rational(Integer(m) * m * m * m)) * (num / den);
  return partial.plus_interval_upper(tail.upper());
}

Ball phi_moment_tail(long k, const Rational& t_max, mpfr_prec_t prec) {
  // integral_{t_max}^inf t^{2k} Phi <= C e^{h(t_max)} / |h'(t_max)| with
  // h = 2k log t + 9t - pi e^{4t} concave; needs h'(t_max) < 0
  mpfr_prec_t wp = prec + 16;
  Ball tm = Ball::of_rational(t_max, wp);
  Ball pi = Ball::pi(wp);
  Ball e4 = exp(mul_q(tm, 4));
  Ball D = mul_q(pi * e4, 4) - mul_q(inv(tm), 2 * k) - Ball::exact(9, wp);
  if (!D.is_positive())
    throw std::invalid_argument(
        "phi_moment_tail: t_max too small for this k (log-derivative not negative)");
  Ball eh = pow_ui(tm, (unsigned long)(2 * k)) * exp(mul_q(tm, 9) - pi * e4);
  return (phi_envelope_const(wp) * eh / D).upper();
}

Ball xi1_coeff(long k, const PhiConfig& cfg, mpfr_prec_t prec) {
  cfg.validate();
  if (k < 0) throw std::invalid_argument("xi1_coeff: k must be nonnegative");
  mpfr_prec_t wp = prec + 64;
  PhiConfig node_cfg = cfg;
  if (node_cfg.term_tol == 0) node_cfg.term_tol = default_term_tol(wp);

  QuadratureConfig qc;
  qc.level = table_level(prec);
  qc.target_tol = Rational(1, Integer(1) << (unsigned long)(prec + 16));
  qc.domain = QuadratureDomain::finite(0, cfg.t_max);
  Ball I = quadrature_de(
      [&](const Ball& t) {
        return pow_ui(t, (unsigned long)(2 * k)) * phi(t, node_cfg);
      },
      qc, wp);
  I = I.plus_interval_upper(phi_moment_tail(k, cfg.t_max, wp));

  Rational pref(Integer(8) * (Integer(1) << (unsigned long)(2 * k)));
  Integer fact;
  mpz_fac_ui(fact.get_mpz_t(), (unsigned long)(2 * k));
  pref /= Rational(fact);
  return mul_q(I, pref).round_to(prec);
}

CoeffTablePtr CoeffTable::build(size_t k_max, mpfr_prec_t prec, PhiConfig cfg,
                                PrecisionPolicy policy) {
  cfg.validate();
  policy.validate();
  const int L = table_level(prec);
  const int base = 5;
  const mpfr_prec_t wp = prec + 64 + 2 * L;

  PhiConfig node_cfg = cfg;
  if (node_cfg.term_tol == 0) node_cfg.term_tol = default_term_tol(wp);

  QuadratureDomain dom = QuadratureDomain::finite(0, cfg.t_max);
  struct Node {
    Ball wphi, t2, p;
    bool coarse;
  };
  std::vector<Node> nodes;
  for (int lvl = base; lvl <= L; ++lvl)
    for (auto& qn : de_level_nodes(dom, lvl, base, wp))
      nodes.push_back(Node{qn.w * phi(qn.t, node_cfg), qn.t * qn.t,
                           Ball::exact(1, wp), qn.first_level < L});

  auto table = std::shared_ptr<CoeffTable>(new CoeffTable());
  table->phi_ = cfg;
  table->policy_ = policy;
  table->prec_ = prec;
  table->entries_.reserve(k_max + 1);

  Rational pref = 8;  // 8 * 4^k / (2k)!
  mpfr_t maxterm, cand;
  mpfr_init2(maxterm, 64);
  mpfr_init2(cand, 64);
  for (size_t k = 0; k <= k_max; ++k) {
    Acc full(wp), coarse(wp);
    mpfr_set_zero(maxterm, 1);
    for (auto& nd : nodes) {
      Ball term = nd.wphi * nd.p;
      full.add(term);
      if (nd.coarse) coarse.add(term);
      mpfr_abs(cand, term.mid(), MPFR_RNDU);
      mpfr_add(cand, cand, term.rad(), MPFR_RNDU);
      if (mpfr_cmp(cand, maxterm) > 0) mpfr_set(maxterm, cand, MPFR_RNDU);
      nd.p = nd.p * nd.t2;
    }
    Ball I = mul_2si(full.to_ball(wp), -L);
    Ball Ic = mul_2si(coarse.to_ball(wp), -(L - 1));
    Ball est = abs(I - Ic).upper();
    // u-cutoff truncation: the extreme terms decay double-exponentially, so
    // a small multiple of the largest term scaled far below target covers it
    Ball trunc =
        mul_2si(Ball::from_midrad(maxterm, maxterm, 64), -(L + (int)(wp - prec) / 2));
    I = I.widened(est).widened(trunc).plus_interval_upper(
        phi_moment_tail((long)k, cfg.t_max, wp));
    table->entries_.push_back(mul_q(I, pref).round_to(prec));
    pref *= Rational(4, Integer(2 * k + 1) * Integer(2 * k + 2));
  }
  mpfr_clear(maxterm);
  mpfr_clear(cand);

  for (size_t k = 0; k <= k_max; ++k)
    if (!table->entries_[k].is_positive())
      throw std::runtime_error("CoeffTable: coefficient " + std::to_string(k) +
                               " not certified positive at this precision");
  table->iphi_upper_ = mul_q(table->entries_[0], Rational(1, 8)).upper();
  return table;
}

const Ball& CoeffTable::coeff(size_t k) const {
  if (k >= entries_.size())
    throw InsufficientTableError("coefficient index " + std::to_string(k) +
                                     " beyond table (k_max = " +
                                     std::to_string(entries_.size() - 1) + ")",
                                 k);
  return entries_[k];
}

Ball CoeffTable::coeff_upper_bound(size_t j) const {
  mpfr_prec_t wp = std::max<mpfr_prec_t>(prec_, 128);
  Ball pi = Ball::pi(wp);
  Ball cphi = phi_envelope_const(wp);
  Ball best = Ball::infinite(wp);
  bool have = false;

  auto consider = [&](const Ball& te) {
    Ball e4 = exp(mul_q(te, 4));
    Ball D = mul_q(pi * e4, 4) - mul_q(inv(te), 2 * (long)j) - Ball::exact(9, wp);
    if (!D.is_positive()) return;
    Ball tepow = pow_ui(te, 2 * (unsigned long)j);
    Ball cand = (tepow * (iphi_upper_ + cphi * exp(mul_q(te, 9) - pi * e4) / D)).upper();
    if (!have || certified_cmp(cand, best).value_or(1) < 0) {
      best = cand;
      have = true;
    }
  };
  for (int num = 2; num <= 12; ++num)
    consider(Ball::of_rational(Rational(num, 4), wp));
  consider(te_formula(j, wp));

  Rational pref(Integer(8) * (Integer(1) << (unsigned long)(2 * j)));
  Integer fact;
  mpz_fac_ui(fact.get_mpz_t(), (unsigned long)(2 * j));
  pref /= Rational(fact);
  return mul_q(best, pref).upper();
}

namespace {

// rho_bar(j, R): decreasing-in-j majorant of bound_{j+1} R^{j+1} / (bound_j R^j)
Ball rho_bar(size_t j, const Ball& R, mpfr_prec_t wp) {
  Ball te1 = te_formula(j + 1, wp);
  Ball half = Ball::of_rational(Rational(1, 2), wp);
  return mul_q(R * te1 * te1 * exp(half),
               Rational(4, Integer(2 * j + 1) * Integer(2 * j + 2)))
      .upper();
}

}  // namespace

Ball CoeffTable::tail_beyond_table(const Ball& radius_upper) const {
  mpfr_prec_t wp = std::max<mpfr_prec_t>(prec_, 128);
  Ball R = abs(radius_upper).upper();
  if (R.is_exact_zero()) return Ball(wp);
  size_t K = k_max();
  Ball rho = rho_bar(K + 1, R, wp);
  if (!(Ball::exact(1, wp) - rho).is_positive()) {
    size_t j = std::max<size_t>(K, 4);
    while (j < (size_t)1e7) {
      j *= 2;
      Ball r2 = rho_bar(j, R, wp);
      if ((Ball::of_rational(Rational(1, 2), wp) - r2).is_positive()) break;
    }
    throw InsufficientTableError(
        "series tail not closable at this radius; extend the table to ~" +
            std::to_string(j) + " coefficients",
        j);
  }
  Ball head = coeff_upper_bound(K + 1) * pow_ui(R, (unsigned long)(K + 1));
  return (head / (Ball::exact(1, wp) - rho)).upper();
}

CBall XiSeries::eval(const CBall& z) const {
  const CoeffTable& tb = *table;
  mpfr_prec_t prec = std::max({z.re.prec(), z.im.prec(), tb.prec()});
  CBall zpow = CBall::exact(1, 0, prec);
  CBall acc{Ball(prec), Ball(prec)};
  for (size_t k = 0; k <= tb.k_max(); ++k) {
    acc = acc + zpow * tb.coeff(k);
    if (k < tb.k_max()) zpow = zpow * z;
  }
  Ball rub = sqrt(abs2(z)).upper();
  Ball tail = tb.tail_beyond_table(rub);
  return {acc.re.widened(tail), acc.im.widened(tail)};
}

Ball XiSeries::eval_real(const Ball& x) const { return power_sum(x, 0); }

Ball XiSeries::power_sum(const Ball& x, int p) const {
  if (p < 0 || p > 2) throw std::invalid_argument("power_sum: p in {0,1,2}");
  const CoeffTable& tb = *table;
  if (!x.is_nonnegative())
    throw std::domain_error("power_sum: x must be nonnegative");
  mpfr_prec_t prec = std::max(x.prec(), tb.prec());
  Ball xpow = Ball::exact(1, prec);
  Acc acc(prec);
  for (size_t k = 0; k <= tb.k_max(); ++k) {
    if (!(p > 0 && k == 0)) {
      Rational kp =
          p == 0 ? Rational(1)
                 : (p == 1 ? Rational((long)k) : Rational((long)k) * Rational((long)k));
      acc.add(mul_q(tb.coeff(k) * xpow, kp));
    }
    if (k < tb.k_max()) xpow = xpow * x;
  }
  Ball sum = acc.to_ball(prec);

  size_t K = tb.k_max();
  Ball R = x.upper();
  mpfr_prec_t wp = std::max<mpfr_prec_t>(prec, 128);
  Ball rho = rho_bar(K + 1, R, wp);
  Ball one = Ball::exact(1, wp);
  if (!(one - rho).is_positive())
    throw InsufficientTableError("power_sum: tail not closable at this radius",
                                 2 * K);
  Ball head = tb.coeff_upper_bound(K + 1) * pow_ui(R, (unsigned long)(K + 1));
  Ball om = one - rho;
  Ball factor;
  if (p == 0)
    factor = inv(om);
  else if (p == 1)
    factor = mul_q(inv(om * om), Rational((long)K + 1));
  else
    factor = mul_q((one + rho) * inv(pow_ui(om, 3)),
                   Rational((long)K + 1) * Rational((long)K + 1));
  return sum.plus_interval_upper((head * factor).upper());
}

const std::vector<Rational>& bernoulli_upto(size_t n) {
  static std::vector<Rational> cache{Rational(1)};
  while (cache.size() <= n) {
    size_t m = cache.size();
    Rational s = 0;
    for (size_t j = 0; j < m; ++j) {
      Integer binom;
      mpz_bin_uiui(binom.get_mpz_t(), m + 1, j);
      s += Rational(binom) * cache[j];
    }
    cache.push_back(-s / Rational((long)m + 1));
  }
  return cache;
}

Ball zeta_real(const Rational& s, mpfr_prec_t prec) {
  if (s == 1) throw std::invalid_argument("zeta_real: pole at s = 1");
  mpfr_prec_t wp = prec + 64;
  long N = std::max<long>(16, (long)(0.40 * (double)prec));

  Acc acc(wp);
  for (long n = 1; n < N; ++n) acc.add(exp(mul_q(log(Ball::exact(n, wp)), -s)));
  Ball sum = acc.to_ball(wp);

  Ball lnN = log(Ball::exact(N, wp));
  sum = sum + exp(mul_q(lnN, 1 - s)) * Ball::of_rational(1 / (s - 1), wp);
  Ball Npow = exp(mul_q(lnN, -s));
  sum = sum + mul_2si(Npow, -1);

  Rational poch = s;                     // s(s+1)...(s+2j-2)
  Ball npw = mul_q(Npow, Rational(N));   // N^(1-s); stepped down by N^-2
  Rational invN2(1, Integer(N) * N);
  Ball last_abs = Ball::infinite(64);
  Ball tol = Ball::of_rational(Rational(1, Integer(1) << (unsigned long)(wp - 8)), 64);
  for (size_t j = 1;; ++j) {
    if (j > 900) throw std::runtime_error("zeta_real: correction did not converge");
    npw = mul_q(npw, invN2);
    const Rational& B = bernoulli_upto(2 * j)[2 * j];
    Integer fact;
    mpz_fac_ui(fact.get_mpz_t(), 2 * (unsigned long)j);
    Ball term = mul_q(npw, B / Rational(fact) * poch);
    Ball ta = abs(term).upper();
    bool small = certified_cmp(ta, tol).value_or(1) < 0;
    bool growing = certified_cmp(ta, last_abs).value_or(-1) > 0;
    if (small || growing) {
      // remainder bounded by the first omitted correction term (real s)
      sum = sum.widened(ta);
      break;
    }
    sum = sum + term;
    last_abs = ta;
    poch *= (s + Rational(2 * (long)j - 1)) * (s + Rational(2 * (long)j));
  }
  return sum.round_to(prec);
}

Ball gamma_real(const Rational& x, mpfr_prec_t prec) {
  if (x <= 0) throw std::invalid_argument("gamma_real: x must be positive");
  mpfr_prec_t wp = prec + 64;
  long M = std::max<long>(8, (long)(0.12 * (double)prec) + 4);
  Rational w = x + M;

  Ball wb = Ball::of_rational(w, wp);
  Ball lnw = log(wb);
  Ball L = (wb - Ball::of_rational(Rational(1, 2), wp)) * lnw - wb +
           mul_2si(log(mul_2si(Ball::pi(wp), 1)), -1);

  Ball winv2 = inv(wb * wb);
  Ball wpow = inv(wb);  // w^(1-2j) at j = 1
  Ball last_abs = Ball::infinite(64);
  Ball tol = Ball::of_rational(Rational(1, Integer(1) << (unsigned long)(wp - 8)), 64);
  for (size_t j = 1;; ++j) {
    if (j > 900) throw std::runtime_error("gamma_real: Stirling did not converge");
    const Rational& B = bernoulli_upto(2 * j)[2 * j];
    Ball term = mul_q(wpow, B / Rational(Integer(2 * j) * Integer(2 * j - 1)));
    Ball ta = abs(term).upper();
    bool small = certified_cmp(ta, tol).value_or(1) < 0;
    bool growing = certified_cmp(ta, last_abs).value_or(-1) > 0;
    if (small || growing) {
      L = L.widened(ta);
      break;
    }
    L = L + term;
    last_abs = ta;
    wpow = wpow * winv2;
  }

  // Gamma(x) = Gamma(x + M) / prod_{i=0}^{M-1} (x + i)
  Rational denom = 1;
  for (long i = 0; i < M; ++i) denom *= x + i;
  return mul_q(exp(L), 1 / denom).round_to(prec);
}

Ball xi_half_direct(const PrecisionPolicy& policy) {
  policy.validate();
  mpfr_prec_t wp = policy.start_bits + 64;
  Ball z = zeta_real(Rational(1, 2), wp);
  Ball g = gamma_real(Rational(1, 4), wp);
  Ball pij = exp(mul_q(log(Ball::pi(wp)), Rational(-1, 4)));
  return mul_q(pij * g * z, Rational(-1, 8)).round_to(policy.start_bits);
}

std::vector<AsymRow> asym_diag(const std::vector<Rational>& r_grid,
                               const XiSeries& series, const Ball& theta) {
  std::vector<AsymRow> rows;
  mpfr_prec_t prec = series.table->prec();
  Ball c2 = log(Ball::exact(2, prec)) + Ball::exact(1, prec) + log(Ball::pi(prec));
  for (const Rational& r : r_grid) {
    if (r <= 1) throw std::invalid_argument("asym_diag: grid radii must exceed 1");
    Ball rb = Ball::of_rational(r, prec);
    Ball lnr = log(rb);
    Ball sr = sqrt(rb);
    Ball lead = mul_q(sr * lnr, Rational(1, 4)) - mul_q(sr * c2, Rational(1, 2));
    Ball lxi = log(series.eval_real(rb));

    AsymRow row;
    row.r = rb;
    row.headroom = (lxi - lead) / lnr;

    Ball S0 = series.power_sum(rb, 0);
    Ball S1 = series.power_sum(rb, 1);
    row.deriv_ratio = mul_q(S1, 8) / (S0 * lnr * sr);

    CBall zv = series.eval(from_polar(rb, theta));
    Ball labs = mul_2si(log(abs2(zv)), -1);
    Ball th2 = mul_2si(theta, -1);
    Ball lead_t = mul_q(sr * lnr * cos(th2), Rational(1, 4)) -
                  mul_q(sr * theta * sin(th2), Rational(1, 4)) -
                  mul_q(sr * c2 * cos(th2), Rational(1, 2));
    row.headroom_theta = (labs - lead_t) / lnr;
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// cache serialization

namespace {

Rational parse_rational(const std::string& s, const char* field) {
  try {
    // accept "n", "n/d", and plain decimals like "0.8"
    auto dot = s.find('.');
    if (dot != std::string::npos) {
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      size_t frac = s.size() - dot - 1;
      Integer num(digits);
      Integer den = 1;
      for (size_t i = 0; i < frac; ++i) den *= 10;
      Rational q(num, den);
      q.canonicalize();
      return q;
    }
    Rational q(s);
    q.canonicalize();
    return q;
  } catch (const std::exception&) {
    throw CacheFormatError(std::string("invalid rational in field '") + field + "'",
                           field);
  }
}

}  // namespace

std::string CoeffTable::to_json() const {
  nlohmann::ordered_json j;
  j["format_version"] = 1;
  j["phi_config"] = {{"n_cap", phi_.n_cap},
                     {"term_tol", phi_.term_tol.get_str()},
                     {"t_max", phi_.t_max.get_str()}};
  j["policy"] = {{"start_bits", (long)policy_.start_bits},
                 {"max_bits", (long)policy_.max_bits},
                 {"escalation_factor", policy_.escalation_factor.get_str()}};
  j["precision"] = (long)prec_;
  auto entries = nlohmann::ordered_json::array();
  for (size_t k = 0; k < entries_.size(); ++k)
    entries.push_back({{"k", k},
                       {"mid", entries_[k].mid_decimal()},
                       {"rad", entries_[k].rad_decimal()}});
  j["entries"] = std::move(entries);
  return j.dump(1);
}

CoeffTablePtr CoeffTable::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw CacheFormatError(std::string("cache is not valid JSON: ") + e.what(),
                           "(document)");
  }
  auto need = [&](const nlohmann::json& o, const char* field) -> const nlohmann::json& {
    if (!o.is_object() || !o.contains(field))
      throw CacheFormatError(std::string("missing field '") + field + "'", field);
    return o.at(field);
  };
  try {
    if (need(j, "format_version").get<long>() != 1)
      throw CacheFormatError("unsupported format_version", "format_version");

    auto table = std::shared_ptr<CoeffTable>(new CoeffTable());
    const auto& pc = need(j, "phi_config");
    table->phi_.n_cap = need(pc, "n_cap").get<long>();
    table->phi_.term_tol =
        parse_rational(need(pc, "term_tol").get<std::string>(), "term_tol");
    table->phi_.t_max = parse_rational(need(pc, "t_max").get<std::string>(), "t_max");
    const auto& po = need(j, "policy");
    table->policy_.start_bits = need(po, "start_bits").get<long>();
    table->policy_.max_bits = need(po, "max_bits").get<long>();
    table->policy_.escalation_factor = parse_rational(
        need(po, "escalation_factor").get<std::string>(), "escalation_factor");
    table->prec_ = need(j, "precision").get<long>();
    if (table->prec_ < 2) throw CacheFormatError("precision must exceed 1", "precision");

    const auto& entries = need(j, "entries");
    if (!entries.is_array() || entries.empty())
      throw CacheFormatError("entries must be a nonempty array", "entries");
    table->entries_.resize(entries.size(), Ball(table->prec_));
    std::vector<bool> seen(entries.size(), false);
    for (const auto& e : entries) {
      size_t k = need(e, "k").get<size_t>();
      if (k >= entries.size() || seen[k])
        throw CacheFormatError("entry indices must cover 0..k_max exactly once", "k");
      seen[k] = true;
      table->entries_[k] = Ball::from_decimal(need(e, "mid").get<std::string>(),
                                              need(e, "rad").get<std::string>(),
                                              table->prec_);
    }
    for (size_t k = 0; k < table->entries_.size(); ++k)
      if (!table->entries_[k].is_positive())
        throw CacheFormatError(
            "entry " + std::to_string(k) + " is not certified positive", "entries");
    table->iphi_upper_ = mul_q(table->entries_[0], Rational(1, 8)).upper();
    return table;
  } catch (const CacheFormatError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw CacheFormatError(e.what(), "(value)");
  } catch (const nlohmann::json::exception& e) {
    throw CacheFormatError(std::string("malformed cache value: ") + e.what(),
                           "(type)");
  }
}

}  // namespace pfzeta
