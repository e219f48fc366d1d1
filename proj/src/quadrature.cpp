#include "pfzeta/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace pfzeta {

double de_u_max(mpfr_prec_t prec) {
  // weight ~ exp(-(pi/2) e^|u|): cut where it falls below 2^-(prec+64)
  return std::log(((double)prec + 64.0) * 0.6931 * 2.0 / 3.1415) + 0.25;
}

namespace {

// abscissa/weight of the transform at exact dyadic u (without the step h)
QuadNode make_node(const QuadratureDomain& dom, const Rational& u, int first_level,
                   mpfr_prec_t prec) {
  mpfr_prec_t wp = prec + 16;
  Ball ub = Ball::of_rational(u, wp);
  Ball half_pi = mul_2si(Ball::pi(wp), -1);
  Ball s = half_pi * sinh(ub);
  QuadNode node;
  node.first_level = first_level;
  if (dom.kind == QuadratureDomain::Kind::Finite) {
    Ball c = Ball::of_rational((dom.a + dom.b) / 2, wp);
    Ball d = Ball::of_rational((dom.b - dom.a) / 2, wp);
    Ball ch = cosh(s);
    node.t = c + d * tanh(s);
    node.w = d * half_pi * cosh(ub) / (ch * ch);
  } else {
    Ball e = exp(s);
    node.t = Ball::of_rational(dom.a, wp) + e;
    node.w = half_pi * cosh(ub) * e;
  }
  return node;
}

}  // namespace

std::vector<QuadNode> de_level_nodes(const QuadratureDomain& dom, int level,
                                     int base_level, mpfr_prec_t prec) {
  std::vector<QuadNode> nodes;
  double umax = de_u_max(prec);
  Rational h(1, Integer(1) << level);
  long jmax = (long)std::ceil(umax * std::ldexp(1.0, level));
  if (level == base_level) {
    long stride = 1;
    for (long j = -jmax; j <= jmax; ++j)
      nodes.push_back(make_node(dom, Rational(j) * h, base_level, prec));
    (void)stride;
  } else {
    for (long j = -jmax; j <= jmax; ++j) {
      if ((j & 1) == 0) continue;  // even multiples belong to coarser grids
      nodes.push_back(make_node(dom, Rational(j) * h, level, prec));
    }
  }
  return nodes;
}

Ball de_right_edge(const QuadratureDomain& dom, mpfr_prec_t prec) {
  double umax = de_u_max(prec);
  // round down to a dyadic below umax so the edge is inside the truncation
  Rational u((long)(umax * 1024.0), 1024);
  return make_node(dom, u, 0, prec).t;
}

Ball quadrature_de(const std::function<Ball(const Ball&)>& f,
                   const QuadratureConfig& cfg, mpfr_prec_t prec,
                   const std::function<Ball(const Ball&)>& tail_bound) {
  if (cfg.domain.kind == QuadratureDomain::Kind::SemiInfinite && !tail_bound)
    throw std::invalid_argument(
        "quadrature_de: semi-infinite domain requires a tail bound function");

  const int base = std::min(5, cfg.level);
  // guard bits scale with depth so ulp accumulation stays below the
  // discretization estimate and deepening a level cannot grow the radius
  const mpfr_prec_t wp = prec + 64 + 2 * (mpfr_prec_t)cfg.level;
  Ball tol = Ball::of_rational(cfg.target_tol, 64);

  std::vector<Ball> terms;     // w_j * f(t_j) for every node seen so far
  Ball max_abs_f = Ball(wp);   // running sup estimate of |f| over nodes
  Ball prev(wp), cur(wp), est = Ball::infinite(64);
  int used_level = base;

  for (int lvl = base; lvl <= cfg.level; ++lvl) {
    for (const auto& node : de_level_nodes(cfg.domain, lvl, base, wp)) {
      Ball fv = f(node.t);
      terms.push_back(node.w * fv);
      max_abs_f = max_ball(max_abs_f, abs(fv).upper());
    }
    cur = mul_2si(sum_pairwise(terms, wp), -lvl);
    used_level = lvl;
    if (lvl > base) {
      est = abs(cur - prev).upper();
      if (certified_cmp(est, tol).value_or(1) < 0 && lvl >= base + 2) break;
    }
    prev = cur;
  }

  // discretization estimate from the last grid halving
  Ball out = est.is_finite() ? cur.widened(est) : cur;

  // u-range truncation: the weights decay double-exponentially toward the
  // cutoff, so a few edge weights bound the dropped mass.  For semi-infinite
  // domains the right edge is covered by the caller's tail bound instead
  // (the raw weight there is huge; only w*f is small).
  {
    double umax = de_u_max(wp);
    Rational uedge((long)(umax * 1024.0), 1024);
    QuadNode edge = make_node(cfg.domain, -uedge, 0, wp);
    Ball trunc = mul_2si(edge.w * max_abs_f, -used_level + 2);
    if (cfg.domain.kind == QuadratureDomain::Kind::Finite) {
      QuadNode redge = make_node(cfg.domain, uedge, 0, wp);
      trunc = trunc + mul_2si(redge.w * max_abs_f, -used_level + 2);
    }
    out = out.widened(trunc.upper());
  }

  if (cfg.domain.kind == QuadratureDomain::Kind::SemiInfinite) {
    Ball T = de_right_edge(cfg.domain, wp);
    out = out.widened(abs(tail_bound(T)).upper());
  }
  return out.round_to(prec);
}

}  // namespace pfzeta
