#pragma once

#include <functional>
#include <vector>

#include "pfzeta/ball.hpp"

namespace pfzeta {

struct QuadratureDomain {
  enum class Kind { Finite, SemiInfinite };
  Kind kind = Kind::Finite;
  Rational a = 0, b = 1;  // [a, b], or [a, inf)

  static QuadratureDomain finite(Rational lo, Rational hi) {
    if (lo >= hi) throw std::invalid_argument("quadrature: need a < b");
    return {Kind::Finite, std::move(lo), std::move(hi)};
  }
  static QuadratureDomain semi_infinite(Rational lo) {
    return {Kind::SemiInfinite, std::move(lo), 0};
  }
};

struct QuadratureConfig {
  int level = 10;               // node-doubling depth, step h = 2^-level
  Rational target_tol = Rational(1, Integer(1) << 40);
  QuadratureDomain domain;
};

/// One abscissa of the doubly-exponential rule.  `first_level` is the
/// coarsest node-doubling level whose grid contains this node; the rule at
/// level L sums every node with first_level <= L and scales by 2^-L.
struct QuadNode {
  Ball t;
  Ball w;
  int first_level;
};

/// Nodes introduced at `level` (for level == base_level: the whole coarse
/// grid).  The union over base..L is the full grid of step 2^-L.
std::vector<QuadNode> de_level_nodes(const QuadratureDomain& dom, int level,
                                     int base_level, mpfr_prec_t prec);

/// Parameter cutoff |u| <= U used by the node generator at this precision,
/// and the right edge abscissa t(U) for semi-infinite domains.
double de_u_max(mpfr_prec_t prec);
Ball de_right_edge(const QuadratureDomain& dom, mpfr_prec_t prec);

/// Doubly-exponential quadrature (tanh-sinh on finite domains, exponential
/// substitution on semi-infinite ones).  The output radius carries the node
/// arithmetic radii plus discretization and truncation estimates; missing the
/// tolerance at the maximum level shows up as an oversized radius, never as
/// an exception.  Semi-infinite domains require `tail_bound`, an upper bound
/// on |integral of f over [T, inf)| as a function of T.
Ball quadrature_de(const std::function<Ball(const Ball&)>& f,
                   const QuadratureConfig& cfg, mpfr_prec_t prec,
                   const std::function<Ball(const Ball&)>& tail_bound = nullptr);

}  // namespace pfzeta
