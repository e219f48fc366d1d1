#include "pfzeta/det.hpp"

#include <algorithm>
#include <stdexcept>

namespace pfzeta {

Rational det_exact(std::vector<std::vector<Rational>> m) {
  const size_t n = m.size();
  if (n == 0) throw std::invalid_argument("det_exact: dimension 0");
  for (const auto& row : m)
    if (row.size() != n) throw std::invalid_argument("det_exact: not square");

  // Clear denominators per row: det(M) = det(int matrix) / prod(row lcms).
  std::vector<std::vector<Integer>> a(n, std::vector<Integer>(n));
  Integer denom = 1;
  for (size_t i = 0; i < n; ++i) {
    Integer l = 1;
    for (size_t j = 0; j < n; ++j) {
      m[i][j].canonicalize();
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m[i][j].get_den().get_mpz_t());
    }
    for (size_t j = 0; j < n; ++j) {
      Rational scaled = m[i][j] * Rational(l);
      scaled.canonicalize();
      a[i][j] = scaled.get_num();
    }
    denom *= l;
  }

  // Bareiss: all divisions exact.
  int sign = 1;
  Integer prev = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      size_t piv = k + 1;
      while (piv < n && a[piv][k] == 0) ++piv;
      if (piv == n) return Rational(0);
      std::swap(a[k], a[piv]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j) {
        Integer t = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  Rational det(a[n - 1][n - 1] * sign, denom);
  det.canonicalize();
  return det;
}

namespace {

bool row_exact_zero(const std::vector<std::vector<Ball>>& m, size_t i) {
  for (const auto& x : m[i])
    if (!x.is_exact_zero()) return false;
  return true;
}

bool col_exact_zero(const std::vector<std::vector<Ball>>& m, size_t j) {
  for (const auto& row : m)
    if (!row[j].is_exact_zero()) return false;
  return true;
}

// |det| <= prod_i ||row_i||_2 over the active submatrix, rounded up.
Ball hadamard_bound(const std::vector<std::vector<Ball>>& m, size_t from,
                    mpfr_prec_t prec) {
  Ball bound = Ball::exact(1, prec);
  for (size_t i = from; i < m.size(); ++i) {
    Ball s(prec);
    for (size_t j = from; j < m.size(); ++j) {
      Ball u = abs(m[i][j]).upper();
      s = s + u * u;
    }
    bound = bound * sqrt(s).upper();
  }
  return bound.upper();
}

}  // namespace

Ball det_ball(std::vector<std::vector<Ball>> m) {
  const size_t n = m.size();
  if (n == 0) throw std::invalid_argument("det_ball: dimension 0");
  mpfr_prec_t prec = 2;
  for (const auto& row : m) {
    if (row.size() != n) throw std::invalid_argument("det_ball: not square");
    for (const auto& x : row) prec = std::max(prec, x.prec());
  }
  for (size_t i = 0; i < n; ++i)
    if (row_exact_zero(m, i) || col_exact_zero(m, i))
      return Ball::exact(0, prec);

  Ball det = Ball::exact(1, prec);
  int sign = 1;
  for (size_t k = 0; k < n; ++k) {
    // full pivoting on |mid| among entries whose sign is certain
    size_t pi = n, pj = n;
    mpfr_t best, cand;
    mpfr_init2(best, 64);
    mpfr_init2(cand, 64);
    mpfr_set_zero(best, 1);
    for (size_t i = k; i < n; ++i) {
      for (size_t j = k; j < n; ++j) {
        if (m[i][j].contains_zero()) continue;
        mpfr_abs(cand, m[i][j].mid(), MPFR_RNDD);
        if (pi == n || mpfr_cmp(cand, best) > 0) {
          mpfr_set(best, cand, MPFR_RNDD);
          pi = i;
          pj = j;
        }
      }
    }
    mpfr_clear(best);
    mpfr_clear(cand);
    if (pi == n) {
      // every remaining entry straddles zero; if all are exactly zero the
      // determinant is exactly zero, otherwise fall back to a Hadamard bound
      bool all_exact_zero = true;
      for (size_t i = k; i < n && all_exact_zero; ++i)
        for (size_t j = k; j < n; ++j)
          if (!m[i][j].is_exact_zero()) {
            all_exact_zero = false;
            break;
          }
      if (all_exact_zero) return Ball::exact(0, prec);
      Ball residual = Ball(prec).widened(hadamard_bound(m, k, prec));
      Ball out = det * residual;
      if (sign < 0) out = -out;
      return out;
    }
    if (pi != k) {
      std::swap(m[pi], m[k]);
      sign = -sign;
    }
    if (pj != k) {
      for (size_t i = 0; i < n; ++i) std::swap(m[i][pj], m[i][k]);
      sign = -sign;
    }
    det = det * m[k][k];
    if (k + 1 < n) {
      Ball pinv = inv(m[k][k]);
      for (size_t i = k + 1; i < n; ++i) {
        if (m[i][k].is_exact_zero()) continue;
        Ball factor = m[i][k] * pinv;
        for (size_t j = k + 1; j < n; ++j)
          m[i][j] = m[i][j] - factor * m[k][j];
        m[i][k] = Ball(prec);
      }
    }
  }
  if (sign < 0) det = -det;
  return det;
}

}  // namespace pfzeta
