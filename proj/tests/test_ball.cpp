#include <doctest.h>

#include <random>

#include "pfzeta/ball.hpp"
#include "pfzeta/det.hpp"
#include "pfzeta/quadrature.hpp"
#include "pfzeta/roots.hpp"
#include "pfzeta/sign.hpp"

using namespace pfzeta;

namespace {

Rational rand_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-50, 50);
  std::uniform_int_distribution<long> den(1, 20);
  return Rational(num(rng), den(rng));
}

// random expression over {+,-,*,/}, evaluated exactly and in ball arithmetic
struct ExprResult {
  Rational exact;
  Ball ball;
};

ExprResult rand_expr(std::mt19937_64& rng, int depth, mpfr_prec_t prec) {
  if (depth == 0) {
    Rational q = rand_rational(rng);
    return {q, Ball::of_rational(q, prec)};
  }
  ExprResult a = rand_expr(rng, depth - 1, prec);
  ExprResult b = rand_expr(rng, depth - 1, prec);
  switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
    case 0: return {a.exact + b.exact, a.ball + b.ball};
    case 1: return {a.exact - b.exact, a.ball - b.ball};
    case 2: return {a.exact * b.exact, a.ball * b.ball};
    default:
      if (b.exact == 0) return a;
      return {a.exact / b.exact, a.ball / b.ball};
  }
}

}  // namespace

TEST_CASE("ball inclusion on 1000 random rational expressions") {
  std::mt19937_64 rng(20260810);
  for (int i = 0; i < 1000; ++i) {
    ExprResult r = rand_expr(rng, 4, 64);
    CAPTURE(i);
    REQUIRE(r.ball.contains(r.exact));
  }
}

TEST_CASE("exact rationals round through balls with tight radius") {
  Ball third = Ball::of_rational(Rational(1, 3), 128);
  CHECK(third.contains(Rational(1, 3)));
  CHECK(!third.is_exact());
  Ball half = Ball::of_rational(Rational(1, 2), 128);
  CHECK(half.is_exact());

  Ball sum = third + third + third;
  CHECK(sum.contains(Rational(1)));
}

TEST_CASE("elementary enclosures") {
  mpfr_prec_t p = 128;
  Ball one = Ball::exact(1, p);
  Ball e = exp(one);
  CHECK(log(e).contains(Rational(1)));

  Ball two = Ball::exact(2, p);
  Ball r = sqrt(two);
  CHECK((r * r).contains(Rational(2)));

  Ball pi = Ball::pi(p);
  CHECK(sin(pi).contains_zero());
  CHECK(cos(Ball(p)).contains(Rational(1)));

  // tanh/sinh/cosh consistency: tanh = sinh/cosh
  Ball x = Ball::of_rational(Rational(7, 10), p);
  CHECK(tanh(x).overlaps(sinh(x) / cosh(x)));

  // pow
  Ball b = Ball::of_rational(Rational(3, 7), p);
  CHECK(pow_ui(b, 5).contains(Rational(243, 16807)));
}

TEST_CASE("division by a zero-straddling ball gives an uninformative ball") {
  Ball z = Ball::exact(1, 64) - Ball::exact(1, 64);
  Ball w = Ball::exact(1, 64).widened(Ball::of_rational(Rational(1, 100), 64));
  Ball q = w / z;
  CHECK(!q.is_finite());
  CHECK(sign_of(q).tag == SignTag::Undetermined);
}

TEST_CASE("certified_sign examples") {
  PrecisionPolicy pol;
  SUBCASE("interval excludes zero") {
    Ball x = Ball::of_double(3.0, 64).widened(Ball::of_double(0.5, 64));
    CHECK(certified_sign(x, pol).tag == SignTag::Positive);
  }
  SUBCASE("interval contains zero, no recompute gain") {
    Ball x = Ball::of_double(0.001, 64).widened(Ball::of_double(0.01, 64));
    Sign s = certified_sign(x, pol, [&](mpfr_prec_t bits) {
      return Ball::of_double(0.001, bits).widened(Ball::of_double(0.01, bits));
    });
    CHECK(s.tag == SignTag::Undetermined);
    CHECK(s.at_bits == pol.max_bits);
  }
  SUBCASE("exact rational -2/3") {
    Ball x = Ball::of_rational(Rational(-2, 3), 64);
    CHECK(certified_sign(x, pol).tag == SignTag::Negative);
  }
  SUBCASE("exact zero") {
    CHECK(certified_sign(Ball(64), pol).tag == SignTag::Zero);
  }
  SUBCASE("escalation resolves a sign") {
    // value 2^-100, enclosed sloppily at 64 bits, sharply when recomputed
    auto at = [](mpfr_prec_t bits) {
      Ball tiny = mul_2si(Ball::exact(1, bits), -100);
      if (bits <= 64) return tiny.widened(mul_2si(Ball::exact(1, 64), -99));
      return tiny;
    };
    Sign s = certified_sign(at(64), pol);
    CHECK(s.tag == SignTag::Undetermined);
    s = certified_sign(at(64), pol, at);
    CHECK(s.tag == SignTag::Positive);
    CHECK(s.at_bits > 64);
  }
}

TEST_CASE("certified_sign never contradicts the exact sign on rationals") {
  std::mt19937_64 rng(7);
  PrecisionPolicy pol;
  for (int i = 0; i < 300; ++i) {
    ExprResult r = rand_expr(rng, 3, 64);
    Sign s = sign_of(r.ball);
    if (s.tag == SignTag::Positive) CHECK(r.exact > 0);
    if (s.tag == SignTag::Negative) CHECK(r.exact < 0);
    if (s.tag == SignTag::Zero) CHECK(r.exact == 0);
  }
}

TEST_CASE("certified floor and cmp") {
  Ball x = Ball::of_rational(Rational(7, 2), 64);
  auto f = certified_floor(x);
  REQUIRE(f.has_value());
  CHECK(*f == 3);
  // a ball straddling an integer has no certified floor
  Ball y = Ball::exact(2, 64).widened(Ball::of_rational(Rational(1, 1000), 64));
  CHECK(!certified_floor(y).has_value());

  CHECK(certified_cmp(Ball::exact(1, 64), Ball::exact(2, 64)).value() == -1);
  CHECK(certified_cmp(Ball::exact(2, 64), Ball::exact(2, 64)).value() == 0);
}

TEST_CASE("pairwise sum matches sequential") {
  std::vector<Ball> v;
  Rational total = 0;
  std::mt19937_64 rng(99);
  for (int i = 0; i < 37; ++i) {
    Rational q = rand_rational(rng);
    total += q;
    v.push_back(Ball::of_rational(q, 128));
  }
  CHECK(sum_pairwise(v, 128).contains(total));
}

TEST_CASE("complex ball arithmetic") {
  mpfr_prec_t p = 128;
  CBall i = CBall::exact(0, 1, p);
  CBall m = i * i;
  CHECK(m.re.contains(Rational(-1)));
  CHECK(m.im.contains_zero());

  CBall z{Ball::of_rational(Rational(3), p), Ball::of_rational(Rational(4), p)};
  CHECK(abs2(z).contains(Rational(25)));
  CBall q = z / z;
  CHECK(q.re.contains(Rational(1)));
  CHECK(q.im.contains(Rational(0)));
}

TEST_CASE("determinant examples") {
  SUBCASE("triangular") {
    std::vector<std::vector<Rational>> m{{1, 1}, {0, 1}};
    CHECK(det_exact(m) == 1);
  }
  SUBCASE("2x2 by cofactor expansion") {
    std::vector<std::vector<Rational>> m{{2, 1}, {1, 2}};
    CHECK(det_exact(m) == 3);
  }
  SUBCASE("3x3 Hilbert, entries 1/(i+j+1)") {
    std::vector<std::vector<Rational>> m(3, std::vector<Rational>(3));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[i][j] = Rational(1, i + j + 1);
    CHECK(det_exact(m) == Rational(1, 2160));
  }
  SUBCASE("dimension 0 rejected") {
    CHECK_THROWS_AS(det_exact({}), std::invalid_argument);
    CHECK_THROWS_AS(det_ball({}), std::invalid_argument);
  }
}

TEST_CASE("ball determinant agrees with fraction-free oracle on random 4x4") {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<std::vector<Rational>> m(4, std::vector<Rational>(4));
    std::vector<std::vector<Ball>> mb(4, std::vector<Ball>(4));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        m[i][j] = rand_rational(rng);
        mb[i][j] = Ball::of_rational(m[i][j], 96);
      }
    Rational d = det_exact(m);
    CAPTURE(trial);
    REQUIRE(det_ball(mb).contains(d));
  }
}

TEST_CASE("ball determinant handles an exact zero row") {
  std::vector<std::vector<Ball>> m(3, std::vector<Ball>(3, Ball(64)));
  m[0] = {Ball::exact(1, 64), Ball::exact(2, 64), Ball::exact(3, 64)};
  m[2] = {Ball::exact(4, 64), Ball::exact(5, 64), Ball::exact(6, 64)};
  Ball d = det_ball(m);
  CHECK(d.is_exact_zero());
}

TEST_CASE("quadrature: integral of t^2 over [0,1]") {
  QuadratureConfig cfg;
  cfg.level = 9;
  cfg.target_tol = Rational(1, Integer(1) << 110);
  cfg.domain = QuadratureDomain::finite(0, 1);
  Ball I = quadrature_de([](const Ball& t) { return t * t; }, cfg, 192);
  CHECK(I.contains(Rational(1, 3)));
  Ball err = abs(I - Ball::of_rational(Rational(1, 3), 192));
  Rational tol(1, 1);
  for (int i = 0; i < 30; ++i) tol /= 10;
  CHECK(certified_cmp(err, Ball::of_rational(tol, 192)).value_or(1) < 0);
}

TEST_CASE("quadrature: semi-infinite examples") {
  Rational tol30(1, 1);
  for (int i = 0; i < 30; ++i) tol30 /= 10;
  QuadratureConfig cfg;
  cfg.level = 9;
  cfg.target_tol = tol30 / 100;
  cfg.domain = QuadratureDomain::semi_infinite(0);

  SUBCASE("exp(-t) integrates to 1") {
    Ball I = quadrature_de([](const Ball& t) { return exp(-t); }, cfg, 192,
                           [](const Ball& T) { return exp(-T); });
    CHECK(I.contains(Rational(1)));
    CHECK(certified_cmp(abs(I - Ball::exact(1, 192)),
                        Ball::of_rational(tol30, 192)).value_or(1) < 0);
  }
  SUBCASE("exp(-t^2) integrates to sqrt(pi)/2") {
    Ball I = quadrature_de([](const Ball& t) { return exp(-(t * t)); }, cfg, 192,
                           [](const Ball& T) {
                             // tail <= exp(-T^2)/(2T) for T >= 1
                             return exp(-(T * T)) / mul_2si(T, 1);
                           });
    Ball ref = mul_2si(sqrt(Ball::pi(192)), -1);
    CHECK(I.overlaps(ref));
    CHECK(certified_cmp(abs(I - ref), Ball::of_rational(tol30, 192)).value_or(1) < 0);
  }
}

TEST_CASE("quadrature: doubling the level never grows the reported radius") {
  auto radius_at = [](int level, const QuadratureDomain& dom,
                      const std::function<Ball(const Ball&)>& f,
                      const std::function<Ball(const Ball&)>& tail) {
    QuadratureConfig cfg;
    cfg.level = level;
    cfg.target_tol = Rational(1, Integer(1) << 400);  // never met: full depth
    cfg.domain = dom;
    Ball I = quadrature_de(f, cfg, 192, tail);
    return I.rad_d();
  };
  auto sq = [](const Ball& t) { return t * t; };
  auto et = [](const Ball& t) { return exp(-t); };
  auto et2 = [](const Ball& t) { return exp(-(t * t)); };
  auto tail_et = [](const Ball& T) { return exp(-T); };
  auto tail_et2 = [](const Ball& T) { return exp(-(T * T)) / mul_2si(T, 1); };

  auto dom_f = QuadratureDomain::finite(0, 1);
  auto dom_s = QuadratureDomain::semi_infinite(0);
  for (int lvl = 6; lvl <= 8; ++lvl) {
    CHECK(radius_at(lvl + 1, dom_f, sq, nullptr) <= radius_at(lvl, dom_f, sq, nullptr));
    CHECK(radius_at(lvl + 1, dom_s, et, tail_et) <= radius_at(lvl, dom_s, et, tail_et));
    CHECK(radius_at(lvl + 1, dom_s, et2, tail_et2) <= radius_at(lvl, dom_s, et2, tail_et2));
  }
}

TEST_CASE("solve_monotone examples") {
  mpfr_prec_t p = 192;
  Rational tol(1, Integer(1) << 80);

  SUBCASE("exp(x) = 10 -> ln 10") {
    Ball r = solve_monotone([](const Ball& x) { return exp(x); },
                            Ball::exact(10, p), 0, 5, tol, p);
    CHECK(r.overlaps(log(Ball::exact(10, p))));
    CHECK(abs(r - log(Ball::exact(10, p))).mid_d() < 1e-20);
  }
  SUBCASE("identity root") {
    Ball r = solve_monotone([](const Ball& x) { return x; },
                            Ball::of_rational(Rational(1, 2), p), 0, 1, tol, p);
    CHECK(r.contains(Rational(1, 2)));
  }
  SUBCASE("e^eta + e^(2 eta) = 2 at eta = 0") {
    Ball r = solve_monotone(
        [](const Ball& x) { return exp(x) + exp(mul_2si(x, 1)); },
        Ball::exact(2, p), -1, 1, tol, p);
    CHECK(r.contains(Rational(0)));
  }
  SUBCASE("bracket violation") {
    CHECK_THROWS_AS(solve_monotone([](const Ball& x) { return x; },
                                   Ball::exact(5, p), 0, 1, tol, p),
                    BracketError);
  }
}
