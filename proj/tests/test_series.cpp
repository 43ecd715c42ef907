#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "hartogs/series.hpp"

using namespace hartogs;

namespace {
std::mt19937 rng(77120813u);

ExactComplex rc() {
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 9);
  return {Rat(num(rng), den(rng)), Rat(num(rng), den(rng))};
}

SeriesX random_hartogs_series(int terms = 5) {
  SeriesX s(Domain::HartogsTriangle);
  std::uniform_int_distribution<int> nn(0, 8);
  for (int t = 0; t < terms; ++t) {
    int n = nn(rng);
    std::uniform_int_distribution<int> mm(-(n + 1), 8);
    s.set(mm(rng), n, rc());
  }
  return s;
}

SeriesX random_taylor_series(Domain d, int terms = 5) {
  SeriesX s(d);
  std::uniform_int_distribution<int> idx(0, 8);
  for (int t = 0; t < terms; ++t) s.set(idx(rng), idx(rng), rc());
  return s;
}

Point2C random_punctured_bidisc_point() {
  std::uniform_real_distribution<double> rad(0.05, 0.95);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);
  return {Polar(rad(rng), ang(rng)), Polar(rad(rng), ang(rng))};
}
}  // namespace

TEST_CASE("index constraints per domain") {
  REQUIRE(index_allowed(Domain::Bidisc, {0, 0}));
  REQUIRE(!index_allowed(Domain::Bidisc, {-1, 0}));
  REQUIRE(index_allowed(Domain::HartogsTriangle, {-1, 0}));
  REQUIRE(index_allowed(Domain::HartogsTriangle, {-3, 2}));
  REQUIRE(!index_allowed(Domain::HartogsTriangle, {-4, 2}));
  REQUIRE(!index_allowed(Domain::HartogsTriangle, {0, -1}));
  REQUIRE(index_allowed(Domain::PuncturedBidisc, {-7, 3}));
  REQUIRE(index_allowed(Domain::Disc, {5, 0}));
  REQUIRE(!index_allowed(Domain::Disc, {5, 1}));
  REQUIRE(index_allowed(Domain::PuncturedDisc, {-5, 0}));

  SeriesX s(Domain::HartogsTriangle);
  REQUIRE_THROWS_AS(s.set(-4, 2, ExactComplex{Rat(1), Rat(0)}), std::invalid_argument);
}

TEST_CASE("evaluation of sparse series") {
  SeriesX one = monomial_series(Domain::HartogsTriangle, 0, 0);
  Point2C z{Polar(0.4, 1.1), Polar(0.2, 0.3)};
  REQUIRE(std::abs(eval(one, z) - CxD{1, 0}) < 1e-15);

  SeriesX invz1 = monomial_series(Domain::HartogsTriangle, -1, 0);
  for (double theta : {0.0, 0.7, 3.9}) {
    Point2C p{Polar(0.5, theta), Polar(0.1, 0.0)};
    CxD expect = 2.0 * std::exp(CxD{0, -theta});
    REQUIRE(std::abs(eval(invz1, p) - expect) < 1e-14);
  }

  SeriesX mono(Domain::Bidisc);
  mono.set(1, 1, ExactComplex{Rat(2), Rat(0)});
  Point2C w{Polar(0.3, 0.4), Polar(0.6, 1.9)};
  CxD expect = 2.0 * 0.3 * 0.6 * std::exp(CxD{0, 0.4 + 1.9});
  REQUIRE(std::abs(eval(mono, w) - expect) < 1e-14);

  Point2C origin{Polar(0.0, 0.0), Polar(0.0, 0.0)};
  REQUIRE_THROWS_AS(eval(invz1, origin), SingularEvaluation);
  REQUIRE(std::abs(eval(one, origin) - CxD{1, 0}) < 1e-15);
}

TEST_CASE("partial sums keep low first-variable degrees") {
  SeriesX s(Domain::Bidisc);
  s.set(0, 0, ExactComplex{Rat(1), Rat(0)});
  s.set(1, 0, ExactComplex{Rat(1), Rat(0)});
  s.set(0, 5, ExactComplex{Rat(3), Rat(0)});

  SeriesX s0 = partial_sum(s, 0);
  REQUIRE(s0.coeffs.size() == 2);
  REQUIRE(s0.find(0, 0) != nullptr);
  REQUIRE(s0.find(0, 5) != nullptr);
  REQUIRE(s0.find(1, 0) == nullptr);

  REQUIRE(partial_sum(s, 1) == s);
  REQUIRE(partial_sum(s, 99) == s);

  for (int i = 0; i < 20; ++i) {
    SeriesX r = random_taylor_series(Domain::Bidisc);
    REQUIRE(partial_sum(partial_sum(r, 5), 2) == partial_sum(r, 2));
  }

  SeriesX h = monomial_series(Domain::HartogsTriangle, -1, 0);
  REQUIRE_THROWS_AS(partial_sum(h, 3), std::invalid_argument);
}

TEST_CASE("multiplier sequences act diagonally") {
  MultiplierSeq t = MultiplierSeq::one_plus_inverse();
  REQUIRE(t(0) == Rat(2));
  REQUIRE(t(1) == Rat(3, 2));
  REQUIRE(t(64) == Rat(66, 65));

  SeriesX c0 = monomial_series(Domain::Bidisc, 0, 0);
  REQUIRE(apply_multiplier(c0, t).find(0, 0)->re == Rat(2));

  SeriesX c11 = monomial_series(Domain::Bidisc, 1, 1);
  REQUIRE(apply_multiplier(c11, t).find(1, 1)->re == Rat(3, 2));

  MultiplierSeq unit = MultiplierSeq::constant(Rat(1));
  for (int i = 0; i < 10; ++i) {
    SeriesX r = random_taylor_series(Domain::Bidisc);
    REQUIRE(apply_multiplier(r, unit) == r);
  }
}

TEST_CASE("bounded variation norms") {
  BvResult bv = bv_norm(MultiplierSeq::one_plus_inverse(), 64);
  REQUIRE(bv.value == Rat(1));
  REQUIRE(bv.exact_tail);
  REQUIRE(*bv.limit == Rat(1));
  // partial sum telescopes: t_0 - t_64 = 2 - 66/65
  REQUIRE(bv.partial == Rat(2) - Rat(66, 65));

  REQUIRE(bv_norm(MultiplierSeq::constant(Rat(7, 3)), 16).value == Rat(0));

  REQUIRE_THROWS_AS(bv_norm(MultiplierSeq::alternating(), 4096), DivergentSequence);
}

TEST_CASE("transfer of monomials between the triangle and the bidisc") {
  SeriesX invz1 = monomial_series(Domain::HartogsTriangle, -1, 0);
  SeriesX img = bell_transform(invz1, BellDirection::HToDD);
  REQUIRE(img.domain == Domain::PuncturedBidisc);
  REQUIRE(img.coeffs.size() == 1);
  REQUIRE(img.find(0, 0) != nullptr);

  SeriesX one = monomial_series(Domain::HartogsTriangle, 0, 0);
  SeriesX w1 = bell_transform(one, BellDirection::HToDD);
  REQUIRE(w1.find(1, 0) != nullptr);
  REQUIRE(w1.coeffs.size() == 1);
}

TEST_CASE("index map is a bijection onto non-negative indices") {
  for (int n = 0; n <= 64; ++n) {
    for (int m = -64; m <= 64; ++m) {
      if (!index_allowed(Domain::HartogsTriangle, {m, n})) continue;
      BiIndex img = bell_index({m, n}, BellDirection::HToDD);
      REQUIRE(img.m >= 0);
      REQUIRE(img.n == n);
      BiIndex back = bell_index(img, BellDirection::DDToH);
      REQUIRE(back == BiIndex{m, n});
    }
  }
  // every non-negative (mu, nu) is hit
  for (int mu = 0; mu <= 64; ++mu)
    for (int nu = 0; nu <= 64; ++nu) {
      BiIndex pre = bell_index({mu, nu}, BellDirection::DDToH);
      REQUIRE(index_allowed(Domain::HartogsTriangle, pre));
      REQUIRE(bell_index(pre, BellDirection::HToDD) == BiIndex{mu, nu});
    }
}

TEST_CASE("transfer round trips on random series") {
  for (int i = 0; i < 100; ++i) {
    SeriesX s = random_taylor_series(Domain::Bidisc);
    SeriesX dd(Domain::PuncturedBidisc);
    dd.coeffs = s.coeffs;
    SeriesX back = bell_transform(bell_transform(dd, BellDirection::DDToH),
                                  BellDirection::HToDD);
    REQUIRE(back.coeffs == dd.coeffs);
  }
  for (int i = 0; i < 100; ++i) {
    SeriesX h = random_hartogs_series();
    SeriesX back = bell_transform(bell_transform(h, BellDirection::HToDD),
                                  BellDirection::DDToH);
    REQUIRE(back == h);
  }
}

TEST_CASE("transfer matches pointwise multiplication by the Jacobian") {
  for (int i = 0; i < 100; ++i) {
    SeriesX s = random_hartogs_series();
    SeriesX img = bell_transform(s, BellDirection::HToDD);
    Point2C w = random_punctured_bidisc_point();
    CxD lhs = eval(img, w);
    CxD rhs = w.z1.to_complex() * eval(s, phi(w));
    double scale = std::max(1.0, std::abs(rhs));
    REQUIRE(std::abs(lhs - rhs) <= 1e-12 * scale);
  }
}

TEST_CASE("operators are linear and commute") {
  MultiplierSeq t = MultiplierSeq::one_plus_inverse();
  for (int i = 0; i < 25; ++i) {
    SeriesX a = random_taylor_series(Domain::Bidisc);
    SeriesX b = random_taylor_series(Domain::Bidisc);
    Rat lam(3, 7);
    REQUIRE(partial_sum(a + b, 4) == partial_sum(a, 4) + partial_sum(b, 4));
    REQUIRE(partial_sum(a.scaled(lam), 4) == partial_sum(a, 4).scaled(lam));
    REQUIRE(apply_multiplier(a + b, t) == apply_multiplier(a, t) + apply_multiplier(b, t));
    REQUIRE(apply_multiplier(a.scaled(lam), t) == apply_multiplier(a, t).scaled(lam));
    REQUIRE(partial_sum(apply_multiplier(a, t), 3) ==
            apply_multiplier(partial_sum(a, 3), t));
  }
  for (int i = 0; i < 25; ++i) {
    SeriesX a = random_hartogs_series();
    SeriesX b = random_hartogs_series();
    REQUIRE(bell_transform(a + b, BellDirection::HToDD) ==
            bell_transform(a, BellDirection::HToDD) +
                bell_transform(b, BellDirection::HToDD));
  }
}

TEST_CASE("series text round trips") {
  SeriesX s = random_hartogs_series(8);
  std::string text = serialize(s);
  REQUIRE(text.rfind("domain hartogs", 0) == 0);
  SeriesX back = parse_series<ExactComplex>(text);
  REQUIRE(back == s);

  SeriesD d(Domain::Bidisc);
  d.set(0, 0, CxD{0.1, -0.25});
  d.set(3, 2, CxD{1.0 / 3.0, 7e-17});
  SeriesD dback = parse_series<CxD>(serialize(d));
  REQUIRE(dback == d);

  REQUIRE_THROWS_AS(parse_series<ExactComplex>(std::string("1 2 3 4\n")),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(parse_series<ExactComplex>(std::string("")), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_series<ExactComplex>(std::string("domain hartogs\n0 0 x y\n")),
                    std::invalid_argument);
}

TEST_CASE("cauchy products of polynomial series") {
  SeriesX p(Domain::Bidisc);
  p.set(0, 0, ExactComplex{Rat(1), Rat(0)});
  p.set(1, 0, ExactComplex{Rat(1), Rat(0)});
  SeriesX sq = convolve(p, p);
  REQUIRE(sq.find(0, 0)->re == Rat(1));
  REQUIRE(sq.find(1, 0)->re == Rat(2));
  REQUIRE(sq.find(2, 0)->re == Rat(1));
  REQUIRE(sq.coeffs.size() == 3);

  SeriesX h = monomial_series(Domain::HartogsTriangle, -1, 0);
  REQUIRE_THROWS_AS(convolve(h, h), std::invalid_argument);
}
