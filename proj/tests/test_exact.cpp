#include <catch2/catch_amalgamated.hpp>

#include "hartogs/exact.hpp"
#include "hartogs/profile.hpp"

using namespace hartogs;

TEST_CASE("rational parsing accepts fractions, integers, and decimals") {
  REQUIRE(*parse_rational("15/32") == Rat(15, 32));
  REQUIRE(*parse_rational("-3") == Rat(-3));
  REQUIRE(*parse_rational("0.25") == Rat(1, 4));
  REQUIRE(*parse_rational("1e-2") == Rat(1, 100));
  REQUIRE(*parse_rational("-2.5e1") == Rat(-25));
  REQUIRE(!parse_rational("abc").has_value());
  REQUIRE(!parse_rational("1/0").has_value());
  REQUIRE(!parse_rational("").has_value());
}

TEST_CASE("rational string round trip") {
  for (const Rat& q : {Rat(0), Rat(7, 3), Rat(-15, 32), Rat(1000000007)}) {
    REQUIRE(*parse_rational(rat_to_string(q)) == q);
  }
}

TEST_CASE("doubles convert to exact dyadic rationals") {
  for (double x : {0.0, 1.0, -0.5, 0.1, 3.25, 1e-9, -123456.789}) {
    REQUIRE(to_double(rat_from_double(x)) == x);
  }
}

TEST_CASE("integer nth roots") {
  REQUIRE(*integer_nth_root(BigInt(27), 3) == 3);
  REQUIRE(*integer_nth_root(BigInt(1) << 40, 2) == BigInt(1) << 20);
  REQUIRE(!integer_nth_root(BigInt(10), 2).has_value());
  REQUIRE(*integer_nth_root(BigInt(1), 7) == 1);
  REQUIRE(*integer_nth_root(BigInt(0), 5) == 0);
}

TEST_CASE("rational powers with rational exponents") {
  REQUIRE(*rational_pow(Rat(1, 4), Rat(3, 2)) == Rat(1, 8));
  REQUIRE(*rational_pow(Rat(9), Rat(1, 2)) == Rat(3));
  REQUIRE(*rational_pow(Rat(2), Rat(3)) == Rat(8));
  REQUIRE(*rational_pow(Rat(1, 2), Rat(-2)) == Rat(4));
  REQUIRE(!rational_pow(Rat(2), Rat(1, 2)).has_value());
  REQUIRE(*rational_pow(Rat(0), Rat(5, 2)) == Rat(0));
}

TEST_CASE("gaussian rational arithmetic") {
  ExactComplex i{Rat(0), Rat(1)};
  ExactComplex one{Rat(1), Rat(0)};
  REQUIRE(i * i == ExactComplex{Rat(-1), Rat(0)});
  ExactComplex z{Rat(3, 2), Rat(-2)};
  REQUIRE(z * z.conj() == ExactComplex{z.abs_sq(), Rat(0)});
  REQUIRE(z / z == one);
  REQUIRE((z + z.conj()).im == 0);
  REQUIRE(z.abs_sq() == Rat(9, 4) + Rat(4));
}

TEST_CASE("pi-multiple values track the power of pi") {
  PiValue a = PiValue::real(Rat(1, 2), 2);   // pi^2/2
  PiValue b = PiValue::real(Rat(2), 2);      // 2 pi^2
  REQUIRE((a + b).coeff.re == Rat(5, 2));
  REQUIRE((a * b).pi_pow == 4);
  REQUIRE((a * b).coeff.re == Rat(1));
  REQUIRE((b / a).pi_pow == 0);
  REQUIRE((b / a).coeff.re == Rat(4));
  REQUIRE_THROWS_AS(a + PiValue::real(Rat(1), 3), std::logic_error);
  PiValue zero = PiValue::real(Rat(0), 0);
  REQUIRE((a + zero).coeff.re == a.coeff.re);
  REQUIRE(to_string(a) == "1/2*pi^2");
  REQUIRE(std::abs(b.real() - 2 * 9.869604401089358) < 1e-12);
}

TEST_CASE("exact power integrals on subintervals of [0,1]") {
  REQUIRE(exact_power_integral(Rat(3), Rat(0), Rat(1)) == Rat(1, 4));
  REQUIRE(exact_power_integral(Rat(0), Rat(1, 2), Rat(1)) == Rat(1, 2));
  REQUIRE(exact_power_integral(Rat(-1, 2), Rat(0), Rat(1)) == Rat(2));
  REQUIRE(exact_power_integral(Rat(1, 2), Rat(1, 4), Rat(1)) == Rat(7, 12));
  REQUIRE_THROWS_AS(exact_power_integral(Rat(-1), Rat(0), Rat(1)), DivergentIntegral);
  REQUIRE_THROWS_AS(exact_power_integral(Rat(-3), Rat(0), Rat(1)), DivergentIntegral);
  REQUIRE_THROWS_AS(exact_power_integral(Rat(-1), Rat(1, 2), Rat(1)), ExactUnsupported);
  REQUIRE_THROWS_AS(exact_power_integral(Rat(1, 2), Rat(1, 3), Rat(1)), ExactUnsupported);
}

TEST_CASE("divergent integral error carries the exponent") {
  try {
    exact_power_integral(Rat(-7, 2), Rat(0), Rat(1));
    FAIL("expected divergence");
  } catch (const DivergentIntegral& e) {
    REQUIRE(e.exponent == -3.5);
  }
}

TEST_CASE("piecewise polynomial cutoffs evaluate pointwise") {
  auto chi = PiecewisePoly::step();
  REQUIRE(chi(0.3) == 0.0);
  REQUIRE(chi(0.7) == 1.0);
  REQUIRE(chi.vanishes_near_zero());

  auto ramp = PiecewisePoly::smoothstep();
  REQUIRE(ramp(0.1) == 0.0);
  REQUIRE(ramp(0.9) == 1.0);
  REQUIRE(ramp(0.375) == Catch::Approx(0.5));
  // monotone on the ramp interval
  double prev = -1;
  for (int i = 0; i <= 100; ++i) {
    double v = ramp(0.25 + 0.25 * i / 100.0);
    REQUIRE(v >= prev - 1e-15);
    prev = v;
  }

  auto one = PiecewisePoly::one();
  REQUIRE(one(0.0) == 1.0);
  REQUIRE(one(1.0) == 1.0);
  REQUIRE(!one.vanishes_near_zero());
}

TEST_CASE("cutoff integrals against powers are exact") {
  REQUIRE(PiecewisePoly::one().integrate_against_power(Rat(1)) == Rat(1, 2));
  REQUIRE(PiecewisePoly::step().integrate_against_power(Rat(3)) == Rat(15, 64));
  REQUIRE(PiecewisePoly::smoothstep().integrate_against_power(Rat(0)) == Rat(5, 8));
  // supported away from r=0 even for negative powers
  REQUIRE(PiecewisePoly::step().integrate_against_power(Rat(-2)) == Rat(1));
  // ...but a logarithmic antiderivative leaves the rationals
  REQUIRE_THROWS_AS(PiecewisePoly::step().integrate_against_power(Rat(-1)),
                    ExactUnsupported);
  REQUIRE_THROWS_AS(PiecewisePoly::one().integrate_against_power(Rat(-1)),
                    DivergentIntegral);
}

TEST_CASE("cutoff products and powers") {
  auto chi = PiecewisePoly::step();
  auto sq = chi * chi;
  REQUIRE(sq.integrate_against_power(Rat(0)) == chi.integrate_against_power(Rat(0)));
  auto ramp = PiecewisePoly::smoothstep();
  auto r4 = ramp.pow_int(4);
  double x = 0.3721;
  REQUIRE(r4(x) == Catch::Approx(std::pow(ramp(x), 4.0)));
  auto mixed = ramp * chi;
  REQUIRE(mixed(0.4) == 0.0);
  REQUIRE(mixed(0.8) == Catch::Approx(1.0));
}
