#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "hartogs/bergman.hpp"

using namespace hartogs;

namespace {

MonomialTerm atom(Rat a, Rat b, int k, int l, ExactComplex c = ExactComplex{1},
                  std::optional<PiecewisePoly> chi = std::nullopt) {
  MonomialTerm t;
  t.a = std::move(a);
  t.b = std::move(b);
  t.k = k;
  t.l = l;
  t.coeff = std::move(c);
  t.profile = std::move(chi);
  return t;
}

MonomialSum single(MonomialTerm t) { return MonomialSum{std::move(t)}; }

const QuadratureSpec kSpec{};
constexpr double kTol = 1e-8;

// random polynomial on the bidisc with rational complex coefficients
SeriesX random_polynomial(std::mt19937_64& rng, int degree, int nterms) {
  std::uniform_int_distribution<int> exp(0, degree), num(-6, 6), den(1, 4);
  SeriesX f(Domain::Bidisc);
  for (int t = 0; t < nterms; ++t)
    f.set(exp(rng), exp(rng), ExactComplex{Rat(num(rng), den(rng)), Rat(num(rng), den(rng))});
  return f;
}

MonomialSum random_source(std::mt19937_64& rng, Domain d) {
  std::uniform_int_distribution<int> ea(0, 3), eb(0, 2), fk(-2, 3), fl(0, 2);
  std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
  MonomialSum f;
  for (int t = 0; t < 6; ++t) {
    bool dim1 = dimension(d) == 1;
    f.terms.push_back(atom(ea(rng), dim1 ? 0 : eb(rng), fk(rng), dim1 ? 0 : fl(rng),
                           ExactComplex{Rat(num(rng), den(rng)), Rat(num(rng), den(rng))}));
  }
  return f;
}

}  // namespace

TEST_CASE("closed-form basis norms") {
  CHECK(monomial_norm_sq(Domain::HartogsTriangle, {-1, 0}) == PiValue::real(Rat(1), 2));
  CHECK(monomial_norm_sq(Domain::HartogsTriangle, {0, 0}) == PiValue::real(Rat(1, 2), 2));
  CHECK(monomial_norm_sq(Domain::HartogsTriangle, {2, 1}) == PiValue::real(Rat(1, 10), 2));
  CHECK(monomial_norm_sq(Domain::HartogsTriangle, {-3, 4}) == PiValue::real(Rat(1, 15), 2));
  CHECK_THROWS_AS(monomial_norm_sq(Domain::HartogsTriangle, {-2, 0}), NonIntegrableIndex);
  CHECK_THROWS_AS(monomial_norm_sq(Domain::HartogsTriangle, {0, -1}), NonIntegrableIndex);

  CHECK(monomial_norm_sq(Domain::Disc, {0, 0}) == PiValue::real(Rat(1), 1));
  CHECK(monomial_norm_sq(Domain::Disc, {4, 0}) == PiValue::real(Rat(1, 5), 1));
  CHECK(monomial_norm_sq(Domain::PuncturedDisc, {4, 0}) == PiValue::real(Rat(1, 5), 1));
  CHECK_THROWS_AS(monomial_norm_sq(Domain::Disc, {-1, 0}), NonIntegrableIndex);
  // the puncture has measure zero: negative powers stay non-integrable
  CHECK_THROWS_AS(monomial_norm_sq(Domain::PuncturedDisc, {-1, 0}), NonIntegrableIndex);

  CHECK(monomial_norm_sq(Domain::Bidisc, {2, 3}) == PiValue::real(Rat(1, 12), 2));
  CHECK(monomial_norm_sq(Domain::PuncturedBidisc, {2, 3}) == PiValue::real(Rat(1, 12), 2));
  CHECK_THROWS_AS(monomial_norm_sq(Domain::PuncturedBidisc, {-1, 3}), NonIntegrableIndex);
}

TEST_CASE("basis norms agree with the exact inner product") {
  for (int n = 0; n <= 5; ++n)
    for (int m = -(n + 1); m <= 5; ++m) {
      SeriesX e = monomial_series(Domain::HartogsTriangle, m, n);
      CHECK(monomial_norm_sq(Domain::HartogsTriangle, {m, n}) ==
            inner_product_exact(e, e, Domain::HartogsTriangle));
    }
  for (int m = 0; m <= 6; ++m) {
    SeriesX e = monomial_series(Domain::Disc, m, 0);
    CHECK(monomial_norm_sq(Domain::Disc, {m, 0}) == inner_product_exact(e, e, Domain::Disc));
  }
  BasisElement b = basis_element(Domain::HartogsTriangle, {-1, 0});
  CHECK(b.index.m == -1);
  CHECK(b.norm_sq == PiValue::real(Rat(1), 2));
}

TEST_CASE("kernel at the center and tensor structure") {
  Point2C z0 = Point2C::line(Polar(0.0, 0.0));
  CHECK(kernel(Domain::Disc, z0, z0).real() == Catch::Approx(1.0 / kPi).epsilon(1e-14));

  Point2C z = Point2C::line(Polar(0.3, 0.7)), w = Point2C::line(Polar(0.4, -0.2));
  CxD kd = kernel(Domain::Disc, z, w);
  CHECK(std::abs(kernel(Domain::PuncturedDisc, z, w) - kd) < 1e-15);

  Point2C z2{Polar(0.3, 0.7), Polar(0.5, 1.1)}, w2{Polar(0.4, -0.2), Polar(0.2, 0.4)};
  CxD kb = kernel(Domain::Bidisc, z2, w2);
  CHECK(std::abs(kb - kernel(Domain::Disc, z, w) *
                          kernel(Domain::Disc, Point2C::line(Polar(0.5, 1.1)),
                                 Point2C::line(Polar(0.2, 0.4)))) < 1e-14);
  CHECK(std::abs(kernel(Domain::PuncturedBidisc, z2, w2) - kb) < 1e-15);

  // Hermitian symmetry carries through the change of variables
  Point2C zh{Polar(0.5, 0.4), Polar(0.05, -0.9)}, wh{Polar(0.55, -1.2), Polar(0.06, 0.3)};
  CHECK(std::abs(kernel(Domain::HartogsTriangle, zh, wh) -
                 std::conj(kernel(Domain::HartogsTriangle, wh, zh))) < 1e-12);
}

TEST_CASE("kernel domain and singularity errors") {
  Point2C origin = Point2C::line(Polar(0.0, 0.0));
  Point2C inside = Point2C::line(Polar(0.3, 0.0));
  CHECK_THROWS_AS(kernel(Domain::PuncturedDisc, origin, inside), SingularEvaluation);
  Point2C axis{Polar(0.0, 0.0), Polar(0.0, 0.0)};
  CHECK_THROWS_AS(kernel(Domain::HartogsTriangle, axis, axis), SingularEvaluation);
  Point2C outside{Polar(0.5, 0.0), Polar(0.7, 0.0)};  // |z2| > |z1|
  Point2C ok{Polar(0.5, 0.0), Polar(0.2, 0.0)};
  CHECK_THROWS_AS(kernel(Domain::HartogsTriangle, outside, ok), std::invalid_argument);
  CHECK_THROWS_AS(kernel(Domain::Disc, Point2C::line(Polar(1.5, 0.0)), inside),
                  std::invalid_argument);
  CHECK_THROWS_AS(kernel(Domain::Bidisc, inside, inside), std::invalid_argument);
}

TEST_CASE("kernel on the triangle matches the basis expansion") {
  Point2C z{Polar(0.5, 0.4), Polar(0.05, -0.9)}, w{Polar(0.55, -1.2), Polar(0.06, 0.3)};
  CxD sum{};
  for (int n = 0; n <= 26; ++n)
    for (int m = -(n + 1); m <= 26; ++m) {
      SeriesX e = monomial_series(Domain::HartogsTriangle, m, n);
      CxD term = eval(e, z) * std::conj(eval(e, w));
      sum += term / monomial_norm_sq(Domain::HartogsTriangle, {m, n}).to_complex();
    }
  CxD direct = kernel(Domain::HartogsTriangle, z, w);
  CHECK(std::abs(sum - direct) < 1e-6 * std::abs(direct));
}

TEST_CASE("kernel reproduces functions in the space") {
  QuadratureSpec light;
  light.radial_order = 8;
  light.angular_order = 20;
  light.grading_levels = 5;
  light.refinement_cap = 12;
  light.secondary_levels = 2;

  MonomialSum f_sing = single(atom(-1, 0, -1, 0));             // z1^{-1}
  MonomialSum f_poly = single(atom(1, 1, 1, 1));               // z1 z2
  const Point2C pts[] = {{Polar(0.15, 0.00), Polar(0.020, 0.9)},
                         {Polar(0.12, 1.30), Polar(0.015, -0.4)},
                         {Polar(0.14, -2.1), Polar(0.020, 2.2)},
                         {Polar(0.10, 0.70), Polar(0.012, -1.7)},
                         {Polar(0.13, 2.80), Polar(0.018, 0.2)}};
  for (const auto& z : pts) {
    for (const auto& f : {f_sing, f_poly}) {
      auto integrand = [&](const Point2C& w) {
        return kernel(Domain::HartogsTriangle, z, w) * eval(f, w);
      };
      IntegrationResult r = integrate_numeric(integrand, Domain::HartogsTriangle,
                                              WeightSpec::one(), light, 5e-6);
      REQUIRE(r.verdict == Verdict::Converged);
      CHECK(std::abs(r.value - eval(f, z)) < 5e-5);
    }
  }
}

TEST_CASE("projection fixes holomorphic series") {
  SeriesX f(Domain::HartogsTriangle);
  f.set(1, 1, ExactComplex{1});
  f.set(-1, 0, ExactComplex{Rat(2), Rat(3, 7)});
  f.set(0, 2, ExactComplex{Rat(-5, 3)});
  SeriesX p = project(f, Domain::HartogsTriangle);
  CHECK(p.domain == Domain::HartogsTriangle);
  CHECK(p.coeffs == f.coeffs);
}

TEST_CASE("projection of the cutoff anti-holomorphic source") {
  // chi(|z1|) * conj(z1) projects onto the single monomial z1^{-1}
  MonomialSum f = single(atom(1, 0, -1, 0, ExactComplex{1}, PiecewisePoly::step()));
  SeriesX p = project(f, Domain::HartogsTriangle);
  REQUIRE(p.coeffs.size() == 1);
  const ExactComplex* c = p.find(-1, 0);
  REQUIRE(c != nullptr);
  CHECK(*c == ExactComplex{Rat(15, 32)});

  // chi == 1 gives the full-mass constant 1/2
  SeriesX p1 = project(single(atom(1, 0, -1, 0)), Domain::HartogsTriangle);
  REQUIRE(p1.coeffs.size() == 1);
  CHECK(*p1.find(-1, 0) == ExactComplex{Rat(1, 2)});

  // the smooth ramp keeps the structure; only the constant changes
  MonomialSum fs = single(atom(1, 0, -1, 0, ExactComplex{1}, PiecewisePoly::smoothstep()));
  SeriesX ps = project(fs, Domain::HartogsTriangle);
  REQUIRE(ps.coeffs.size() == 1);
  CHECK(*ps.find(-1, 0) == ExactComplex{Rat(8759, 17920)});
}

TEST_CASE("projection drops frequencies without a basis element") {
  MonomialSum f;
  f.terms.push_back(atom(2, 0, -2, 0));   // would need z1^{-2}
  f.terms.push_back(atom(0, 1, 0, -1));   // negative second frequency
  CHECK(project(f, Domain::HartogsTriangle).coeffs.empty());
  CHECK(project(single(atom(1, 0, -1, 0)), Domain::Bidisc).coeffs.empty());
  // on the disc the same source keeps nothing either
  CHECK(project(single(atom(1, 0, -1, 0)), Domain::Disc).coeffs.empty());
}

TEST_CASE("divergent pairings surface as errors") {
  // |z1|^{-4} pairs with the constant into a divergent radial integral
  CHECK_THROWS_AS(project(single(atom(-4, 0, 0, 0)), Domain::HartogsTriangle),
                  DivergentIntegral);
}

TEST_CASE("projection spec validation") {
  ProjectionSpec bad;
  bad.m_min = -20;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  ProjectionSpec empty;
  empty.m_max = -18;
  CHECK_THROWS_AS(empty.validate(), std::invalid_argument);
  ProjectionSpec negn;
  negn.n_max = -1;
  CHECK_THROWS_AS(negn.validate(), std::invalid_argument);
  CHECK_NOTHROW(ProjectionSpec{}.validate());
}

TEST_CASE("numeric projection recovers exact coefficients") {
  ProjectionSpec spec;
  spec.m_min = -3;
  spec.m_max = 3;
  spec.n_max = 3;
  spec.backend = ProjectionSpec::Backend::Numeric;
  spec.quad.radial_order = 10;
  spec.quad.grading_levels = 12;
  spec.quad.secondary_levels = 5;

  MonomialSum f = single(atom(1, 0, -1, 0, ExactComplex{1}, PiecewisePoly::step()));
  f.terms.push_back(atom(1, 1, 1, 1, ExactComplex{Rat(1, 4)}));
  auto fn = [&](const Point2C& z) { return eval(f, z); };
  SeriesD p = project(fn, Domain::HartogsTriangle, spec);

  const CxD* c = p.find(-1, 0);
  REQUIRE(c != nullptr);
  CHECK(std::abs(*c - CxD(15.0 / 32.0, 0.0)) < 1e-9);
  const CxD* c11 = p.find(1, 1);
  REQUIRE(c11 != nullptr);
  CHECK(std::abs(*c11 - CxD(0.25, 0.0)) < 1e-9);
  for (const auto& [idx, v] : p.coeffs) {
    if ((idx.m == -1 && idx.n == 0) || (idx.m == 1 && idx.n == 1)) continue;
    CHECK(std::abs(v) < 1e-9);
  }
}

TEST_CASE("numeric projection on the disc") {
  ProjectionSpec spec;
  spec.m_min = 0;
  spec.m_max = 4;
  spec.n_max = 0;
  auto fn = [](const Point2C& z) { return CxD(z.z1.r * z.z1.r, 0.0); };  // |z|^2
  SeriesD p = project(fn, Domain::Disc, spec);
  const CxD* c0 = p.find(0, 0);
  REQUIRE(c0 != nullptr);
  CHECK(std::abs(*c0 - CxD(0.5, 0.0)) < 1e-12);
  for (const auto& [idx, v] : p.coeffs)
    if (idx.m != 0) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("numeric projection is idempotent") {
  ProjectionSpec spec;
  spec.m_min = -3;
  spec.m_max = 3;
  spec.n_max = 3;
  spec.quad.grading_levels = 20;  // negative powers leave an O(4^-levels) radial tail
  auto fn = [](const Point2C& z) {
    CxD z1 = z.z1.to_complex(), z2 = z.z2.to_complex();
    return std::exp(0.2 * (z1 * z2).real()) + 0.5 * std::conj(z1) + z1 * z1 * z2;
  };
  SeriesD p1 = project(fn, Domain::HartogsTriangle, spec);
  auto fn2 = [&](const Point2C& z) { return eval(p1, z); };
  SeriesD p2 = project(fn2, Domain::HartogsTriangle, spec);

  for (const auto& [idx, v] : p1.coeffs) {
    const CxD* u = p2.find(idx.m, idx.n);
    double other = u ? std::abs(*u - v) : std::abs(v);
    CHECK(other < 1e-10);
  }
  for (const auto& [idx, v] : p2.coeffs)
    if (!p1.find(idx.m, idx.n)) CHECK(std::abs(v) < 1e-10);
}

TEST_CASE("projection is self-adjoint") {
  std::mt19937_64 rng(555019);
  for (int trial = 0; trial < 20; ++trial) {
    MonomialSum f = random_source(rng, Domain::HartogsTriangle);
    MonomialSum g = random_source(rng, Domain::HartogsTriangle);
    MonomialSum pf = MonomialSum::from_series(project(f, Domain::HartogsTriangle));
    MonomialSum pg = MonomialSum::from_series(project(g, Domain::HartogsTriangle));
    PiValue lhs = inner_product_exact(pf, g, Domain::HartogsTriangle);
    PiValue rhs = inner_product_exact(f, pg, Domain::HartogsTriangle);
    CHECK(lhs == rhs);
    // and the projection absorbs into either slot
    CHECK(inner_product_exact(pf, pg, Domain::HartogsTriangle) == lhs);
  }
}

TEST_CASE("projection contracts the L2 norm") {
  std::mt19937_64 rng(90125);
  for (int trial = 0; trial < 12; ++trial) {
    MonomialSum f = random_source(rng, Domain::HartogsTriangle);
    SeriesX pf = project(f, Domain::HartogsTriangle);
    double nf =
        lp_norm(f, Rat(2), Domain::HartogsTriangle, WeightSpec::one(), kSpec, kTol).value.real();
    double npf =
        lp_norm(pf, Rat(2), Domain::HartogsTriangle, WeightSpec::one(), kSpec, kTol).value.real();
    CHECK(npf <= nf + 1e-10);
  }
}

TEST_CASE("pairing ratios on the punctured disc are exact") {
  for (int mu = 0; mu <= 64; ++mu)
    for (int m = 0; m <= 64; ++m) {
      Rat want = mu == m ? Rat(mu + 1, mu + 2) : Rat(0);
      CHECK(projection_ratio(mu, m) == want);
    }
}

TEST_CASE("right inverse on simple inputs") {
  SeriesX one(Domain::Bidisc);
  one.set(0, 0, ExactComplex{1});
  MonomialSum u1 = right_inverse_U(one);
  REQUIRE(u1.terms.size() == 1);
  CHECK(u1.terms[0].a == Rat(2));
  CHECK(u1.terms[0].k == 0);
  CHECK(u1.terms[0].coeff == ExactComplex{Rat(2)});
  Point2C w{Polar(0.5, 1.0), Polar(0.3, -0.4)};
  CHECK(std::abs(eval(u1, w) - CxD(0.5, 0.0)) < 1e-15);  // 2|w1|^2 = 0.5

  SeriesX f(Domain::Bidisc);
  f.set(1, 1, ExactComplex{1});
  MonomialSum uf = right_inverse_U(f);
  REQUIRE(uf.terms.size() == 1);
  CHECK(uf.terms[0].a == Rat(3));
  CHECK(uf.terms[0].b == Rat(1));
  CHECK(uf.terms[0].k == 1);
  CHECK(uf.terms[0].l == 1);
  CHECK(uf.terms[0].coeff == ExactComplex{Rat(3, 2)});
  CxD w1 = w.z1.to_complex(), w2 = w.z2.to_complex();
  CHECK(std::abs(eval(uf, w) - 1.5 * 0.25 * w1 * w2) < 1e-15);

  CHECK(right_inverse_U(SeriesX(Domain::Bidisc)).terms.empty());
  CHECK_THROWS_AS(right_inverse_U(SeriesX(Domain::HartogsTriangle)), std::invalid_argument);
}

TEST_CASE("projection undoes the right inverse exactly") {
  std::mt19937_64 rng(77001);
  for (int trial = 0; trial < 10; ++trial) {
    SeriesX f = random_polynomial(rng, 5, 7);
    MonomialSum uf = right_inverse_U(f);
    SeriesX back = project(uf, Domain::PuncturedBidisc);
    CHECK(back.coeffs == f.coeffs);
  }
  // degree-20 coefficients stay exact as well
  SeriesX high(Domain::Bidisc);
  high.set(20, 20, ExactComplex{Rat(1, 3)});
  SeriesX back = project(right_inverse_U(high), Domain::PuncturedBidisc);
  REQUIRE(back.coeffs.size() == 1);
  CHECK(*back.find(20, 20) == ExactComplex{Rat(1, 3)});
}

TEST_CASE("transfer operator intertwines the projections") {
  MonomialSum f;
  f.terms.push_back(atom(1, 0, -1, 0, ExactComplex{1}, PiecewisePoly::step()));
  f.terms.push_back(atom(1, 3, 1, 1, ExactComplex{Rat(0), Rat(3, 4)}));
  f.terms.push_back(atom(2, 1, 2, -1, ExactComplex{Rat(1, 2)}));
  f.terms.push_back(atom(Rat(1, 2), 0, 0, 0, ExactComplex{Rat(-2, 5)}));

  SeriesX lhs = project(bell_transform(f, BellDirection::HToDD), Domain::PuncturedBidisc);
  SeriesX rhs = bell_transform(project(f, Domain::HartogsTriangle), BellDirection::HToDD);
  CHECK(lhs.domain == rhs.domain);
  CHECK(lhs.coeffs == rhs.coeffs);

  std::mt19937_64 rng(31400);
  for (int trial = 0; trial < 8; ++trial) {
    MonomialSum g = random_source(rng, Domain::HartogsTriangle);
    SeriesX a = project(bell_transform(g, BellDirection::HToDD), Domain::PuncturedBidisc);
    SeriesX b = bell_transform(project(g, Domain::HartogsTriangle), BellDirection::HToDD);
    CHECK(a.coeffs == b.coeffs);
  }
}
