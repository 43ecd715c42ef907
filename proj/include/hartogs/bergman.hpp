#pragma once

// Square-integrable monomial bases, Bergman kernels, the orthogonal projection
// on each model domain, and the right inverse built from the index shift.
//
// The projection is computed by basis expansion: a term with angular
// frequencies (k, l) pairs against exactly one candidate monomial z1^k z2^l,
// so symbolic projections are exact and complete — every omitted coefficient
// vanishes by frequency matching. Kernel evaluation exists for cross-checks.

#include <map>
#include <utility>

#include "hartogs/quadrature.hpp"

namespace hartogs {

// --- orthogonal basis ----------------------------------------------------------

// ||z1^m z2^n||^2 in L^2(domain). Throws NonIntegrableIndex when the monomial
// is not square-integrable (which on the punctured domains removes the
// negative powers: the L^2 condition erases the puncture).
inline PiValue monomial_norm_sq(Domain d, BiIndex idx) {
  bool allowed = index_allowed(d, idx);
  switch (d) {
    case Domain::Disc:
    case Domain::PuncturedDisc:
      if (!allowed || idx.m < 0)
        throw NonIntegrableIndex("monomial is not square-integrable on " + domain_tag(d));
      return PiValue::real(Rat(1, idx.m + 1), 1);
    case Domain::Bidisc:
    case Domain::PuncturedBidisc:
      if (!allowed || idx.m < 0)
        throw NonIntegrableIndex("monomial is not square-integrable on " + domain_tag(d));
      return PiValue::real(Rat(1, idx.m + 1) * Rat(1, idx.n + 1), 2);
    case Domain::HartogsTriangle:
      if (!allowed)
        throw NonIntegrableIndex("monomial is not square-integrable on " + domain_tag(d));
      return PiValue::real(Rat(1, idx.n + 1) * Rat(1, idx.m + idx.n + 2), 2);
  }
  throw std::logic_error("unknown domain");
}

struct BasisElement {
  BiIndex index;
  PiValue norm_sq;
};

inline BasisElement basis_element(Domain d, BiIndex idx) {
  return {idx, monomial_norm_sq(d, idx)};
}

// --- kernels -------------------------------------------------------------------

namespace detail {

inline CxD disc_kernel(CxD z, CxD w) {
  CxD g = 1.0 - z * std::conj(w);
  return 1.0 / (kPi * g * g);
}

inline void require_interior(Domain d, const Point2C& z) {
  if (z.dim != dimension(d))
    throw std::invalid_argument("kernel: point dimension does not match domain");
  if (z.z1.r == 0.0 && (d == Domain::PuncturedDisc || d == Domain::PuncturedBidisc ||
                        d == Domain::HartogsTriangle))
    throw SingularEvaluation("kernel: z1 = 0");
  if (!contains(d, z)) throw std::invalid_argument("kernel: point not inside the domain");
}

}  // namespace detail

// Evaluates the reproducing kernel of A^2(domain) at (z, w).
inline CxD kernel(Domain d, const Point2C& z, const Point2C& w) {
  detail::require_interior(d, z);
  detail::require_interior(d, w);
  switch (d) {
    case Domain::Disc:
    case Domain::PuncturedDisc:  // the puncture is removable in A^2
      return detail::disc_kernel(z.z1.to_complex(), w.z1.to_complex());
    case Domain::Bidisc:
    case Domain::PuncturedBidisc:
      return detail::disc_kernel(z.z1.to_complex(), w.z1.to_complex()) *
             detail::disc_kernel(z.z2.to_complex(), w.z2.to_complex());
    case Domain::HartogsTriangle: {
      // transport the bidisc kernel along (z1, z2) = (w1, w1 w2)
      Point2C zu = phi_inverse(z), wu = phi_inverse(w);
      CxD scale = z.z1.to_complex() * std::conj(w.z1.to_complex());
      return detail::disc_kernel(zu.z1.to_complex(), wu.z1.to_complex()) *
             detail::disc_kernel(zu.z2.to_complex(), wu.z2.to_complex()) / scale;
    }
  }
  throw std::logic_error("unknown domain");
}

// --- projection ----------------------------------------------------------------

struct ProjectionSpec {
  int m_min = -17;
  int m_max = 16;
  int n_max = 16;
  enum class Backend { Exact, Numeric } backend = Backend::Exact;
  QuadratureSpec quad{};
  double tol = 1e-8;

  void validate() const {
    if (m_max < m_min || n_max < 0)
      throw std::invalid_argument("projection box is empty");
    if (m_min < -(n_max + 1))
      throw std::invalid_argument("projection box violates the index constraint");
    quad.validate();
  }
};

inline SeriesD project(const std::function<CxD(const Point2C&)>& f, Domain d,
                       const ProjectionSpec& spec);

// Exact projection of a symbolic integrand. The returned series is complete:
// a term with frequencies (k, l) can pair only with the monomial z1^k z2^l,
// so indices outside the result carry coefficient exactly zero.
inline SeriesX project(const MonomialSum& f, Domain d, const ProjectionSpec& spec = {}) {
  spec.validate();
  std::map<std::pair<int, int>, std::vector<const MonomialTerm*>> groups;
  for (const auto& t : f.terms) {
    if (dimension(d) == 1 && (t.b != 0 || t.l != 0))
      throw std::invalid_argument("dimension-1 domain with second-variable content");
    groups[{t.k, t.l}].push_back(&t);
  }
  SeriesX out(d);
  for (const auto& [freq, terms] : groups) {
    BiIndex idx{freq.first, freq.second};
    PiValue ns;
    try {
      ns = monomial_norm_sq(d, idx);
    } catch (const NonIntegrableIndex&) {
      continue;  // no basis element at this frequency
    }
    PiValue acc = PiValue::zero(dimension(d));
    for (const MonomialTerm* t : terms) {
      MonomialTerm g = *t;  // pair against conj(z1^m z2^n)
      g.a = g.a + idx.m;
      g.b = g.b + idx.n;
      g.k = 0;
      g.l = 0;
      acc = acc + integrate_exact(MonomialSum(std::move(g)), d);
    }
    PiValue c = acc / ns;
    if (c.pi_pow != 0 && !c.is_zero())
      throw std::logic_error("projection coefficient is not a plain rational");
    out.set(idx.m, idx.n, c.coeff);
  }
  return out;
}

inline SeriesX project(const SeriesX& f, Domain d, const ProjectionSpec& spec = {}) {
  return project(MonomialSum::from_series(f), d, spec);
}

namespace detail {

// Numeric projection backend: partial angular transforms on the tensor grid,
// then a radial contraction per box index.
inline SeriesD project_numeric(const std::function<CxD(const Point2C&)>& f, Domain d,
                               const ProjectionSpec& spec) {
  spec.validate();
  const int order = spec.quad.radial_order;
  const GaussRule& rg = gauss_rule(order);
  const int levels = spec.quad.grading_levels;
  const bool dim2 = dimension(d) == 2;
  const bool hartogs = d == Domain::HartogsTriangle;

  int span = std::max({std::abs(spec.m_min), std::abs(spec.m_max), spec.n_max});
  int A = 2 * (span + 2);
  A += A % 2;

  double dth = kTwoPi / A;
  std::vector<double> theta(A);
  for (int i = 0; i < A; ++i) theta[i] = dth * i;
  std::vector<CxD> em((spec.m_max - spec.m_min + 1) * A);  // e^{-i m theta_i}
  auto em_at = [&](int m, int i) -> CxD& { return em[(m - spec.m_min) * A + i]; };
  for (int m = spec.m_min; m <= spec.m_max; ++m)
    for (int i = 0; i < A; ++i) em_at(m, i) = std::polar(1.0, -m * theta[i]);
  std::vector<CxD> en(dim2 ? (spec.n_max + 1) * A : 0);
  auto en_at = [&](int n, int i) -> CxD& { return en[n * A + i]; };
  if (dim2)
    for (int n = 0; n <= spec.n_max; ++n)
      for (int i = 0; i < A; ++i) en_at(n, i) = std::polar(1.0, -n * theta[i]);

  const int mcount = spec.m_max - spec.m_min + 1;
  const int ncount = dim2 ? spec.n_max + 1 : 1;
  std::vector<CxD> accum(mcount * ncount);

  SecondaryNodes sec = dim2 ? secondary_nodes(spec.quad.secondary_levels, order)
                            : SecondaryNodes{{1.0}, {1.0}};

  std::vector<CxD> samples(A * A), row(A * ncount), coef(mcount * ncount);
  std::vector<CxD> line(A);
  for (int j = 0; j < levels; ++j) {
    double lo = std::ldexp(1.0, -j - 1), hi = std::ldexp(1.0, -j);
    double mid = 0.5 * (lo + hi), halfw = 0.5 * (hi - lo);
    for (int i = 0; i < order; ++i) {
      double r1 = mid + halfw * rg.x[i];
      double w1 = halfw * rg.w[i];
      if (!dim2) {
        bool live = false;
        for (int i1 = 0; i1 < A; ++i1) {
          line[i1] = f(Point2C::line(Polar(r1, theta[i1])));
          live = live || line[i1] != CxD{};
        }
        if (!live) continue;
        for (int m = spec.m_min; m <= spec.m_max; ++m) {
          CxD s{};
          for (int i1 = 0; i1 < A; ++i1) s += line[i1] * em_at(m, i1);
          accum[m - spec.m_min] += w1 * r1 * std::pow(r1, m) * dth * s;
        }
        continue;
      }
      for (size_t si = 0; si < sec.x.size(); ++si) {
        double v2 = sec.x[si];
        double r2 = hartogs ? r1 * v2 : v2;
        double jac = w1 * sec.w[si] * v2 * (hartogs ? r1 * r1 * r1 : r1);
        bool live = false;
        for (int i1 = 0; i1 < A; ++i1)
          for (int i2 = 0; i2 < A; ++i2) {
            CxD v = f({Polar(r1, theta[i1]), Polar(r2, theta[i2])});
            samples[i1 * A + i2] = v;
            live = live || v != CxD{};
          }
        if (!live) continue;
        for (int i1 = 0; i1 < A; ++i1)
          for (int n = 0; n < ncount; ++n) {
            CxD s{};
            for (int i2 = 0; i2 < A; ++i2) s += samples[i1 * A + i2] * en_at(n, i2);
            row[i1 * ncount + n] = s;
          }
        for (int m = spec.m_min; m <= spec.m_max; ++m)
          for (int n = 0; n < ncount; ++n) {
            CxD s{};
            for (int i1 = 0; i1 < A; ++i1) s += row[i1 * ncount + n] * em_at(m, i1);
            coef[(m - spec.m_min) * ncount + n] = s * (dth * dth);
          }
        // conj(z1^m z2^n) radial factor; on the Hartogs triangle r2 = r1 s
        for (int m = spec.m_min; m <= spec.m_max; ++m) {
          for (int n = 0; n < ncount; ++n) {
            double radial = hartogs ? std::pow(r1, double(m + n)) * std::pow(v2, double(n))
                                    : std::pow(r1, double(m)) * std::pow(r2, double(n));
            accum[(m - spec.m_min) * ncount + n] +=
                jac * radial * coef[(m - spec.m_min) * ncount + n];
          }
        }
      }
    }
  }

  SeriesD out(d);
  for (int m = spec.m_min; m <= spec.m_max; ++m)
    for (int n = 0; n < ncount; ++n) {
      BiIndex idx{m, n};
      PiValue ns;
      try {
        ns = monomial_norm_sq(d, idx);
      } catch (const NonIntegrableIndex&) {
        continue;
      }
      CxD c = accum[(m - spec.m_min) * ncount + n] / ns.real();
      if (std::abs(c) > spec.tol * 1e-3) out.set(m, n, c);
    }
  return out;
}

}  // namespace detail

inline SeriesD project(const std::function<CxD(const Point2C&)>& f, Domain d,
                       const ProjectionSpec& spec) {
  return detail::project_numeric(f, d, spec);
}

// --- right inverse ---------------------------------------------------------------

// Uf = delta1^2 * Tf for a polynomial f on the bidisc: each coefficient picks
// up the factor (mu+2)/(mu+1) and the radial weight |w1|^2. The result lives
// on the punctured bidisc and projects back to f exactly.
inline MonomialSum right_inverse_U(const SeriesX& f) {
  if (f.domain != Domain::Bidisc)
    throw std::invalid_argument("right_inverse_U expects a series on the bidisc");
  MonomialSum out;
  for (const auto& [idx, c] : f.coeffs) {
    MonomialTerm t;
    t.a = Rat(idx.m + 2);
    t.b = Rat(idx.n);
    t.k = idx.m;
    t.l = idx.n;
    t.coeff = c * ExactComplex{Rat(idx.m + 2, idx.m + 1)};
    out.terms.push_back(std::move(t));
  }
  return out.normalize();
}

// Exact pairing ratio <delta1^2 w^mu, w^m> / ||w^m||^2 on the punctured disc.
inline Rat projection_ratio(int mu, int m) {
  if (mu < 0 || m < 0) throw std::invalid_argument("projection_ratio: indices must be >= 0");
  MonomialTerm g;
  g.a = Rat(mu + 2 + m);
  g.k = mu - m;
  g.coeff = ExactComplex{1};
  PiValue ip = integrate_exact(MonomialSum(std::move(g)), Domain::PuncturedDisc);
  if (ip.is_zero()) return Rat(0);
  PiValue ratio = ip / monomial_norm_sq(Domain::PuncturedDisc, {m, 0});
  if (ratio.pi_pow != 0 || ratio.coeff.im != 0)
    throw std::logic_error("projection_ratio: unexpected form");
  return ratio.coeff.re;
}

}  // namespace hartogs
