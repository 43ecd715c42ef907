#pragma once

// Integrand atoms coeff * r1^a r2^b e^{i k th1} e^{i l th2} chi(r1) and finite
// sums of them. The algebra is closed under conjugation and products, so
// |f|^{2j} of a sparse series stays symbolic and integrates in closed form.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hartogs/profile.hpp"
#include "hartogs/series.hpp"

namespace hartogs {

struct MonomialTerm {
  Rat a{0};
  Rat b{0};
  int k = 0;
  int l = 0;
  std::optional<PiecewisePoly> profile;
  ExactComplex coeff{Rat(1), Rat(0)};

  MonomialTerm conj() const {
    MonomialTerm t = *this;
    t.k = -k;
    t.l = -l;
    t.coeff = coeff.conj();
    return t;
  }

  friend MonomialTerm operator*(const MonomialTerm& s, const MonomialTerm& t) {
    MonomialTerm out;
    out.a = s.a + t.a;
    out.b = s.b + t.b;
    out.k = s.k + t.k;
    out.l = s.l + t.l;
    out.coeff = s.coeff * t.coeff;
    if (s.profile && t.profile)
      out.profile = *s.profile * *t.profile;
    else if (s.profile)
      out.profile = s.profile;
    else
      out.profile = t.profile;
    return out;
  }

  std::string merge_key() const {
    std::string k0 = rat_to_string(a) + "|" + rat_to_string(b) + "|" +
                     std::to_string(k) + "|" + std::to_string(l) + "|";
    if (profile) k0 += profile->key();
    return k0;
  }
};

// Pointwise value; the radius-power part is real.
inline CxD eval(const MonomialTerm& t, const Point2C& z) {
  double r1 = z.z1.r;
  if (r1 == 0.0 && t.a < 0)
    throw SingularEvaluation("monomial term: negative radial power at r1=0");
  double mag = 1.0;
  if (t.a != 0) mag *= std::pow(r1, to_double(t.a));
  if (t.b != 0) {
    if (z.z2.r == 0.0 && t.b < 0)
      throw SingularEvaluation("monomial term: negative radial power at r2=0");
    mag *= std::pow(z.z2.r, to_double(t.b));
  }
  if (t.profile) mag *= (*t.profile)(r1);
  double phase = t.k * z.z1.theta + t.l * z.z2.theta;
  return t.coeff.to_complex() * std::polar(mag, phase);
}

struct MonomialSum {
  std::vector<MonomialTerm> terms;

  MonomialSum() = default;
  explicit MonomialSum(MonomialTerm t) : terms{std::move(t)} {}

  static MonomialSum from_series(const SeriesX& s) {
    MonomialSum out;
    for (const auto& [idx, c] : s.coeffs) {
      MonomialTerm t;
      t.a = idx.m;
      t.b = idx.n;
      t.k = idx.m;
      t.l = idx.n;
      t.coeff = c;
      out.terms.push_back(std::move(t));
    }
    return out;
  }

  MonomialSum conj() const {
    MonomialSum out;
    out.terms.reserve(terms.size());
    for (const auto& t : terms) out.terms.push_back(t.conj());
    return out;
  }

  MonomialSum& normalize() {
    std::map<std::string, MonomialTerm> merged;
    for (const auto& t : terms) {
      auto [it, fresh] = merged.try_emplace(t.merge_key(), t);
      if (!fresh) it->second.coeff += t.coeff;
    }
    terms.clear();
    for (auto& [key, t] : merged)
      if (!t.coeff.is_zero()) terms.push_back(std::move(t));
    return *this;
  }

  friend MonomialSum operator*(const MonomialSum& f, const MonomialSum& g) {
    MonomialSum out;
    out.terms.reserve(f.terms.size() * g.terms.size());
    for (const auto& s : f.terms)
      for (const auto& t : g.terms) out.terms.push_back(s * t);
    return out.normalize();
  }

  friend MonomialSum operator+(const MonomialSum& f, const MonomialSum& g) {
    MonomialSum out = f;
    out.terms.insert(out.terms.end(), g.terms.begin(), g.terms.end());
    return out.normalize();
  }

  MonomialSum scaled(const ExactComplex& c) const {
    MonomialSum out = *this;
    for (auto& t : out.terms) t.coeff = t.coeff * c;
    return out;
  }

  // |f|^p for even integer p, expanded symbolically.
  MonomialSum abs_pow_even(int p) const {
    if (p <= 0 || p % 2 != 0)
      throw std::invalid_argument("abs_pow_even: p must be a positive even integer");
    MonomialSum sq = *this * conj();
    MonomialSum out = sq;
    for (int j = 2; j <= p / 2; ++j) out = out * sq;
    return out;
  }
};

inline CxD eval(const MonomialSum& f, const Point2C& z) {
  CxD acc{};
  for (const auto& t : f.terms) acc += eval(t, z);
  return acc;
}

// Fold a radial weight into the exponents/profile of each term.
inline MonomialSum apply_weight(const MonomialSum& f, const WeightSpec& w) {
  MonomialSum out = f;
  switch (w.kind) {
    case WeightSpec::Kind::Constant: {
      Rat c = rat_from_double(w.constant);
      for (auto& t : out.terms) t.coeff = c * t.coeff;
      return out;
    }
    case WeightSpec::Kind::PowerDelta1:
      for (auto& t : out.terms) t.a += w.exponent;
      return out;
    case WeightSpec::Kind::RadialProfile:
      if (!w.poly)
        throw ExactUnsupported("apply_weight: radial profile has no exact form");
      for (auto& t : out.terms) {
        t.profile = t.profile ? *t.profile * *w.poly : *w.poly;
      }
      return out;
  }
  throw std::logic_error("unknown weight kind");
}

// Transfer operator on general terms: T h = det(phi') * (h o phi) and its
// inverse. phi fixes the first coordinate, so radial profiles carry over.
inline MonomialSum bell_transform(const MonomialSum& f, BellDirection dir) {
  MonomialSum out;
  out.terms.reserve(f.terms.size());
  for (const auto& t : f.terms) {
    MonomialTerm s = t;
    if (dir == BellDirection::HToDD) {
      s.a = t.a + t.b + 1;
      s.k = t.k + t.l + 1;
    } else {
      s.a = t.a - t.b - 1;
      s.k = t.k - t.l - 1;
    }
    out.terms.push_back(std::move(s));
  }
  return out;
}

}  // namespace hartogs
