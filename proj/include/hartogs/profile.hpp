#pragma once

// Piecewise-polynomial radial cutoffs chi(r) on [0,1] with rational
// breakpoints and coefficients, closed under products and powers. These are
// the cutoff instances the counterexample scenarios integrate exactly.

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include "hartogs/exact.hpp"

namespace hartogs {

using Poly = std::vector<Rat>;  // c[0] + c[1] r + ...

inline Poly poly_add(const Poly& a, const Poly& b) {
  Poly out(std::max(a.size(), b.size()), Rat(0));
  for (size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, Rat(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

inline Poly poly_scale(const Rat& s, const Poly& a) {
  Poly out = a;
  for (auto& c : out) c *= s;
  return out;
}

// p(u) with u = s0 + s1 r, expanded in r.
inline Poly poly_compose_linear(const Poly& p, const Rat& s0, const Rat& s1) {
  Poly out{Rat(0)};
  Poly lin{s0, s1};
  for (size_t i = p.size(); i-- > 0;) {
    out = poly_mul(out, lin);
    if (out.empty()) out = {Rat(0)};
    out[0] += p[i];
  }
  return out;
}

inline double poly_eval(const Poly& p, double r) {
  double v = 0;
  for (size_t i = p.size(); i-- > 0;) v = v * r + to_double(p[i]);
  return v;
}

inline Rat poly_eval_exact(const Poly& p, const Rat& r) {
  Rat v(0);
  for (size_t i = p.size(); i-- > 0;) v = v * r + p[i];
  return v;
}

struct PolySeg {
  Rat lo, hi;  // on [lo, hi)
  Poly c;
};

class PiecewisePoly {
 public:
  PiecewisePoly() = default;
  explicit PiecewisePoly(std::vector<PolySeg> segs, std::string name = "piecewise")
      : segs_(std::move(segs)), name_(std::move(name)) {}

  static PiecewisePoly one() {
    return PiecewisePoly({{Rat(0), Rat(1), {Rat(1)}}}, "one");
  }
  // Indicator of [lo, 1].
  static PiecewisePoly step(const Rat& lo = Rat(1, 2)) {
    return PiecewisePoly({{lo, Rat(1), {Rat(1)}}},
                         "step[" + rat_to_string(lo) + ",1]");
  }
  // 0 on [0,a], cubic smoothstep on [a,b], 1 on [b,1].
  static PiecewisePoly smoothstep(const Rat& a = Rat(1, 4), const Rat& b = Rat(1, 2)) {
    Rat h = b - a;
    // 3u^2 - 2u^3 with u = (r-a)/h
    Poly cubic = poly_compose_linear(Poly{Rat(0), Rat(0), Rat(3), Rat(-2)}, -a / h, Rat(1) / h);
    return PiecewisePoly({{a, b, cubic}, {b, Rat(1), {Rat(1)}}},
                         "ramp[" + rat_to_string(a) + "," + rat_to_string(b) + "]");
  }

  const std::vector<PolySeg>& segments() const { return segs_; }
  const std::string& name() const { return name_; }

  // Canonical content key (used to merge like integrand terms).
  std::string key() const {
    std::string k;
    for (const auto& s : segs_) {
      size_t deg = s.c.size();
      while (deg > 0 && s.c[deg - 1] == 0) --deg;
      if (deg == 0) continue;
      k += rat_to_string(s.lo) + ":" + rat_to_string(s.hi) + ":";
      for (size_t i = 0; i < deg; ++i) k += rat_to_string(s.c[i]) + ",";
      k += ";";
    }
    return k;
  }
  friend bool operator==(const PiecewisePoly& a, const PiecewisePoly& b) {
    return a.key() == b.key();
  }

  double operator()(double r) const {
    for (const auto& s : segs_) {
      if (r >= to_double(s.lo) && (r < to_double(s.hi) || (s.hi == 1 && r <= 1.0)))
        return poly_eval(s.c, r);
    }
    return 0.0;
  }

  bool vanishes_near_zero() const {
    for (const auto& s : segs_) {
      if (s.lo == 0) {
        for (const auto& c : s.c)
          if (c != 0) return false;
      }
    }
    return true;
  }

  PiecewisePoly operator*(const PiecewisePoly& other) const {
    std::set<Rat> cuts{Rat(0), Rat(1)};
    for (const auto& s : segs_) {
      cuts.insert(s.lo);
      cuts.insert(s.hi);
    }
    for (const auto& s : other.segs_) {
      cuts.insert(s.lo);
      cuts.insert(s.hi);
    }
    std::vector<PolySeg> out;
    auto it = cuts.begin();
    Rat lo = *it++;
    for (; it != cuts.end(); ++it) {
      Rat hi = *it;
      Poly pa = piece_on(lo), pb = other.piece_on(lo);
      Poly prod = poly_mul(pa, pb);
      if (!prod.empty() && std::any_of(prod.begin(), prod.end(), [](const Rat& c) { return c != 0; }))
        out.push_back({lo, hi, prod});
      lo = hi;
    }
    return PiecewisePoly(std::move(out), name_ + "*" + other.name_);
  }

  PiecewisePoly pow_int(int k) const {
    if (k < 0) throw std::invalid_argument("PiecewisePoly::pow_int: negative power");
    PiecewisePoly out = one();
    for (int i = 0; i < k; ++i) out = out * (*this);
    out.name_ = name_ + "^" + std::to_string(k);
    return out;
  }

  // ∫_0^1 chi(r) r^E dr, exact.
  Rat integrate_against_power(const Rat& E) const {
    Rat total(0);
    for (const auto& s : segs_) {
      for (size_t j = 0; j < s.c.size(); ++j) {
        if (s.c[j] == 0) continue;
        total += s.c[j] * exact_power_integral(E + Rat(static_cast<int>(j)), s.lo, s.hi);
      }
    }
    return total;
  }

 private:
  Poly piece_on(const Rat& lo) const {
    for (const auto& s : segs_)
      if (s.lo <= lo && lo < s.hi) return s.c;
    return {};
  }

  std::vector<PolySeg> segs_;
  std::string name_ = "one";
};

}  // namespace hartogs
