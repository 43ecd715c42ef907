#pragma once

// Sparse Laurent-Taylor coefficient series on the model domains, with the
// coefficient-level operators: partial sums in the first variable, bounded
// multiplier sequences, and the transfer isomorphism induced by phi.

#include <charconv>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hartogs/exact.hpp"
#include "hartogs/geometry.hpp"

namespace hartogs {

struct BiIndex {
  int m = 0;
  int n = 0;
  friend auto operator<=>(const BiIndex&, const BiIndex&) = default;
};

// Index sets carried by series on each domain: non-negative powers on the
// (bi)disc, Laurent powers of the first variable on the punctured domains,
// and m >= -(n+1) on the triangle (the square-integrable monomials).
inline bool index_allowed(Domain d, BiIndex i) {
  if (i.n < 0) return false;
  if (dimension(d) == 1 && i.n != 0) return false;
  switch (d) {
    case Domain::Disc:
    case Domain::Bidisc:
      return i.m >= 0;
    case Domain::PuncturedDisc:
    case Domain::PuncturedBidisc:
      return true;
    case Domain::HartogsTriangle:
      return i.m >= -(i.n + 1);
  }
  return false;
}

// --- coefficient backends ---------------------------------------------------

inline bool coeff_is_zero(const ExactComplex& c) { return c.is_zero(); }
inline bool coeff_is_zero(const CxD& c) { return c == CxD{}; }
inline CxD to_cx(const ExactComplex& c) { return c.to_complex(); }
inline CxD to_cx(const CxD& c) { return c; }
inline ExactComplex coeff_scale(const ExactComplex& c, const Rat& t) { return t * c; }
inline CxD coeff_scale(const CxD& c, const Rat& t) { return c * to_double(t); }

inline std::string format_double(double x) {
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, p);
}

inline std::string coeff_to_text(const ExactComplex& c) {
  return rat_to_string(c.re) + " " + rat_to_string(c.im);
}
inline std::string coeff_to_text(const CxD& c) {
  return format_double(c.real()) + " " + format_double(c.imag());
}

inline bool coeff_from_text(const std::string& re, const std::string& im, ExactComplex& out) {
  auto r = parse_rational(re);
  auto i = parse_rational(im);
  if (!r || !i) return false;
  out = {*r, *i};
  return true;
}
inline bool coeff_from_text(const std::string& re, const std::string& im, CxD& out) {
  try {
    size_t p1 = 0, p2 = 0;
    double r = std::stod(re, &p1);
    double i = std::stod(im, &p2);
    if (p1 != re.size() || p2 != im.size()) return false;
    out = {r, i};
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

// --- series -----------------------------------------------------------------

template <typename C>
struct CoeffSeries {
  Domain domain = Domain::Bidisc;
  std::map<BiIndex, C> coeffs;

  CoeffSeries() = default;
  explicit CoeffSeries(Domain d) : domain(d) {}

  CoeffSeries& set(int m, int n, C c) {
    BiIndex idx{m, n};
    if (!index_allowed(domain, idx))
      throw std::invalid_argument("coefficient index not allowed on " + domain_tag(domain));
    if (coeff_is_zero(c))
      coeffs.erase(idx);
    else
      coeffs[idx] = std::move(c);
    return *this;
  }

  const C* find(int m, int n) const {
    auto it = coeffs.find(BiIndex{m, n});
    return it == coeffs.end() ? nullptr : &it->second;
  }

  bool has_negative_power() const {
    return !coeffs.empty() && coeffs.begin()->first.m < 0;
  }

  int max_degree_first() const {
    int d = -1;
    for (const auto& [idx, c] : coeffs) d = std::max(d, idx.m);
    return d;
  }

  CoeffSeries& prune() {
    for (auto it = coeffs.begin(); it != coeffs.end();)
      it = coeff_is_zero(it->second) ? coeffs.erase(it) : std::next(it);
    return *this;
  }

  friend bool operator==(const CoeffSeries& a, const CoeffSeries& b) {
    if (a.domain != b.domain) return false;
    auto pa = a;
    auto pb = b;
    return pa.prune().coeffs == pb.prune().coeffs;
  }

  friend CoeffSeries operator+(const CoeffSeries& a, const CoeffSeries& b) {
    if (a.domain != b.domain) throw std::invalid_argument("series domain mismatch");
    CoeffSeries out = a;
    for (const auto& [idx, c] : b.coeffs) {
      auto [it, fresh] = out.coeffs.try_emplace(idx, c);
      if (!fresh) it->second = it->second + c;
    }
    return out.prune();
  }

  friend CoeffSeries operator-(const CoeffSeries& a, const CoeffSeries& b) {
    if (a.domain != b.domain) throw std::invalid_argument("series domain mismatch");
    CoeffSeries out = a;
    for (const auto& [idx, c] : b.coeffs) {
      auto [it, fresh] = out.coeffs.try_emplace(idx, C{} - c);
      if (!fresh) it->second = it->second - c;
    }
    return out.prune();
  }

  CoeffSeries scaled(const Rat& t) const {
    CoeffSeries out = *this;
    for (auto& [idx, c] : out.coeffs) c = coeff_scale(c, t);
    return out.prune();
  }
};

using SeriesX = CoeffSeries<ExactComplex>;
using SeriesD = CoeffSeries<CxD>;

inline SeriesX monomial_series(Domain d, int m, int n, ExactComplex c = ExactComplex{Rat(1), Rat(0)}) {
  SeriesX s(d);
  s.set(m, n, std::move(c));
  return s;
}

template <typename C>
CxD eval(const CoeffSeries<C>& s, const Point2C& z) {
  if (z.dim != dimension(s.domain))
    throw std::invalid_argument("eval: point dimension does not match series domain");
  CxD z1 = z.z1.to_complex();
  CxD z2 = z.z2.to_complex();
  CxD acc{};
  for (const auto& [idx, c] : s.coeffs) {
    if (idx.m < 0 && z.z1.r == 0.0)
      throw SingularEvaluation("eval: negative power of the first coordinate at 0");
    CxD term = to_cx(c);
    if (idx.m != 0) term *= std::pow(z1, idx.m);
    if (idx.n != 0) term *= std::pow(z2, idx.n);
    acc += term;
  }
  return acc;
}

// Partial sum in the first variable: keep degrees m <= N.
template <typename C>
CoeffSeries<C> partial_sum(const CoeffSeries<C>& s, int N) {
  if (N < 0) throw std::invalid_argument("partial_sum: N must be non-negative");
  if (s.domain != Domain::Bidisc && s.domain != Domain::Disc)
    throw std::invalid_argument("partial_sum: series must carry non-negative powers");
  CoeffSeries<C> out(s.domain);
  for (const auto& [idx, c] : s.coeffs)
    if (idx.m <= N) out.coeffs.emplace(idx, c);
  return out;
}

// --- multiplier sequences ----------------------------------------------------

struct MultiplierSeq {
  std::function<Rat(int)> rule;
  bool monotone = false;
  std::optional<Rat> limit;
  std::string name;

  Rat operator()(int mu) const { return rule(mu); }

  // t_mu = 1 + 1/(mu+1): monotone decreasing to 1.
  static MultiplierSeq one_plus_inverse() {
    return {[](int mu) { return 1 + Rat(1, mu + 1); }, true, Rat(1), "1+1/(mu+1)"};
  }
  static MultiplierSeq constant(Rat c) {
    return {[c](int) { return c; }, true, c, "const " + rat_to_string(c)};
  }
  static MultiplierSeq alternating() {
    return {[](int mu) { return mu % 2 == 0 ? Rat(1) : Rat(-1); }, false, std::nullopt,
            "(-1)^mu"};
  }
};

struct BvResult {
  Rat partial{0};   // sum of |t_{mu+1} - t_mu| up to the truncation
  Rat tail{0};      // |limit - t_truncation| for monotone sequences
  Rat value{0};     // partial + tail
  std::optional<Rat> limit;
  bool exact_tail = false;  // true when the tail was resolved via monotonicity
};

inline BvResult bv_norm(const MultiplierSeq& t, int truncation = 4096,
                        const Rat& cap = Rat(1000)) {
  if (truncation < 1) throw std::invalid_argument("bv_norm: truncation must be >= 1");
  BvResult out;
  Rat prev = t(0);
  for (int mu = 0; mu < truncation; ++mu) {
    Rat next = t(mu + 1);
    out.partial += boost::multiprecision::abs(next - prev);
    prev = next;
    if (out.partial > cap)
      throw DivergentSequence("bv_norm: variation exceeded the configured cap");
  }
  out.limit = t.limit;
  if (t.monotone && t.limit) {
    out.tail = boost::multiprecision::abs(*t.limit - prev);
    out.exact_tail = true;
  }
  out.value = out.partial + out.tail;
  return out;
}

template <typename C>
CoeffSeries<C> apply_multiplier(const CoeffSeries<C>& s, const MultiplierSeq& t) {
  if (s.domain != Domain::Bidisc && s.domain != Domain::Disc)
    throw std::invalid_argument("apply_multiplier: series must carry non-negative powers");
  CoeffSeries<C> out(s.domain);
  for (const auto& [idx, c] : s.coeffs) {
    C v = coeff_scale(c, t(idx.m));
    if (!coeff_is_zero(v)) out.coeffs.emplace(idx, std::move(v));
  }
  return out;
}

// --- transfer isomorphism on indices ------------------------------------------
//
// T h = det(phi') * (h o phi) sends z1^m z2^n on the triangle to
// w1^{m+n+1} w2^n on D* x D; the inverse sends w1^mu w2^nu to
// z1^{mu-nu-1} z2^nu.

enum class BellDirection { HToDD, DDToH };

inline BiIndex bell_index(BiIndex i, BellDirection dir) {
  if (dir == BellDirection::HToDD) return {i.m + i.n + 1, i.n};
  return {i.m - i.n - 1, i.n};
}

template <typename C>
CoeffSeries<C> bell_transform(const CoeffSeries<C>& s, BellDirection dir) {
  Domain expected = dir == BellDirection::HToDD ? Domain::HartogsTriangle
                                                : Domain::PuncturedBidisc;
  Domain target = dir == BellDirection::HToDD ? Domain::PuncturedBidisc
                                              : Domain::HartogsTriangle;
  if (s.domain != expected)
    throw std::invalid_argument("bell_transform: series tagged " + domain_tag(s.domain) +
                                ", expected " + domain_tag(expected));
  CoeffSeries<C> out(target);
  for (const auto& [idx, c] : s.coeffs) {
    if (dir == BellDirection::DDToH && idx.m < 0)
      throw std::invalid_argument(
          "bell_transform: negative first-variable power has no preimage on the triangle");
    BiIndex j = bell_index(idx, dir);
    if (!index_allowed(target, j))
      throw std::logic_error("bell_transform: image index escapes the target constraint");
    out.coeffs.emplace(j, c);
  }
  return out;
}

// Cauchy product; needs an index set closed under addition.
template <typename C>
CoeffSeries<C> convolve(const CoeffSeries<C>& a, const CoeffSeries<C>& b) {
  if (a.domain != b.domain) throw std::invalid_argument("convolve: domain mismatch");
  if (a.domain != Domain::Bidisc && a.domain != Domain::Disc)
    throw std::invalid_argument("convolve: series must carry non-negative powers");
  CoeffSeries<C> out(a.domain);
  for (const auto& [ia, ca] : a.coeffs)
    for (const auto& [ib, cb] : b.coeffs) {
      BiIndex j{ia.m + ib.m, ia.n + ib.n};
      C v = ca * cb;
      auto [it, fresh] = out.coeffs.try_emplace(j, v);
      if (!fresh) it->second = it->second + v;
    }
  return out.prune();
}

// --- line-oriented text format -------------------------------------------------
//
//   domain <tag>
//   <m> <n> <re> <im>         (one line per coefficient)
//
// Exact-backed coefficients are written as fractions and round-trip bit-exactly;
// double-backed ones use shortest round-trip decimals.

template <typename C>
void serialize(const CoeffSeries<C>& s, std::ostream& os) {
  os << "domain " << domain_tag(s.domain) << "\n";
  for (const auto& [idx, c] : s.coeffs)
    os << idx.m << " " << idx.n << " " << coeff_to_text(c) << "\n";
}

template <typename C>
std::string serialize(const CoeffSeries<C>& s) {
  std::ostringstream os;
  serialize(s, os);
  return os.str();
}

template <typename C>
CoeffSeries<C> parse_series(std::istream& is) {
  std::string line;
  CoeffSeries<C> out;
  bool seen_header = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    if (!seen_header) {
      std::string kw, tag;
      if (!(ls >> kw >> tag) || kw != "domain")
        throw std::invalid_argument("series text must start with 'domain <tag>'");
      out.domain = domain_from_tag(tag);
      seen_header = true;
      continue;
    }
    int m, n;
    std::string re, im;
    if (!(ls >> m >> n >> re >> im))
      throw std::invalid_argument("bad coefficient line: " + line);
    C c;
    if (!coeff_from_text(re, im, c))
      throw std::invalid_argument("bad coefficient value: " + line);
    out.set(m, n, std::move(c));
  }
  if (!seen_header) throw std::invalid_argument("empty series text");
  return out;
}

template <typename C>
CoeffSeries<C> parse_series(const std::string& text) {
  std::istringstream is(text);
  return parse_series<C>(is);
}

}  // namespace hartogs
