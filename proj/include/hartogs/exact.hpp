#pragma once

// Exact scalar arithmetic: rationals, Gaussian rationals, and values of the
// form (rational) * pi^k. Closed-form integrals of monomials stay in this
// ring, which is what makes the identity checks exact rather than approximate.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace hartogs {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------------------
// Error types shared across the library.

struct SingularEvaluation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DivergentIntegral : std::runtime_error {
  double exponent;  // offending radial exponent (of dr, not of dV)
  explicit DivergentIntegral(const std::string& what, double expo)
      : std::runtime_error(what), exponent(expo) {}
};

struct NonIntegrableIndex : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DivergentSequence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The exact backend cannot represent the result (e.g. a logarithm or an
// irrational power of a breakpoint). Callers fall back to quadrature.
struct ExactUnsupported : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Rational helpers.

inline double to_double(const Rat& x) { return x.convert_to<double>(); }

// Every finite double is a dyadic rational; this conversion is exact.
inline Rat rat_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("rat_from_double: non-finite");
  if (x == 0.0) return Rat(0);
  int exp2 = 0;
  double mant = std::frexp(x, &exp2);           // x = mant * 2^exp2, |mant| in [0.5,1)
  auto scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
  Rat r(scaled);
  int shift = exp2 - 53;
  if (shift >= 0) {
    r *= Rat(BigInt(1) << shift);
  } else {
    r /= Rat(BigInt(1) << (-shift));
  }
  return r;
}

inline std::string rat_to_string(const Rat& x) {
  std::ostringstream os;
  os << x;  // "num" or "num/den"
  return os.str();
}

// Accepts "15/32", "-3", "0.25", "1e-2". Decimal forms go through the exact
// dyadic value of the parsed double.
// Base-10 only; avoids cpp_int's octal/hex reading of "025"/"0x" prefixes.
inline std::optional<BigInt> parse_decimal_int(std::string s) {
  if (s.empty()) return std::nullopt;
  bool negative = false;
  if (s[0] == '+' || s[0] == '-') {
    negative = s[0] == '-';
    s.erase(0, 1);
  }
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    return std::nullopt;
  BigInt v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return negative ? -v : v;
}

inline std::optional<Rat> parse_rational(const std::string& s) {
  if (s.empty()) return std::nullopt;
  auto slash = s.find('/');
  try {
    if (slash != std::string::npos) {
      auto num = parse_decimal_int(s.substr(0, slash));
      auto den = parse_decimal_int(s.substr(slash + 1));
      if (!num || !den || *den == 0) return std::nullopt;
      return Rat(*num, *den);
    }
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
        s.find('E') == std::string::npos) {
      auto v = parse_decimal_int(s);
      if (!v) return std::nullopt;
      return Rat(*v);
    }
    // Exact decimal notation: [sign] digits [. digits] [eE [sign] digits].
    std::string body = s;
    bool negative = false;
    if (body[0] == '+' || body[0] == '-') {
      negative = body[0] == '-';
      body.erase(0, 1);
    }
    long expo10 = 0;
    if (auto e = body.find_first_of("eE"); e != std::string::npos) {
      std::string etail = body.substr(e + 1);
      body.erase(e);
      if (etail.empty()) return std::nullopt;
      size_t pos = 0;
      expo10 = std::stol(etail, &pos);
      if (pos != etail.size()) return std::nullopt;
    }
    std::string digits = body;
    size_t frac_len = 0;
    if (auto dot = body.find('.'); dot != std::string::npos) {
      frac_len = body.size() - dot - 1;
      digits = body.substr(0, dot) + body.substr(dot + 1);
    }
    auto mant = parse_decimal_int(digits);
    if (!mant) return std::nullopt;
    BigInt num = *mant;
    BigInt den = 1;
    long net = expo10 - static_cast<long>(frac_len);
    if (net >= 0)
      num *= boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(net));
    else
      den = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(-net));
    if (negative) num = -num;
    return Rat(num, den);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

inline bool is_integer(const Rat& x) { return denominator(x) == 1; }

// Largest r with r^n <= x, reported only when exact.
inline std::optional<BigInt> integer_nth_root(const BigInt& x, unsigned n) {
  if (x < 0) return std::nullopt;
  if (x == 0 || x == 1 || n == 1) return x;
  BigInt lo = 0, hi = x < 2 ? x : BigInt(2);
  while (boost::multiprecision::pow(hi, n) < x) hi <<= 1;
  while (lo < hi) {
    BigInt mid = (lo + hi) / 2;
    if (boost::multiprecision::pow(mid, n) < x)
      lo = mid + 1;
    else
      hi = mid;
  }
  if (boost::multiprecision::pow(lo, n) == x) return lo;
  return std::nullopt;
}

inline Rat rat_pow_int(const Rat& base, long e) {
  if (e == 0) return Rat(1);
  if (base == 0) {
    if (e > 0) return Rat(0);
    throw SingularEvaluation("0 raised to a negative power");
  }
  BigInt n = numerator(base), d = denominator(base);
  unsigned long a = static_cast<unsigned long>(e < 0 ? -e : e);
  BigInt np = boost::multiprecision::pow(n, a);
  BigInt dp = boost::multiprecision::pow(d, a);
  return e > 0 ? Rat(np, dp) : Rat(dp, np);
}

// base^expo when the result is rational; nullopt otherwise. base must be >= 0.
inline std::optional<Rat> rational_pow(const Rat& base, const Rat& expo) {
  if (base < 0) return std::nullopt;
  if (base == 0) {
    if (expo > 0) return Rat(0);
    if (expo == 0) return Rat(1);
    return std::nullopt;
  }
  if (base == 1) return Rat(1);
  if (is_integer(expo)) {
    return rat_pow_int(base, static_cast<long>(numerator(expo).convert_to<long long>()));
  }
  BigInt p = numerator(expo), q = denominator(expo);
  bool neg = p < 0;
  if (neg) p = -p;
  auto rn = integer_nth_root(numerator(base), q.convert_to<unsigned>());
  auto rd = integer_nth_root(denominator(base), q.convert_to<unsigned>());
  if (!rn || !rd) return std::nullopt;
  Rat root(*rn, *rd);
  Rat out = rat_pow_int(root, p.convert_to<long>());
  return neg ? Rat(1) / out : out;
}

// ---------------------------------------------------------------------------
// Gaussian rationals.

struct ExactComplex {
  Rat re{0}, im{0};

  ExactComplex() = default;
  ExactComplex(Rat r) : re(std::move(r)) {}                  // NOLINT(google-explicit-constructor)
  ExactComplex(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
  ExactComplex(int r) : re(r) {}                             // NOLINT(google-explicit-constructor)

  bool is_zero() const { return re == 0 && im == 0; }
  ExactComplex conj() const { return {re, -im}; }
  Rat abs_sq() const { return re * re + im * im; }
  std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }

  friend ExactComplex operator+(const ExactComplex& a, const ExactComplex& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend ExactComplex operator-(const ExactComplex& a, const ExactComplex& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend ExactComplex operator-(const ExactComplex& a) { return {-a.re, -a.im}; }
  friend ExactComplex operator*(const ExactComplex& a, const ExactComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend ExactComplex operator*(const Rat& s, const ExactComplex& b) {
    return {s * b.re, s * b.im};
  }
  friend ExactComplex operator/(const ExactComplex& a, const ExactComplex& b) {
    Rat d = b.abs_sq();
    if (d == 0) throw SingularEvaluation("exact complex division by zero");
    ExactComplex num = a * b.conj();
    return {num.re / d, num.im / d};
  }
  friend bool operator==(const ExactComplex& a, const ExactComplex& b) {
    return a.re == b.re && a.im == b.im;
  }
  ExactComplex& operator+=(const ExactComplex& b) {
    re += b.re;
    im += b.im;
    return *this;
  }
};

inline std::string to_string(const ExactComplex& z) {
  if (z.im == 0) return rat_to_string(z.re);
  std::ostringstream os;
  os << rat_to_string(z.re) << (z.im < 0 ? "-" : "+") << rat_to_string(boost::multiprecision::abs(z.im))
     << "i";
  return os.str();
}

// ---------------------------------------------------------------------------
// Values of the form coeff * pi^pi_pow. Integrals over the model domains live
// here: dimension-1 results carry pi, dimension-2 results carry pi^2, and
// ratios cancel the pi factors entirely.

struct PiValue {
  ExactComplex coeff{};
  int pi_pow = 0;

  PiValue() = default;
  PiValue(ExactComplex c, int p) : coeff(std::move(c)), pi_pow(p) {}
  static PiValue zero(int pi_pow) { return {ExactComplex{}, pi_pow}; }
  static PiValue real(Rat c, int pi_pow) {
    return {ExactComplex{std::move(c), Rat(0)}, pi_pow};
  }

  bool is_zero() const { return coeff.is_zero(); }

  std::complex<double> to_complex() const {
    const double pi = 3.14159265358979323846264338327950288;
    return coeff.to_complex() * std::pow(pi, pi_pow);
  }
  double real() const { return to_complex().real(); }

  PiValue conj() const { return {coeff.conj(), pi_pow}; }

  friend PiValue operator*(const PiValue& a, const PiValue& b) {
    return {a.coeff * b.coeff, a.pi_pow + b.pi_pow};
  }
  friend PiValue operator*(const Rat& s, const PiValue& b) { return {s * b.coeff, b.pi_pow}; }
  friend PiValue operator/(const PiValue& a, const PiValue& b) {
    return {a.coeff / b.coeff, a.pi_pow - b.pi_pow};
  }
  friend PiValue operator+(const PiValue& a, const PiValue& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.pi_pow != b.pi_pow)
      throw std::logic_error("PiValue addition with mismatched pi powers");
    return {a.coeff + b.coeff, a.pi_pow};
  }
  friend PiValue operator-(const PiValue& a, const PiValue& b) {
    return a + PiValue{-b.coeff, b.pi_pow};
  }
  friend bool operator==(const PiValue& a, const PiValue& b) {
    if (a.is_zero() && b.is_zero()) return true;
    return a.coeff == b.coeff && a.pi_pow == b.pi_pow;
  }
};

inline std::string to_string(const PiValue& v) {
  if (v.is_zero()) return "0";
  std::string c = to_string(v.coeff);
  if (v.pi_pow == 0) return c;
  std::string p = v.pi_pow == 1 ? "pi" : "pi^" + std::to_string(v.pi_pow);
  if (c == "1") return p;
  if (c == "-1") return "-" + p;
  return c + "*" + p;
}

// ∫_c^d r^E dr for 0 <= c < d, exact. Throws DivergentIntegral when c == 0 and
// E <= -1, ExactUnsupported when the antiderivative leaves the rationals.
inline Rat exact_power_integral(const Rat& E, const Rat& c, const Rat& d) {
  if (c > d) throw std::invalid_argument("exact_power_integral: c > d");
  if (c == d) return Rat(0);
  Rat e1 = E + 1;
  if (c == 0 && e1 <= 0)
    throw DivergentIntegral("integral of r^E diverges at r=0", to_double(E));
  if (e1 == 0) throw ExactUnsupported("logarithmic antiderivative is not rational");
  auto dp = rational_pow(d, e1);
  auto cp = c == 0 ? std::optional<Rat>(Rat(0)) : rational_pow(c, e1);
  if (!dp || !cp)
    throw ExactUnsupported("irrational power of an integration endpoint");
  return (*dp - *cp) / e1;
}

}  // namespace hartogs
