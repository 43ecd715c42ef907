#pragma once

// Model domains (disc, punctured disc, bidisc, punctured bidisc, Hartogs
// triangle), points in polar form, radial weights, and the biholomorphism
// Phi(w1,w2) = (w1, w1*w2) between D*xD and the Hartogs triangle.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "hartogs/exact.hpp"
#include "hartogs/profile.hpp"

namespace hartogs {

using CxD = std::complex<double>;
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class Domain { Disc, PuncturedDisc, Bidisc, PuncturedBidisc, HartogsTriangle };

inline int dimension(Domain d) {
  switch (d) {
    case Domain::Disc:
    case Domain::PuncturedDisc:
      return 1;
    default:
      return 2;
  }
}

inline std::string domain_tag(Domain d) {
  switch (d) {
    case Domain::Disc: return "disc";
    case Domain::PuncturedDisc: return "punctured-disc";
    case Domain::Bidisc: return "bidisc";
    case Domain::PuncturedBidisc: return "punctured-bidisc";
    case Domain::HartogsTriangle: return "hartogs";
  }
  throw std::logic_error("unknown domain");
}

inline Domain domain_from_tag(const std::string& tag) {
  if (tag == "disc") return Domain::Disc;
  if (tag == "punctured-disc") return Domain::PuncturedDisc;
  if (tag == "bidisc") return Domain::Bidisc;
  if (tag == "punctured-bidisc") return Domain::PuncturedBidisc;
  if (tag == "hartogs") return Domain::HartogsTriangle;
  throw std::invalid_argument("unknown domain tag: " + tag);
}

inline double normalize_angle(double t) {
  t = std::fmod(t, kTwoPi);
  if (t < 0) t += kTwoPi;
  return t;
}

struct Polar {
  double r = 0.0;
  double theta = 0.0;  // in [0, 2pi)

  Polar() = default;
  Polar(double radius, double angle) : r(radius), theta(normalize_angle(angle)) {
    if (radius < 0) throw std::invalid_argument("Polar: negative radius");
  }
  static Polar from_complex(CxD z) { return {std::abs(z), std::arg(z)}; }
  CxD to_complex() const { return std::polar(r, theta); }
};

struct Point2C {
  Polar z1, z2;
  int dim = 2;

  Point2C() = default;
  Point2C(Polar a, Polar b) : z1(a), z2(b) {}
  static Point2C planar(CxD a, CxD b) { return {Polar::from_complex(a), Polar::from_complex(b)}; }
  static Point2C line(Polar a) {
    Point2C p{a, Polar{}};
    p.dim = 1;
    return p;
  }
  static Point2C line(CxD a) { return line(Polar::from_complex(a)); }
};

inline double delta1(const Point2C& z) { return z.z1.r; }

inline bool contains(Domain d, const Point2C& z) {
  if (z.dim != dimension(d))
    throw std::invalid_argument("contains: point dimension does not match domain");
  switch (d) {
    case Domain::Disc: return z.z1.r < 1.0;
    case Domain::PuncturedDisc: return 0.0 < z.z1.r && z.z1.r < 1.0;
    case Domain::Bidisc: return z.z1.r < 1.0 && z.z2.r < 1.0;
    case Domain::PuncturedBidisc: return 0.0 < z.z1.r && z.z1.r < 1.0 && z.z2.r < 1.0;
    case Domain::HartogsTriangle: return z.z2.r < z.z1.r && z.z1.r < 1.0;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Radial weights. PowerDelta1(beta) is |z1|^beta; RadialProfile applies a
// caller-supplied positive function to delta1.

struct WeightSpec {
  enum class Kind { Constant, PowerDelta1, RadialProfile };

  Kind kind = Kind::Constant;
  double constant = 1.0;
  Rat exponent{0};
  std::function<double(double)> profile;
  std::optional<PiecewisePoly> poly;  // set when the profile has exact form
  std::string name = "1";

  static WeightSpec one() { return {}; }
  static WeightSpec make_constant(double c) {
    if (c <= 0) throw std::invalid_argument("WeightSpec: constant must be positive");
    WeightSpec w;
    w.kind = Kind::Constant;
    w.constant = c;
    w.name = "const";
    return w;
  }
  static WeightSpec power_delta1(Rat beta) {
    WeightSpec w;
    w.kind = Kind::PowerDelta1;
    w.exponent = std::move(beta);
    w.name = "delta1^" + rat_to_string(w.exponent);
    return w;
  }
  static WeightSpec radial_profile(std::function<double(double)> lambda, std::string name) {
    WeightSpec w;
    w.kind = Kind::RadialProfile;
    w.profile = std::move(lambda);
    w.name = std::move(name);
    return w;
  }
  static WeightSpec radial_poly(PiecewisePoly p) {
    WeightSpec w;
    w.kind = Kind::RadialProfile;
    w.name = p.name();
    w.profile = [p](double r) { return p(r); };
    w.poly = std::move(p);
    return w;
  }

  bool is_unit() const {
    return (kind == Kind::Constant && constant == 1.0) ||
           (kind == Kind::PowerDelta1 && exponent == 0);
  }
};

inline double weight_at(const WeightSpec& w, const Point2C& z) {
  switch (w.kind) {
    case WeightSpec::Kind::Constant:
      return w.constant;
    case WeightSpec::Kind::PowerDelta1: {
      double beta = to_double(w.exponent);
      if (z.z1.r == 0.0 && beta < 0)
        throw SingularEvaluation("weight_at: delta1^beta with beta<0 at z1=0");
      if (beta == 0) return 1.0;
      return std::pow(z.z1.r, beta);
    }
    case WeightSpec::Kind::RadialProfile: {
      double v = w.profile(z.z1.r);
      if (!(v > 0))
        throw std::domain_error("weight_at: radial profile must be positive on the domain");
      return v;
    }
  }
  throw std::logic_error("unknown weight kind");
}

// ---------------------------------------------------------------------------
// Phi: D*xD -> H, (w1,w2) |-> (w1, w1*w2);  det Phi'(w) = w1.

inline Point2C phi(const Point2C& w) {
  if (!contains(Domain::PuncturedBidisc, w))
    throw std::invalid_argument("phi: point not in D*xD");
  return {w.z1, Polar(w.z1.r * w.z2.r, w.z1.theta + w.z2.theta)};
}

inline Point2C phi_inverse(const Point2C& z) {
  if (z.z1.r == 0.0) throw SingularEvaluation("phi_inverse: z1 = 0");
  if (!contains(Domain::HartogsTriangle, z))
    throw std::invalid_argument("phi_inverse: point not in the Hartogs triangle");
  return {z.z1, Polar(z.z2.r / z.z1.r, z.z2.theta - z.z1.theta)};
}

inline CxD det_phi_prime(const Point2C& w) { return w.z1.to_complex(); }

}  // namespace hartogs
