#pragma once

// Gauss-Legendre rules (Newton iteration on the Legendre recurrence) with a
// per-order cache, plus helpers for mapping panels.

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace hartogs {

struct GaussRule {
  std::vector<double> x;  // nodes on (-1, 1), ascending
  std::vector<double> w;
};

inline GaussRule make_gauss_rule(int n) {
  if (n < 1) throw std::invalid_argument("gauss rule order must be >= 1");
  GaussRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  for (int i = 0; i < n; ++i) {
    // Tricomi-style initial guess, then Newton.
    double x = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.x[n - 1 - i] = x;
    rule.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

inline const GaussRule& gauss_rule(int n) {
  static std::map<int, GaussRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss_rule(n)).first;
  return it->second;
}

// Integrate g over [lo, hi] with an n-point Gauss panel.
template <typename G>
double gauss_panel(G&& g, double lo, double hi, int n) {
  const GaussRule& rule = gauss_rule(n);
  double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += rule.w[i] * g(mid + half * rule.x[i]);
  return acc * half;
}

}  // namespace hartogs
