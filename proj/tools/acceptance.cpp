// Acceptance gate: every release-blocking check in one binary. Each check
// prints a single [PASS]/[FAIL] line with its wall time; the process exits
// nonzero if any check fails or overruns its time budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "hartogs/scenarios.hpp"

namespace {

using hartogs::Domain;
using hartogs::ExactComplex;
using hartogs::Measurement;
using hartogs::MonomialSum;
using hartogs::PiValue;
using hartogs::Rat;
using hartogs::ScenarioParams;
using hartogs::ScenarioVerdict;
using hartogs::VerificationReport;

constexpr double kPi2 = 9.86960440108935861883449099987615114;  // pi^2

int g_failures = 0;

const Measurement* find_row(const VerificationReport& rep, const std::string& quantity) {
  for (const auto& m : rep.measurements)
    if (m.quantity == quantity) return &m;
  return nullptr;
}

double row_value(const VerificationReport& rep, const std::string& quantity) {
  const Measurement* m = find_row(rep, quantity);
  if (!m) throw std::runtime_error(rep.id + ": missing measurement '" + quantity + "'");
  return m->value;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

template <typename Body>
void criterion(int index, const char* label, double time_limit, Body body) {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  std::string note;
  try {
    ok = body(note);
  } catch (const std::exception& e) {
    ok = false;
    note = e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (time_limit > 0 && secs >= time_limit) {
    ok = false;
    note += (note.empty() ? "" : "; ");
    note += "exceeded " + fmt(time_limit) + "s time budget";
  }
  std::printf("[%s] %02d %-44s %6.2fs", ok ? "PASS" : "FAIL", index, label, secs);
  if (time_limit > 0) std::printf(" (< %gs)", time_limit);
  if (!note.empty()) std::printf("  -- %s", note.c_str());
  std::printf("\n");
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  criterion(1, "diagonal compression identity, mu <= 64", 1.0, [](std::string& note) {
    ScenarioParams P;
    P.mu_max = 64;
    const auto rep = hartogs::run_scenario("tmu", P);
    const bool ok = rep.verdict == ScenarioVerdict::Pass &&
                    row_value(rep, "checked_pairs") == 4225.0 &&
                    row_value(rep, "identity_violations") == 0.0;
    note = "4225 pairs, zero violations";
    return ok;
  });

  criterion(2, "right-inverse roundtrips, 50 seeded polynomials", 5.0, [](std::string& note) {
    ScenarioParams P;
    P.degree = 20;
    P.trials = 50;
    const auto rep = hartogs::run_scenario("right-inverse", P);
    const bool ok = rep.verdict == ScenarioVerdict::Pass &&
                    row_value(rep, "random_roundtrips") == 50.0 &&
                    row_value(rep, "roundtrip_failures") == 0.0 &&
                    row_value(rep, "max_coefficient_error") == 0.0;
    note = "50/50 exact, zero coefficient error";
    return ok;
  });

  criterion(3, "cutoff witness projection, |m|,n <= 16 box", 0.0, [](std::string& note) {
    const MonomialSum f = hartogs::detail::witness(hartogs::detail::chi_profile("step"));

    // Exact expansion. Frequency matching makes it complete: any index absent
    // from the result has coefficient exactly zero.
    const hartogs::SeriesX g = hartogs::project(f, Domain::HartogsTriangle);
    const ExactComplex* c = g.find(-1, 0);
    bool ok = g.coeffs.size() == 1 && c != nullptr &&
              *c == ExactComplex{Rat(15, 32), Rat(0)};

    int zeros = 0;
    for (int n = 0; n <= 16; ++n)
      for (int m = std::max(-16, -(n + 1)); m <= 16; ++m) {
        if (m == -1 && n == 0) continue;
        ++zeros;
        if (g.find(m, n) != nullptr) ok = false;
      }

    // Independent numeric cross-check on a small box around the coefficient.
    hartogs::ProjectionSpec spec;
    spec.m_min = -2;
    spec.m_max = 2;
    spec.n_max = 2;
    const auto fn = [&f](const hartogs::Point2C& z) { return hartogs::eval(f, z); };
    const hartogs::SeriesD h = hartogs::project(fn, Domain::HartogsTriangle, spec);
    double gap = 0.0;
    for (int n = 0; n <= 2; ++n)
      for (int m = std::max(-2, -(n + 1)); m <= 2; ++m) {
        const hartogs::CxD* hc = h.find(m, n);
        const hartogs::CxD val = hc ? *hc : hartogs::CxD{};
        const hartogs::CxD want = (m == -1 && n == 0) ? hartogs::CxD{15.0 / 32.0, 0.0}
                                                      : hartogs::CxD{};
        gap = std::max(gap, std::abs(val - want));
      }
    ok = ok && gap <= 1e-8;
    note = "coefficient 15/32, " + std::to_string(zeros) +
           " other indices exactly zero, numeric gap " + fmt(gap);
    return ok;
  });

  criterion(4, "divergence rate fit and the q = 7/2 value", 10.0, [](std::string& note) {
    ScenarioParams P;
    P.p = Rat(4, 3);  // conjugate exponent 4: the logarithmic threshold
    const auto rep = hartogs::run_scenario("counterexample", P);
    bool ok = rep.verdict == ScenarioVerdict::Pass;
    const double slope = row_value(rep, "qnorm_fit_slope");
    const double rel_slope = std::abs(slope / (2.0 * kPi2) - 1.0);
    ok = ok && rel_slope <= 0.02;

    // At q = 7/2 the integral of |z1|^{-7/2} converges; the numeric value
    // must land on the exact one, 4 pi^2, to 1e-6 relative.
    const ExactComplex one{Rat(1), Rat(0)};
    const MonomialSum g(hartogs::detail::term(Rat(-7, 2), 0, 0, 0, one));
    const auto num = hartogs::integrate_numeric(g, Domain::HartogsTriangle,
                                                hartogs::WeightSpec::one(),
                                                hartogs::QuadratureSpec{}, 1e-8);
    const double target = 4.0 * kPi2;
    const double rel = std::abs(num.value.real() - target) / target;
    ok = ok && num.verdict == hartogs::Verdict::Converged && rel <= 1e-6;

    const MonomialSum inv_z1(hartogs::detail::term(-1, 0, -1, 0, one));
    const auto ex = hartogs::lp_norm(inv_z1, Rat(7, 2), Domain::HartogsTriangle,
                                     hartogs::WeightSpec::one(), hartogs::QuadratureSpec{},
                                     1e-8);
    ok = ok && ex.exact && ex.exact_value && *ex.exact_value == PiValue::real(4, 2);

    note = "fit slope off by " + fmt(rel_slope) + ", q=7/2 value off by " + fmt(rel);
    return ok;
  });

  criterion(5, "weighted-norm value vs reference, flagged", 0.0, [](std::string& note) {
    const auto rep = hartogs::run_scenario("weighted-norm", ScenarioParams{});
    bool ok = rep.verdict == ScenarioVerdict::Pass;
    const double numeric = row_value(rep, "numeric_value");
    const double reproduced = row_value(rep, "reference_reproduced");
    ok = ok && std::abs(numeric - kPi2) <= 1e-8;
    ok = ok && std::abs(reproduced - 2.0 * kPi2) <= 1e-8;
    const Measurement* flag = find_row(rep, "exact_over_reference");
    ok = ok && flag != nullptr && flag->verdict == "Flagged" && flag->value == 0.5;
    note = "pi^2 and 2 pi^2 both reproduced; ratio 1/2 flagged";
    return ok;
  });

  criterion(6, "weighted isometry, 10 seeded functions", 30.0, [](std::string& note) {
    ScenarioParams P;
    P.trials = 10;
    const auto rep = hartogs::run_scenario("bell-isometry", P);
    bool ok = rep.verdict == ScenarioVerdict::Pass;
    double worst = 0.0;
    for (const char* tag :
         {"max_relative_gap(p=2,alpha=0)", "max_relative_gap(p=3,alpha=1)",
          "max_relative_gap(p=4,alpha=2)"}) {
      const double gap = row_value(rep, tag);
      worst = std::max(worst, gap);
      ok = ok && gap <= 1e-6;
    }
    note = "worst relative gap " + fmt(worst);
    return ok;
  });

  criterion(7, "orthogonality and norms on the index box", 0.0, [](std::string& note) {
    ScenarioParams P;
    P.box = 8;
    const auto rep = hartogs::run_scenario("orthogonality", P);
    const bool ok = rep.verdict == ScenarioVerdict::Pass &&
                    row_value(rep, "nonzero_off_diagonal") == 0.0 &&
                    row_value(rep, "norm_mismatches") == 0.0;
    note = fmt(row_value(rep, "indices")) + " indices, " +
           fmt(row_value(rep, "off_diagonal_pairs")) + " off-diagonal pairs, all exact";
    return ok;
  });

  criterion(8, "p = 2 contraction over 100 samples", 0.0, [](std::string& note) {
    ScenarioParams P;
    P.p = Rat(2);
    P.alpha = Rat(0);
    P.trials = 100;
    const auto rep = hartogs::run_scenario("operator-norm", P);
    const double max_ratio = row_value(rep, "max_ratio");
    const bool ok = rep.verdict != ScenarioVerdict::Fail &&
                    row_value(rep, "contraction_ok") == 1.0 &&
                    max_ratio - 1.0 <= 1e-10;
    note = "max ratio " + fmt(max_ratio);
    return ok;
  });

  criterion(9, "partial-sum tails decrease, N up to 256", 0.0, [](std::string& note) {
    ScenarioParams P;
    P.ps = "2,4";
    P.nmax = 256;
    const auto rep = hartogs::run_scenario("partial-sums", P);
    bool ok = rep.verdict != ScenarioVerdict::Fail;
    for (const char* p : {"2", "4"}) {
      ok = ok && row_value(rep, std::string("tail_monotone(member=log,p=") + p + ")") == 1.0;
      const Measurement* sup = find_row(rep, std::string("sup_ratio(member=log,p=") + p + ")");
      ok = ok && sup != nullptr && sup->verdict == "Measured";
    }
    note = "log-series tails monotone at p = 2 and p = 4";
    return ok;
  });

  criterion(10, "byte-identical repeated runs", 0.0, [](std::string& note) {
    std::string first, second;
    if (const char* cli = std::getenv("HARTOGS_CLI")) {
      const std::string base = std::string(cli) + " verify all --out ";
      if (std::system((base + "/tmp/hartogs_acceptance_1.json").c_str()) != 0) return false;
      if (std::system((base + "/tmp/hartogs_acceptance_2.json").c_str()) != 0) return false;
      first = slurp("/tmp/hartogs_acceptance_1.json");
      second = slurp("/tmp/hartogs_acceptance_2.json");
      note = "full run through the command-line tool, twice";
    } else {
      std::vector<std::pair<std::string, ScenarioParams>> jobs;
      for (const auto& info : hartogs::scenario_catalog()) jobs.emplace_back(info.id, ScenarioParams{});
      const auto render = [&jobs] {
        const auto reports = hartogs::run_scenarios(jobs);
        return hartogs::reports_to_json_text(
            reports, hartogs::serialize_config({{"format", "json"}}, reports));
      };
      first = render();
      second = render();
      note = "full in-process run, twice (set HARTOGS_CLI to route through the tool)";
    }
    return !first.empty() && first == second;
  });

  std::printf("acceptance: %d/10 checks passed\n", 10 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
