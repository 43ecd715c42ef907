// hartogs_cli: command-line front end for the verification scenarios and the
// norm / projection machinery.
//
//   hartogs_cli list
//   hartogs_cli verify tmu counterexample --p 5/4
//   hartogs_cli verify all --config run.ini --out report.json
//   hartogs_cli norm --f inv-z1 --p 4 --weight none
//   hartogs_cli project --f counterexample --m-min -2 --m-max 2 --n-max 2
//   hartogs_cli scan --f inv-z1 --param q --from 3 --to 6 --steps 7
//
// Exit status: 0 when every check passes, 1 when a scenario reports Fail (or a
// computation aborts), 2 for usage or configuration errors; the diagnostic
// names the offending field. Diverged or Inconclusive results are data, not
// errors, and do not affect the exit status.

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "hartogs/scenarios.hpp"

namespace {

using hartogs::Domain;
using hartogs::ExactComplex;
using hartogs::IntegrationResult;
using hartogs::MonomialSum;
using hartogs::Rat;
using hartogs::ScenarioParams;
using hartogs::WeightSpec;

// Every tunable is routed through apply_param so flags, config files, and the
// embedded report config share one vocabulary and one set of diagnostics.
// Listed in application order: p before q so an explicit pair is checked for
// consistency rather than silently overwritten.
constexpr std::pair<const char*, const char*> kParamFlags[] = {
    {"--p", "p"},
    {"--q", "q"},
    {"--alpha", "alpha"},
    {"--beta", "beta"},
    {"--chi", "chi"},
    {"--combos", "combos"},
    {"--ps", "ps"},
    {"--mu-max", "mu_max"},
    {"--box", "box"},
    {"--degree", "degree"},
    {"--trials", "trials"},
    {"--samples", "samples"},
    {"--nmax", "nmax"},
    {"--seed", "seed"},
    {"--tol", "tol"},
    {"--m-min", "m_min"},
    {"--m-max", "m_max"},
    {"--n-max", "n_max"},
    {"--radial-order", "radial_order"},
    {"--angular-order", "angular_order"},
    {"--grading-levels", "grading_levels"},
    {"--refinement-cap", "refinement_cap"},
    {"--secondary-levels", "secondary_levels"},
};

struct ParamArgs {
  CLI::App* cmd = nullptr;
  std::deque<std::string> holders;

  void attach(CLI::App* c) {
    cmd = c;
    for (const auto& [flag, key] : kParamFlags) {
      holders.emplace_back();
      c->add_option(flag, holders.back(), std::string("parameter '") + key + "'");
    }
  }

  // (key, value) pairs for the flags the user actually passed, in table order.
  std::vector<std::pair<std::string, std::string>> given() const {
    std::vector<std::pair<std::string, std::string>> out;
    std::size_t i = 0;
    for (const auto& [flag, key] : kParamFlags) {
      if (cmd->count(flag) > 0) out.emplace_back(key, holders[i]);
      ++i;
    }
    return out;
  }

  ScenarioParams params(const ScenarioParams& base = {}) const {
    ScenarioParams P = base;
    for (const auto& [k, v] : given()) hartogs::apply_param(P, k, v);
    return P;
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write output file '" + path + "'");
  out << text;
}

// --- function / weight catalogs ------------------------------------------------

MonomialSum make_source(const std::string& name, Domain d, const std::string& chi) {
  using hartogs::detail::term;
  const ExactComplex one{Rat(1), Rat(0)};
  if (name == "one") return MonomialSum(term(0, 0, 0, 0, one));
  if (name == "inv-z1") return MonomialSum(term(-1, 0, -1, 0, one));
  if (name == "conj-z1") return MonomialSum(term(1, 0, -1, 0, one));
  if (name == "counterexample")
    return hartogs::detail::witness(hartogs::detail::chi_profile(chi));
  if (name.rfind("monomial:", 0) == 0) {
    const std::string idx = name.substr(9);
    const auto comma = idx.find(',');
    const int m = hartogs::detail::parse_int("f", idx.substr(0, comma));
    const int n =
        comma == std::string::npos ? 0 : hartogs::detail::parse_int("f", idx.substr(comma + 1));
    return MonomialSum::from_series(hartogs::monomial_series(d, m, n));
  }
  throw std::invalid_argument("parameter 'f': unknown function '" + name +
                              "' (expected one, inv-z1, conj-z1, counterexample, or "
                              "monomial:M[,N])");
}

WeightSpec make_weight(const std::string& s) {
  if (s == "none") return WeightSpec::one();
  if (s.rfind("delta1^", 0) == 0) return WeightSpec::power_delta1(hartogs::parse_rat(s.substr(7)));
  throw std::invalid_argument("parameter 'weight': unknown weight '" + s +
                              "' (expected none or delta1^R)");
}

std::string csv_field(const std::string& s) {
  if (s.find(',') == std::string::npos && s.find('"') == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

double rate_of(const IntegrationResult& r) {
  switch (r.kind) {
    case hartogs::DivergenceKind::Logarithmic: return r.log_slope;
    case hartogs::DivergenceKind::PowerLaw: return r.power_exponent;
    default: return 0.0;
  }
}

// --- subcommands ----------------------------------------------------------------

int cmd_list(const std::string& out_path) {
  std::string text;
  for (const auto& info : hartogs::scenario_catalog()) {
    text += info.id;
    text += "\n    ";
    text += info.claim;
    text += "\n";
  }
  write_output(out_path, text);
  return 0;
}

int cmd_verify(std::vector<std::string> ids, const std::string& config_path,
               const ParamArgs& flags, bool timings, std::string format, bool format_given,
               const std::string& out_path) {
  hartogs::ConfigFile cfg;
  if (!config_path.empty()) cfg = hartogs::parse_config(read_file(config_path));

  // 'format' is a reserved [global] key consumed here, not a scenario
  // parameter; an explicit --format flag wins over the config file.
  if (const std::string* v = cfg.find("global", "format")) {
    if (*v != "json" && *v != "csv")
      throw std::invalid_argument("parameter 'format': expected json or csv, got '" + *v + "'");
    if (!format_given) format = *v;
    cfg.sections["global"].erase("format");
  }
  const ScenarioParams base = hartogs::params_from_config(cfg, "global");

  if (ids.size() == 1 && ids[0] == "all") ids.clear();
  if (ids.empty()) {
    // No explicit ids: run everything the config mentions, else the whole
    // catalog, in catalog order either way.
    for (const auto& info : hartogs::scenario_catalog())
      if (cfg.sections.empty() || cfg.sections.count(info.id)) ids.push_back(info.id);
    if (ids.empty())
      for (const auto& info : hartogs::scenario_catalog()) ids.push_back(info.id);
  }

  std::vector<std::pair<std::string, ScenarioParams>> jobs;
  for (const auto& id : ids) {
    hartogs::find_scenario(id);  // unknown ids are rejected before anything runs
    ScenarioParams P = hartogs::params_from_config(cfg, id, base);
    for (const auto& [k, v] : flags.given()) hartogs::apply_param(P, k, v);
    P.timings = timings;
    jobs.emplace_back(id, std::move(P));
  }

  const auto reports = hartogs::run_scenarios(jobs);
  const std::string embedded = hartogs::serialize_config({{"format", format}}, reports);
  const std::string text = format == "csv" ? hartogs::reports_to_csv_text(reports)
                                           : hartogs::reports_to_json_text(reports, embedded);
  write_output(out_path, text);

  const bool failed = std::any_of(reports.begin(), reports.end(), [](const auto& r) {
    return r.verdict == hartogs::ScenarioVerdict::Fail;
  });
  return failed ? 1 : 0;
}

int cmd_norm(const ParamArgs& flags, const std::string& f_name, const std::string& domain,
             const std::string& weight, const std::string& out_path) {
  const ScenarioParams P = flags.params();
  const Domain d = hartogs::domain_from_tag(domain);
  const MonomialSum f = make_source(f_name, d, P.chi);
  const WeightSpec w = make_weight(weight);
  const Rat p = P.p.value_or(Rat(2));

  const IntegrationResult r = hartogs::lp_norm(f, p, d, w, P.quad, P.tol);
  std::string text = "f,domain,p,weight,value,error_estimate,verdict,kind,rate,exact_integral,exact_rate\n";
  text += csv_field(f_name) + "," + domain + "," + hartogs::rat_to_string(p) + "," + weight + "," +
          hartogs::format_sig17(r.value.real()) + "," + hartogs::format_sig17(r.error_estimate) +
          "," + hartogs::detail::verdict_of(r) + "," + hartogs::to_string(r.kind) + "," +
          hartogs::format_sig17(rate_of(r)) + "," +
          (r.exact_value ? hartogs::to_string(*r.exact_value) : "") + "," +
          (r.exact_slope ? hartogs::to_string(*r.exact_slope) : "") + "\n";
  write_output(out_path, text);
  return 0;
}

int cmd_project(const ParamArgs& flags, const std::string& f_name, const std::string& domain,
                const std::string& backend, const std::string& out_path) {
  const ScenarioParams P = flags.params();
  const Domain d = hartogs::domain_from_tag(domain);
  const MonomialSum f = make_source(f_name, d, P.chi);

  hartogs::ProjectionSpec spec = P.proj;
  spec.quad = P.quad;
  spec.tol = P.tol;

  std::string text = "m,n,re,im,exact\n";
  if (backend == "exact") {
    const hartogs::SeriesX g = hartogs::project(f, d, spec);
    for (const auto& [idx, c] : g.coeffs)
      text += std::to_string(idx.m) + "," + std::to_string(idx.n) + "," +
              hartogs::format_sig17(hartogs::to_double(c.re)) + "," +
              hartogs::format_sig17(hartogs::to_double(c.im)) + "," + hartogs::to_string(c) + "\n";
  } else if (backend == "numeric") {
    const auto fn = [&f](const hartogs::Point2C& z) { return hartogs::eval(f, z); };
    const hartogs::SeriesD g = hartogs::project(fn, d, spec);
    for (const auto& [idx, c] : g.coeffs)
      text += std::to_string(idx.m) + "," + std::to_string(idx.n) + "," +
              hartogs::format_sig17(c.real()) + "," + hartogs::format_sig17(c.imag()) + ",\n";
  } else {
    throw std::invalid_argument("parameter 'backend': expected exact or numeric");
  }
  write_output(out_path, text);
  return 0;
}

int cmd_scan(const ParamArgs& flags, const std::string& f_name, const std::string& domain,
             const std::string& weight, const std::string& param, const std::string& from_s,
             const std::string& to_s, int steps, const std::string& out_path) {
  if (param != "p" && param != "q")
    throw std::invalid_argument("parameter 'param': expected p or q");
  if (steps < 1) throw std::invalid_argument("parameter 'steps': must be at least 1");
  const Rat from = hartogs::parse_rat(from_s);
  const Rat to = hartogs::parse_rat(to_s);
  if (from <= 0 || to <= 0)
    throw std::invalid_argument("parameter 'from/to': exponents must be positive");

  const ScenarioParams P = flags.params();
  const Domain d = hartogs::domain_from_tag(domain);
  const MonomialSum f = make_source(f_name, d, P.chi);
  const WeightSpec w = make_weight(weight);

  std::string text = param + ",value,error_estimate,verdict,kind,rate\n";
  for (int i = 0; i < steps; ++i) {
    // Exact rational grid so the ladder analysis stays on the exact route.
    const Rat e = steps == 1 ? from : from + Rat(i) * (to - from) / Rat(steps - 1);
    const IntegrationResult r = hartogs::lp_norm(f, e, d, w, P.quad, P.tol);
    text += hartogs::rat_to_string(e) + "," + hartogs::format_sig17(r.value.real()) + "," +
            hartogs::format_sig17(r.error_estimate) + "," + hartogs::detail::verdict_of(r) + "," +
            hartogs::to_string(r.kind) + "," + hartogs::format_sig17(rate_of(r)) + "\n";
  }
  write_output(out_path, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted Bergman projection toolkit for the Hartogs triangle and model domains"};
  app.require_subcommand(0, 1);

  bool list_flag = false;
  app.add_flag("--list", list_flag, "enumerate the verification scenarios and exit");
  int workers = 0;
  app.add_option("--workers", workers, "worker thread count (default: HARTOGS_WORKERS or 1)")
      ->check(CLI::PositiveNumber);

  auto* list_cmd = app.add_subcommand("list", "enumerate the verification scenarios");
  std::string list_out;
  list_cmd->add_option("--out", list_out, "write to this file instead of stdout");
  list_cmd->fallthrough();

  auto* verify = app.add_subcommand("verify", "run verification scenarios and emit a report");
  std::vector<std::string> verify_ids;
  verify->add_option("ids", verify_ids, "scenario ids, or 'all'");
  std::string verify_config, verify_out, verify_format = "json";
  verify->add_option("--config", verify_config, "INI file with [global] and per-scenario sections")
      ->check(CLI::ExistingFile);
  verify->add_option("--out", verify_out, "write the report to this file instead of stdout");
  verify->add_option("--format", verify_format, "report format (default: json)")
      ->check(CLI::IsMember({"json", "csv"}));
  bool verify_timings = false;
  verify->add_flag("--timings", verify_timings,
                   "record wall-clock runtimes (the report stops being byte-reproducible)");
  ParamArgs verify_params;
  verify_params.attach(verify);
  verify->fallthrough();

  const std::vector<std::string> domains = {"hartogs", "disc", "punctured-disc", "bidisc",
                                            "punctured-bidisc"};

  auto* norm = app.add_subcommand("norm", "compute a weighted p-norm of a catalog function");
  std::string norm_f, norm_domain = "hartogs", norm_weight = "none", norm_out;
  norm->add_option("--f", norm_f, "one, inv-z1, conj-z1, counterexample, or monomial:M[,N]")
      ->required();
  norm->add_option("--domain", norm_domain)->check(CLI::IsMember(domains));
  norm->add_option("--weight", norm_weight, "none or delta1^R");
  norm->add_option("--out", norm_out, "write the CSV to this file instead of stdout");
  ParamArgs norm_params;
  norm_params.attach(norm);
  norm->fallthrough();

  auto* project = app.add_subcommand("project", "expand the projection of a catalog function");
  std::string proj_f, proj_domain = "hartogs", proj_backend = "exact", proj_out;
  project->add_option("--f", proj_f, "one, inv-z1, conj-z1, counterexample, or monomial:M[,N]")
      ->required();
  project->add_option("--domain", proj_domain)->check(CLI::IsMember(domains));
  project->add_option("--backend", proj_backend, "exact or numeric (numeric uses the box flags)");
  project->add_option("--out", proj_out, "write the CSV to this file instead of stdout");
  ParamArgs project_params;
  project_params.attach(project);
  project->fallthrough();

  auto* scan = app.add_subcommand("scan", "sweep a norm exponent and tabulate the verdicts");
  std::string scan_f, scan_domain = "hartogs", scan_weight = "none", scan_param = "p";
  std::string scan_from, scan_to, scan_out;
  int scan_steps = 7;
  scan->add_option("--f", scan_f, "one, inv-z1, conj-z1, counterexample, or monomial:M[,N]")
      ->required();
  scan->add_option("--domain", scan_domain)->check(CLI::IsMember(domains));
  scan->add_option("--weight", scan_weight, "none or delta1^R");
  scan->add_option("--param", scan_param, "name of the swept exponent: p or q");
  scan->add_option("--from", scan_from, "first exponent (rational)")->required();
  scan->add_option("--to", scan_to, "last exponent (rational)")->required();
  scan->add_option("--steps", scan_steps, "number of grid points (default: 7)");
  scan->add_option("--out", scan_out, "write the CSV to this file instead of stdout");
  ParamArgs scan_params;
  scan_params.attach(scan);
  scan->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (workers > 0) setenv("HARTOGS_WORKERS", std::to_string(workers).c_str(), 1);

  try {
    if (list_flag || app.got_subcommand(list_cmd)) return cmd_list(list_out);
    if (app.got_subcommand(verify))
      return cmd_verify(verify_ids, verify_config, verify_params, verify_timings, verify_format,
                        verify->count("--format") > 0, verify_out);
    if (app.got_subcommand(norm)) return cmd_norm(norm_params, norm_f, norm_domain, norm_weight, norm_out);
    if (app.got_subcommand(project))
      return cmd_project(project_params, proj_f, proj_domain, proj_backend, proj_out);
    if (app.got_subcommand(scan))
      return cmd_scan(scan_params, scan_f, scan_domain, scan_weight, scan_param, scan_from,
                      scan_to, scan_steps, scan_out);
    std::cout << app.help();
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "hartogs_cli: configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "hartogs_cli: error: " << e.what() << "\n";
    return 1;
  }
}
