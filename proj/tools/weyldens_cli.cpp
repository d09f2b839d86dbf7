// weyldens command-line front end. Links only the C interface.

#include <cfloat>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json_out.hpp"
#include "weyldens/weyldens.h"

namespace {

using weyldens_cli::Json;
using weyldens_cli::to_text;

enum Exit { kOk = 0, kVerifyFailed = 1, kUsage = 2, kDomain = 3 };

constexpr const char* kCsvHeader = "lambda,rho_prime,log10_rho_prime,region";

struct Common {
  std::optional<double> alpha;
  std::optional<double> cot;
  wd_constants constants{};
  wd_tolerances tol{};
  double drift_const = 0.0;

  Common() {
    wd_default_constants(&constants);
    wd_default_tolerances(&tol);
    drift_const = wd_default_drift_const();
  }
};

struct Context {
  wd_context* ptr = nullptr;
  Context() = default;
  Context(const Context&) = delete;
  Context& operator=(const Context&) = delete;
  ~Context() { wd_context_destroy(ptr); }
};

int report_status(wd_status s) {
  std::fprintf(stderr, "weyldens: %s: %s\n", wd_status_name(s), wd_last_error());
  return s == WD_INVALID_ARGUMENT ? kUsage : kDomain;
}

void add_common(CLI::App* app, Common& c) {
  auto* alpha = app->add_option("--alpha", c.alpha, "Boundary angle in radians (default pi/4)");
  auto* cot = app->add_option("--cot", c.cot, "Set alpha = arccot(value) instead");
  alpha->excludes(cot);
  app->add_option("--c1", c.constants.c1, "Upper eps for the region bounds")->capture_default_str();
  app->add_option("--c2", c.constants.c2, "Near-zero region starts at -c2 eps^(2/3)")->capture_default_str();
  app->add_option("--c3", c.constants.c3, "Upper eps for the resonance bracket")->capture_default_str();
  app->add_option("--big-o-const", c.constants.big_o_const, "Constant in the region envelopes")->capture_default_str();
  app->add_option("--root-rel", c.tol.root_rel, "Root bracket width relative to |lambda0|")->capture_default_str();
  app->add_option("--kernel-rel", c.tol.kernel_rel, "Kernel quadrature relative tolerance")->capture_default_str();
  app->add_option("--mass-rel", c.tol.mass_rel, "Peak quadrature relative tolerance")->capture_default_str();
  app->add_option("--cross-check-rel", c.tol.cross_check_rel, "Allowed substituted/plain peak disagreement")
      ->capture_default_str();
  app->add_option("--drift-const", c.drift_const, "C in ctg^4 |drift residual| <= C eps^2")->capture_default_str();
}

// Builds the context and applies overrides; returns an exit code on failure.
std::optional<int> open(const Common& c, Context& ctx) {
  wd_status s = c.cot ? wd_context_create_cot(*c.cot, &ctx.ptr)
                      : wd_context_create_alpha(c.alpha.value_or(std::numbers::pi / 4), &ctx.ptr);
  if (s == WD_OK) s = wd_set_constants(ctx.ptr, &c.constants);
  if (s == WD_OK) s = wd_set_tolerances(ctx.ptr, &c.tol);
  if (s == WD_OK) s = wd_set_drift_const(ctx.ptr, c.drift_const);
  if (s != WD_OK) {
    std::fprintf(stderr, "weyldens: invalid configuration: %s\n", wd_last_error());
    return kUsage;
  }
  return std::nullopt;
}

Json boundary_json(const wd_context* ctx) {
  double alpha = 0.0;
  double cot = 0.0;
  wd_boundary(ctx, &alpha, &cot);
  Json j;
  j["alpha"] = alpha;
  j["cot_alpha"] = cot;
  return j;
}

double linear_value(const wd_scaled& x) {
  if (x.sign == 0 || x.log_mag < std::log(DBL_MIN)) return 0.0;
  return x.sign * std::exp(x.log_mag);
}

double log10_value(const wd_scaled& x) {
  return x.sign > 0 ? x.log_mag / std::numbers::ln10 : std::numeric_limits<double>::quiet_NaN();
}

bool write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return true;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::fprintf(stderr, "weyldens: cannot write %s\n", path.c_str());
    return false;
  }
  return true;
}

std::string sci(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

struct SweepArgs {
  double eps = 0.0;
  double lmin = -3.0;
  double lmax = -0.01;
  std::size_t n = 100;
  std::string format = "csv";
  std::string output;
  unsigned threads = 0;
};

int cmd_sweep(const Common& c, const SweepArgs& a) {
  if (!(a.eps > 0.0) || !(a.lmin <= a.lmax) || !(a.lmax < 0.0) || a.n == 0) {
    std::fprintf(stderr, "weyldens: sweep needs eps > 0, lmin <= lmax < 0 and n >= 1\n");
    return kUsage;
  }
  Context ctx;
  if (auto rc = open(c, ctx)) return *rc;
  std::vector<wd_sweep_row> rows(a.n);
  if (wd_status s = wd_sweep(ctx.ptr, a.eps, a.lmin, a.lmax, a.n, a.threads, rows.data()); s != WD_OK)
    return report_status(s);

  bool any_failed = false;
  std::string text;
  if (a.format == "csv") {
    text = std::string(kCsvHeader) + "\n";
    for (const auto& r : rows) {
      text += sci(r.lambda) + ",";
      if (r.status == WD_OK) {
        text += sci(linear_value(r.rho_prime)) + "," + sci(log10_value(r.rho_prime)) + "," + wd_region_name(r.region);
      } else {
        any_failed = true;
        text += std::string("nan,nan,error:") + wd_status_name(r.status);
      }
      text += "\n";
    }
  } else {
    Json j = boundary_json(ctx.ptr);
    j["eps"] = a.eps;
    Json arr = Json::array();
    for (const auto& r : rows) {
      Json row;
      row["lambda"] = r.lambda;
      if (r.status == WD_OK) {
        row["rho_prime"] = linear_value(r.rho_prime);
        row["log10_rho_prime"] = log10_value(r.rho_prime);
      } else {
        any_failed = true;
        row["rho_prime"] = nullptr;
        row["log10_rho_prime"] = nullptr;
        row["error"] = wd_status_name(r.status);
      }
      row["region"] = wd_region_name(r.region);
      arr.push_back(std::move(row));
    }
    j["rows"] = std::move(arr);
    text = to_text(j);
  }
  if (!write_output(a.output, text)) return kDomain;
  return any_failed ? kDomain : kOk;
}

Json resonance_json(const wd_context* ctx, const wd_resonance_report& r) {
  Json j = boundary_json(ctx);
  j["eps"] = r.eps;
  j["lambda1"] = r.lambda1;
  j["width"] = r.width;
  j["mass"] = r.mass;
  j["d_used"] = r.d_used;
  j["drift_prediction"] = r.drift_prediction;
  j["drift_residual"] = r.drift_residual;
  return j;
}

int cmd_resonance(const Common& c, const std::vector<double>& eps_list, double d, const std::string& output) {
  Context ctx;
  if (auto rc = open(c, ctx)) return *rc;
  Json reports = Json::array();
  int rc = kOk;
  for (double eps : eps_list) {
    wd_resonance_report r{};
    const wd_status s = wd_analyze(ctx.ptr, eps, d, &r);
    if (s == WD_OK) {
      reports.push_back(resonance_json(ctx.ptr, r));
      continue;
    }
    // The zero may still be located when the peak itself is unresolvable.
    const std::string reason = wd_last_error();
    double lambda1 = 0.0;
    if (s == WD_INVALID_ARGUMENT || wd_locate_zero(ctx.ptr, eps, &lambda1) != WD_OK) return report_status(s);
    std::fprintf(stderr, "weyldens: %s: %s\n", wd_status_name(s), reason.c_str());
    double alpha = 0.0, cot = 0.0;
    wd_boundary(ctx.ptr, &alpha, &cot);
    r.eps = eps;
    r.lambda1 = lambda1;
    r.width = r.mass = std::numeric_limits<double>::quiet_NaN();
    r.d_used = d > 0.0 ? d : eps * eps;
    r.drift_prediction = -cot * cot - 0.5 * eps / cot;
    r.drift_residual = lambda1 - r.drift_prediction;
    Json j = resonance_json(ctx.ptr, r);
    j["error"] = wd_status_name(s);
    reports.push_back(std::move(j));
    rc = kDomain;
  }
  const Json& out = reports.size() == 1 ? reports[0] : reports;
  return write_output(output, to_text(out)) ? rc : kDomain;
}

int cmd_mass(const Common& c, double eps, double d, const std::string& output) {
  Context ctx;
  if (auto rc = open(c, ctx)) return *rc;
  wd_peak_mass pm{};
  if (wd_status s = wd_peak_mass_compute(ctx.ptr, eps, d, &pm); s != WD_OK) return report_status(s);
  double location = 0.0;
  double expected = 0.0;
  wd_baseline_point_mass(ctx.ptr, &location, &expected);
  Json j = boundary_json(ctx.ptr);
  j["eps"] = eps;
  j["d"] = pm.d;
  j["mass"] = pm.mass;
  j["mass_unsubstituted"] = pm.mass_unsubstituted;
  j["expected_mass"] = expected;
  j["lambda1"] = pm.lambda1;
  j["width"] = pm.width;
  j["in_admissible_window"] = pm.in_admissible_window != 0;
  j["achieved_rel_tol"] = pm.achieved_rel_tol;
  return write_output(output, to_text(j)) ? kOk : kDomain;
}

int cmd_baseline(const Common& c, const std::vector<double>& lambdas, double eps, const std::string& output) {
  for (double l : lambdas) {
    if (!(l > 0.0)) {
      std::fprintf(stderr, "weyldens: baseline points must be positive, got %g\n", l);
      return kUsage;
    }
  }
  if (!(eps > 0.0)) {
    std::fprintf(stderr, "weyldens: baseline needs eps > 0\n");
    return kUsage;
  }
  Context ctx;
  if (auto rc = open(c, ctx)) return *rc;
  Json j = boundary_json(ctx.ptr);
  j["eps"] = eps;
  double location = 0.0;
  double mass = 0.0;
  wd_baseline_point_mass(ctx.ptr, &location, &mass);
  j["point_mass"] = {{"location", location}, {"mass", mass}};
  Json points = Json::array();
  for (double l : lambdas) {
    double base = 0.0;
    if (wd_status s = wd_baseline_positive(ctx.ptr, l, &base); s != WD_OK) return report_status(s);
    Json p;
    p["lambda"] = l;
    p["baseline"] = base;
    double oracle = 0.0;
    if (wd_status s = wd_oracle_rho_prime(ctx.ptr, l, eps, &oracle); s == WD_OK) {
      p["oracle"] = oracle;
      p["rel_error"] = std::fabs(oracle - base) / base;
    } else {
      p["oracle"] = nullptr;
      p["rel_error"] = nullptr;
      p["error"] = wd_status_name(s);
    }
    points.push_back(std::move(p));
  }
  j["points"] = std::move(points);
  return write_output(output, to_text(j)) ? kOk : kDomain;
}

int cmd_verify(const Common& c, const std::string& suite, const std::string& report_path) {
  std::vector<std::string> suites;
  for (std::size_t i = 0; i < wd_suite_count(); ++i)
    if (suite == "all" || suite == wd_suite_name(i)) suites.emplace_back(wd_suite_name(i));
  if (suites.empty()) {
    std::fprintf(stderr, "weyldens: unknown suite '%s'; expected all", suite.c_str());
    for (std::size_t i = 0; i < wd_suite_count(); ++i) std::fprintf(stderr, ", %s", wd_suite_name(i));
    std::fprintf(stderr, "\n");
    return kUsage;
  }
  Context ctx;
  if (auto rc = open(c, ctx)) return *rc;

  bool all_pass = true;
  Json out;
  out["version"] = wd_version();
  Json arr = Json::array();
  for (const auto& name : suites) {
    wd_report* rep = nullptr;
    if (wd_status s = wd_verify(ctx.ptr, name.c_str(), &rep); s != WD_OK) return report_status(s);
    const bool pass = wd_report_pass(rep) != 0;
    all_pass = all_pass && pass;
    Json js;
    js["suite"] = name;
    js["pass"] = pass;
    js["seconds"] = wd_report_seconds(rep);
    Json checks = Json::array();
    std::printf("suite %s\n", name.c_str());
    for (std::size_t i = 0; i < wd_report_check_count(rep); ++i) {
      wd_check chk{};
      wd_report_check(rep, i, &chk);
      const char* rel = chk.relation == WD_LESS_EQUAL ? "<=" : ">=";
      std::printf("  %-4s [%d] %-38s %13.6e %s %-13.6e %s\n", chk.pass ? "PASS" : "FAIL", chk.criterion, chk.name,
                  chk.value, rel, chk.threshold, chk.detail);
      Json jc;
      jc["name"] = chk.name;
      jc["criterion"] = chk.criterion;
      jc["pass"] = chk.pass != 0;
      jc["value"] = chk.value;
      jc["relation"] = rel;
      jc["threshold"] = chk.threshold;
      jc["detail"] = chk.detail;
      checks.push_back(std::move(jc));
    }
    std::printf("  => %s (%.2f s)\n", pass ? "PASS" : "FAIL", wd_report_seconds(rep));
    js["checks"] = std::move(checks);
    arr.push_back(std::move(js));
    wd_report_destroy(rep);
  }
  out["pass"] = all_pass;
  out["suites"] = std::move(arr);
  std::fflush(stdout);
  if (!report_path.empty() && !write_output(report_path, to_text(out))) return kDomain;
  return all_pass ? kOk : kVerifyFailed;
}

int cmd_print_config(const Common& c) {
  Context ctx;
  if (auto rc = open(c, ctx)) return *rc;
  wd_constants k{};
  wd_tolerances t{};
  wd_get_constants(ctx.ptr, &k);
  wd_get_tolerances(ctx.ptr, &t);
  Json j;
  j["version"] = wd_version();
  Json b = boundary_json(ctx.ptr);
  j["alpha"] = b["alpha"];
  j["cot_alpha"] = b["cot_alpha"];
  j["constants"] = {{"c1", k.c1}, {"c2", k.c2}, {"c3", k.c3}, {"big_o_const", k.big_o_const}};
  j["tolerances"] = {{"root_rel", t.root_rel},
                     {"kernel_rel", t.kernel_rel},
                     {"mass_rel", t.mass_rel},
                     {"cross_check_rel", t.cross_check_rel}};
  j["drift_const"] = c.drift_const;
  const unsigned cap = wd_thread_cap();
  j["threads_cap"] = cap ? Json(cap) : Json(nullptr);
  j["csv_header"] = kCsvHeader;
  std::fputs(to_text(j).c_str(), stdout);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral density of the Stark-perturbed half-line Schrodinger operator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", wd_version());

  Common common;
  SweepArgs sweep;
  auto* sw = app.add_subcommand("sweep", "Evaluate rho' on an evenly spaced lambda grid");
  add_common(sw, common);
  sw->add_option("--eps", sweep.eps, "Perturbation strength")->required();
  sw->add_option("--lmin", sweep.lmin, "Left end of the grid")->capture_default_str();
  sw->add_option("--lmax", sweep.lmax, "Right end of the grid (< 0)")->capture_default_str();
  sw->add_option("--n", sweep.n, "Number of grid points")->capture_default_str();
  sw->add_option("--format", sweep.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  sw->add_option("--output,-o", sweep.output, "Output file (default stdout)");
  sw->add_option("--threads", sweep.threads, "Worker threads; 0 = all cores capped by WEYL_DENS_THREADS")
      ->capture_default_str();

  std::vector<double> eps_list;
  double d = 0.0;
  std::string output;
  auto* res = app.add_subcommand("resonance", "Locate the resonance and integrate its peak");
  add_common(res, common);
  res->add_option("--eps", eps_list, "Perturbation strength; several values give a JSON array")
      ->required()
      ->delimiter(',');
  res->add_option("--d", d, "Peak window half-width (default eps^2)");
  res->add_option("--output,-o", output, "Output file (default stdout)");

  double mass_eps = 0.0;
  auto* ms = app.add_subcommand("mass", "Peak mass over [lambda1 - d, lambda1 + d]");
  add_common(ms, common);
  ms->add_option("--eps", mass_eps, "Perturbation strength")->required();
  ms->add_option("--d", d, "Peak window half-width (default eps^2)");
  ms->add_option("--output,-o", output, "Output file (default stdout)");

  std::string suite = "all";
  std::string report;
  auto* vf = app.add_subcommand("verify", "Run validation suites");
  add_common(vf, common);
  vf->add_option("--suite", suite, "all, oracle, thm1, thm2, thm3, corollary, baseline or quad")
      ->capture_default_str();
  vf->add_option("--report", report, "Write a JSON report to this file");

  std::vector<double> lambdas = {0.5, 1.0, 2.0};
  double base_eps = 1e-3;
  auto* bl = app.add_subcommand("baseline", "Unperturbed density against the small-eps reference");
  add_common(bl, common);
  bl->add_option("--lambda", lambdas, "Positive spectral points")->delimiter(',')->capture_default_str();
  bl->add_option("--eps", base_eps, "eps for the reference values")->capture_default_str();
  bl->add_option("--output,-o", output, "Output file (default stdout)");

  auto* pc = app.add_subcommand("print-config", "Print the effective configuration as JSON");
  add_common(pc, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (sw->parsed()) return cmd_sweep(common, sweep);
  if (res->parsed()) return cmd_resonance(common, eps_list, d, output);
  if (ms->parsed()) return cmd_mass(common, mass_eps, d, output);
  if (vf->parsed()) return cmd_verify(common, suite, report);
  if (bl->parsed()) return cmd_baseline(common, lambdas, base_eps, output);
  return cmd_print_config(common);
}
