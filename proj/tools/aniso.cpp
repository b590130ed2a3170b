#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "aniso/measure.hpp"
#include "aniso/report.hpp"

using namespace aniso;
using nlohmann::json;

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return json::parse(in);
}

bool all_pass(const VerdictMap& v) {
  for (const auto& [k, x] : v)
    if (!x.pass) return false;
  return true;
}

int cmd_run(const std::string& config, const std::string& out, const std::string& mode) {
  RunConfig cfg = load_config(config);
  if (!mode.empty()) cfg.bootstrap_mode = mode;
  RunResult r = run_simulation(cfg, [](const DiagnosticsRow& row) {
    std::fprintf(stderr, "t=%6.2f E0=%.4e K0=%.4e\n", row.t, row.E[0], row.K[0]);
  });
  VerdictMap v = run_verdicts(r);
  std::string dir = out.empty() ? "runs/" + cfg.name : out;
  emit_report(dir, r, v);
  std::cout << verdict_json(v).dump(2) << "\n";
  return all_pass(v) ? 0 : 1;
}

int cmd_verify(const std::string& config) {
  json j = read_json(config);
  int n = j.value("grid", json::object()).value("n", 64);
  double L = j.value("grid", json::object()).value("L", 16.0);
  bool ok = true;
  json out = json::array();
  for (const auto& r : verify_identities(n, L)) {
    out.push_back({{"check", r.check}, {"resolution", r.resolution}, {"lhs", r.lhs}, {"rhs", r.rhs},
                   {"residual", r.residual}, {"constant", r.tolerance_used}, {"pass", r.pass}});
    ok = ok && r.pass;
  }
  std::cout << out.dump(2) << "\n";
  return ok ? 0 : 1;
}

int cmd_measure(const std::string& config, const std::string& out) {
  json j = read_json(config);
  measure::SweepSpec s;
  s.k_min = j.value("k_min", s.k_min);
  s.k_max = j.value("k_max", s.k_max);
  s.l_min = j.value("l_min", s.l_min);
  s.l_max = j.value("l_max", s.l_max);
  if (j.contains("betas")) s.betas = j["betas"].get<std::vector<double>>();
  if (j.contains("mus")) s.mus = j["mus"].get<std::vector<int>>();
  s.mc_samples = j.value("mc_samples", s.mc_samples);
  s.seed = j.value("seed", s.seed);
  if (const char* e = std::getenv("ANISO_SEED")) s.seed = std::strtoull(e, nullptr, 10);
  auto rep = measure::measure_lemma_sweep(s);
  std::ostringstream csv;
  csv << "k,l,beta,mu,measure_quad,measure_mc,mc_stderr,ratio\n";
  for (const auto& r : rep.rows) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%d,%d,%.6g,%d,%.12e,%.12e,%.12e,%.12e\n", r.k, r.l, r.beta, r.mu,
                  r.measure_quad, r.measure_mc, r.mc_stderr, r.ratio);
    csv << buf;
  }
  if (out.empty()) std::cout << csv.str();
  else write_text(out, csv.str());
  bool finite = std::isfinite(rep.max_ratio);
  std::fprintf(stderr, "max ratio %.6f at k=%d l=%d beta=%g mu=%d\n", rep.max_ratio, rep.argmax.k,
               rep.argmax.l, rep.argmax.beta, rep.argmax.mu);
  return finite ? 0 : 1;
}

int cmd_fit(const std::string& csv, const std::string& col, const std::vector<double>& window) {
  CsvTable t = read_csv(csv);
  auto ts = t.column("t");
  double lo = window.size() == 2 ? window[0] : ts.empty() ? 0.0 : ts.back() / 2.0;
  double hi = window.size() == 2 ? window[1] : ts.empty() ? 0.0 : ts.back();
  FitResult f = decay_fit(ts, t.column(col), lo, hi);
  json j = {{"column", col}, {"exponent", f.exponent}, {"stderr", f.stderr_}, {"window", {lo, hi}},
            {"r2", f.r2}, {"samples", f.samples}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_report(const std::string& dir) {
  CsvTable t = read_csv(dir + "/diagnostics.csv");
  json v = read_json(dir + "/verdict.json");
  auto ts = t.column("t");
  for (std::size_t c = 1; c < t.header.size(); ++c) {
    if (t.header[c].rfind("cone_", 0) == 0) continue;
    write_text(dir + "/" + t.header[c] + ".svg", loglog_svg(t.header[c], ts, t.column(t.header[c])));
  }
  bool ok = true;
  for (auto& [k, x] : v.items()) {
    std::printf("%-28s %s value=%.6e bound=%.6e\n", k.c_str(), x["pass"].get<bool>() ? "PASS" : "FAIL",
                x["value"].get<double>(), x["bound"].get<double>());
    ok = ok && x["pass"].get<bool>();
  }
  std::printf("%zu rows\n", t.rows.size());
  return ok ? 0 : 1;
}

int cmd_calibrate(bool write) {
  auto vals = calibrate_all([](const std::string& n) { std::fprintf(stderr, "calibrated %s\n", n.c_str()); });
  Constants c;
  std::string path = default_constants_path();
  if (std::filesystem::exists(path)) c = load_constants(path);
  if (write) {
    c.values = vals;
    c.version += std::filesystem::exists(path) ? 1 : 0;
    c.meta = {{"rule", "re-runs must stay within 1.05x of these values"},
              {"C_chi", "sup (chi'^2 + chi''^2)/chi, 1e6 samples on [-3,3]"},
              {"C_meas", "max |S_kl| / 2^(3k+l) over the pinned sweep"},
              {"C_wb", "weighted Bochner LHS/RHS, 20 evolved linear solutions, two weights"},
              {"C_ext", "exterior energy ratio over the pinned ensemble"},
              {"C_sob", "Sobolev embedding ratio over the pinned ensemble"},
              {"C_int", "interior elliptic ratio over the pinned ensemble"}};
    save_constants(c, path);
  }
  json j = vals;
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"anisotropic wave decay toolkit"};
  app.require_subcommand(1);

  std::string config, out, mode, csv, col, dir;
  std::vector<double> window;
  bool write = false;

  auto* run = app.add_subcommand("run", "evolve a configured system and emit diagnostics");
  run->add_option("config", config)->required();
  run->add_option("--out", out);
  auto* verify = app.add_subcommand("verify-identities", "check the integrated identities");
  verify->add_option("config", config)->required();
  auto* sweep = app.add_subcommand("measure-sweep", "phase-set measure sweep");
  sweep->add_option("config", config)->required();
  sweep->add_option("--out", out);
  auto* fit = app.add_subcommand("decay-fit", "log-log fit of a diagnostics column");
  fit->add_option("csv", csv)->required();
  fit->add_option("--col", col)->required();
  fit->add_option("--window", window)->expected(2);
  auto* boot = app.add_subcommand("bootstrap", "run and monitor the bootstrap functional");
  boot->add_option("config", config)->required();
  boot->add_option("--mode", mode)->required()->check(CLI::IsMember({"thm3", "thm4"}));
  boot->add_option("--out", out);
  auto* rep = app.add_subcommand("report", "summarize a run directory");
  rep->add_option("dir", dir)->required();
  auto* cal = app.add_subcommand("calibrate", "measure the pinned ensembles");
  cal->add_flag("--write", write, "store the values in the constants file");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(config, out, "");
    if (*verify) return cmd_verify(config);
    if (*sweep) return cmd_measure(config, out);
    if (*fit) return cmd_fit(csv, col, window);
    if (*boot) return cmd_run(config, out, mode);
    if (*rep) return cmd_report(dir);
    if (*cal) return cmd_calibrate(write);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
