#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "aniso/cutoffs.hpp"
#include "aniso/measure.hpp"
#include "aniso/report.hpp"

using namespace aniso;

namespace {

struct Outcome {
  bool pass = false;
  double value = 0.0;
  double bound = 0.0;
  std::string detail;
};

std::string fmt(const char* f, auto... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

double bracket(double t) { return std::sqrt(1.0 + t * t); }

double bump(double x, double y, double z, double R, int p) {
  double s2 = (x * x + y * y + z * z) / (R * R);
  return s2 < 1.0 ? std::pow(1.0 - s2, p) : 0.0;
}

// ---- 1: cutoff junctions

Outcome c1() {
  namespace c = aniso::cutoffs;
  const double e = 1e-12;
  double worst = 0.0;
  for (double x : {-3.0, -2.0, -1.0, 0.0}) {
    worst = std::max(worst, std::abs(c::chi(x - e) - c::chi(x + e)));
    worst = std::max(worst, std::abs(c::chi_d1(x - e) - c::chi_d1(x + e)));
    // second derivatives are of size ~30 near -2, so scale the offset test by them
    worst = std::max(worst, std::abs(c::chi_d2(x - e) - c::chi_d2(x + e)) / std::max(1.0, std::abs(c::chi_d2(x))));
  }
  // both branch polynomials at -2
  double outer = 0.25 * std::pow(1.0, 11);
  double inner = 0.25 * (-19.0 * std::pow(-1.0, 11) - 22.0 * std::pow(-1.0, 10) + 4.0);
  double at2 = std::max({std::abs(outer - 0.25), std::abs(inner - 0.25), std::abs(c::chi(-2.0) - 0.25)});

  double tele = 0.0;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> X(-200.0, 200.0);
  for (int i = 0; i < 20000; ++i) {
    double x = X(rng);
    for (auto [k1, k2] : {std::pair{-4, 6}, std::pair{0, 0}, std::pair{-10, 10}}) {
      double d = c::chi_range(k1, k2, x) - (c::chi_scaled(k2, x) - c::chi_scaled(k1 - 1, x));
      tele = std::max(tele, std::abs(d));
    }
  }
  Outcome o;
  o.value = std::max(worst, at2);
  o.bound = 1e-10;
  o.pass = worst <= 1e-10 && at2 <= 1e-12 && tele <= 1e-12;
  o.detail = fmt("junction %.2e, chi(-2) %.2e, telescoping %.2e", worst, at2, tele);
  return o;
}

// ---- 2: smoothness constant

Outcome c2() {
  double a = cutoffs::chi_smoothness_sup(10000), b = cutoffs::chi_smoothness_sup(1000000);
  double rel = std::abs(b - a) / b;
  return {std::isfinite(b) && rel <= 0.01, rel, 0.01, fmt("C_chi(1e4) %.6g, C_chi(1e6) %.6g, rel %.2e", a, b, rel)};
}

// ---- 3: commutator

Outcome c3() {
  Grid g = make_grid(64, 16.0);
  double worst = 0.0;
  for (Vec3 eps : {Vec3{1, 1, 1}, Vec3{1, 4, 9}}) {
    vf::TimeJet J;
    J.t = 2.0;
    // phi = (1 - 2 (t - 2)^2 + ...) Gaussian, jet coefficients at t = 2
    const double c[4] = {1.0, 0.0, -2.0, 0.0};
    for (int m = 0; m < 4; ++m)
      J.d.push_back(sample(g, [&](double x, double y, double z) { return c[m] * std::exp(-(x * x + y * y + z * z)); }, 2.0));
    worst = std::max(worst, vf::commutator_residual(J, eps).residual);
  }
  return {worst <= 1e-8, worst, 1e-8, fmt("max relative residual %.2e", worst)};
}

// ---- 4: L = F + Box on a free wave

Outcome c4() {
  Grid g = make_grid(64, 14.0);
  double worst = 0.0;
  bool inside = true;
  for (double t : {2.0, 4.0}) {
    vf::Lattice lat = free_bump_lattice(g, 3.5, 20, t, 2);
    inside = inside && !id::touches_boundary(lat.psi[0]);
    ScalarField L = vf::L_apply(lat.psi[0], t);
    ScalarField r = L - vf::F_apply(lat).form_dt;
    worst = std::max(worst, l2(r) / l2(L));
  }
  return {inside && worst <= 1e-6, worst, 1e-6, fmt("max relative residual %.2e, support inside box %d", worst, inside)};
}

// ---- 5: Bochner

Outcome c5() {
  auto res = [](int n) {
    ScalarField phi = sample(make_grid(n, 20.0), [](double x, double y, double z) {
      return (1.0 + y) * std::exp(-((x - 4.0) * (x - 4.0) + y * y + z * z));
    });
    return id::bochner_integrated(phi, 4.0).main.residual;
  };
  double r64 = res(64), r128 = res(128);
  double order = std::log2(r64 / r128);
  bool ok = r64 <= 1e-6 && r128 <= 1e-8 && order >= 4.0;
  return {ok, r128, 1e-8, fmt("64^3 %.2e, 128^3 %.2e, observed order %.2f", r64, r128, order)};
}

// ---- 6: measure lemma

Outcome c6() {
  measure::SweepSpec sw;
  auto rep = measure::measure_lemma_sweep(sw);
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> K(-3, 3), L(-5, 2);
  std::uniform_real_distribution<double> B(0.0, 2.0);
  int agree = 0;
  for (int i = 0; i < 50; ++i) {
    auto s = measure::make_spec(B(rng), K(rng), L(rng), (i % 2) ? 1 : -1);
    double q = measure::skl_measure_quad(s);
    auto mc = measure::skl_measure_mc(s, 100000, 7000 + i);
    // full shells and empty sets have zero sampling error
    agree += std::abs(mc.value - q) <= 3.0 * mc.stderr_ + 1e-12 * q;
  }
  double half = measure::skl_measure_quad(measure::make_spec(1.0, 0, 0, -1));
  double err = std::abs(half - 7.0 * std::numbers::pi / 12.0);
  bool ok = std::isfinite(rep.max_ratio) && agree == 50 && err <= 1e-4;
  return {ok, rep.max_ratio, 0.0,
          fmt("max ratio %.4g (beta %.2g k %d l %d), MC agree %d/50, 7pi/12 error %.2e", rep.max_ratio,
              rep.argmax.beta, rep.argmax.k, rep.argmax.l, agree, err)};
}

// ---- 7: linear solver

Outcome c7() {
  double period = 0.0;
  {
    Grid g = make_grid(32, 2.0 * std::numbers::pi);
    for (Vec3 eps : {Vec3{1, 1, 1}, Vec3{1, 4, 9}}) {
      double w = std::sqrt(eps[1]);
      WaveState s{sample(g, [](double, double y, double) { return std::cos(y); }),
                  sample(g, [&](double, double y, double) { return w * std::sin(y); })};
      WaveState e = exact_linear_step(s, 2.0 * std::numbers::pi / w, SpeedTriple{eps});
      period = std::max({period, max_abs_diff(e.phi, s.phi), max_abs_diff(e.phi_t, s.phi_t)});
    }
  }
  double drift = 0.0;
  {
    Grid g = make_grid(32, 16.0);
    for (Vec3 eps : {Vec3{1, 1, 1}, Vec3{1, 4, 9}}) {
      auto energy = [&](const WaveState& s) {
        auto G = gradient(s.phi);
        double e = std::pow(l2(s.phi_t), 2);
        for (int j = 0; j < 3; ++j) e += eps[j] * std::pow(l2(G[j]), 2);
        return 0.5 * e;
      };
      WaveState s{band_limit(sample(g, [](double x, double y, double z) { return bump(x - 0.3, y, z, 1.5, 8); }, 1.0)),
                  band_limit(sample(g, [](double x, double y, double z) { return 0.4 * bump(x, y + 0.2, z, 1.5, 8); }, 1.0))};
      double e0 = energy(s);
      for (int n = 0; n < 90; ++n) s = exact_linear_step(s, 0.1, SpeedTriple{eps});
      drift = std::max(drift, std::abs(energy(s) - e0) / e0);
    }
  }
  double leak = 0.0;
  {
    Grid g = make_grid(96, 48.0);
    const double R = 7.0;
    auto b = [&](double x, double y, double z) { return bump(x, y, z, R, 24); };
    WaveState s{sample(g, b, 1.0), sample(g, b, 1.0)};
    ScalarField r = radius_field(g);
    for (auto [eps, T] : {std::pair{Vec3{1, 1, 1}, 9.0}, std::pair{Vec3{1, 4, 9}, 2.0}}) {
      WaveState e = exact_linear_step(s, T, SpeedTriple{eps});
      double speed = std::sqrt(std::max({eps[0], eps[1], eps[2]}));
      for (std::size_t i = 0; i < r.size(); ++i)
        if (r[i] > R + speed * T) leak = std::max(leak, std::abs(e.phi[i]));
    }
  }
  bool ok = period <= 1e-12 && drift <= 1e-10 && leak <= 1e-10;
  return {ok, std::max({period, drift, leak}), 1e-10,
          fmt("period %.2e, energy drift %.2e, leakage %.2e", period, drift, leak)};
}

// ---- 8, 9: decay of a compact free wave at 128^3 / box 80

struct DecaySeries {
  std::vector<double> t, global, interior;
};

DecaySeries decay_series() {
  Grid g = make_grid(128, 80.0);
  WaveState s{sample(g, [](double x, double y, double z) { return bump(x, y, z, 2.0, 4); }, 1.0), ScalarField(g, 1.0)};
  ScalarField r = radius_field(g);
  DecaySeries d;
  double now = 1.0;
  for (int i = 0; i < 9; ++i) {
    double t = 8.0 * std::pow(4.0, i / 8.0);
    s = exact_linear_step(s, t - now, SpeedTriple{});
    now = t;
    ScalarField m = gradient_magnitude(s);
    double in = 0.0;
    for (std::size_t j = 0; j < m.size(); ++j)
      if (r[j] <= t / 2.0) in = std::max(in, m[j]);
    d.t.push_back(t);
    d.global.push_back(max_abs(m));
    d.interior.push_back(in);
  }
  return d;
}

Outcome c8() {
  DecaySeries d = decay_series();
  FitResult f = decay_fit(d.t, d.global, 8.0, 32.0);
  return {std::abs(f.exponent + 1.0) <= 0.1, f.exponent, -1.0,
          fmt("exponent %.4f (r2 %.5f, %d samples)", f.exponent, f.r2, f.samples)};
}

Outcome c9() {
  DecaySeries d = decay_series();
  double lo = *std::min_element(d.interior.begin(), d.interior.end());
  double hi = *std::max_element(d.interior.begin(), d.interior.end());
  std::string range = fmt("interior sup in [%.2e, %.2e]", lo, hi);
  if (lo <= 0.0) return {false, -INFINITY, -0.85, range + ", identically zero samples, no rate"};
  FitResult f = decay_fit(d.t, d.interior, 8.0, 32.0);
  return {f.exponent >= -1.1 && f.exponent <= -0.85, f.exponent, -0.85,
          fmt("exponent %.4f, ", f.exponent) + range};
}

// ---- 10: calibrated constants

Outcome c10() {
  Constants stored = load_constants(default_constants_path());
  auto now = calibrate_all();
  double worst = 0.0;
  std::string detail;
  bool ok = true;
  for (const auto& [name, v] : now) {
    auto it = stored.values.find(name);
    if (it == stored.values.end()) {
      ok = false;
      detail += name + " missing; ";
      continue;
    }
    double ratio = v / it->second;
    worst = std::max(worst, ratio);
    ok = ok && std::isfinite(v) && ratio <= 1.05;
    detail += fmt("%s %.4g/%.4g; ", name.c_str(), v, it->second);
  }
  return {ok, worst, 1.05, detail + fmt("max ratio %.4f", worst)};
}

// ---- 11, 12: bootstrap runs

RunResult run_config(const std::string& file) {
  RunConfig cfg = load_config(std::string(ANISO_CONFIG_DIR) + "/" + file);
  std::fprintf(stderr, "running %s: %d^3, t in [%g, %g]\n", file.c_str(), cfg.n, cfg.t0, cfg.t_end);
  return run_simulation(cfg, [](const DiagnosticsRow& r) { std::fprintf(stderr, "  t = %.2f\n", r.t); });
}

Outcome c11() {
  RunResult r = run_config("bootstrap_thm3.json");
  VerdictMap v = run_verdicts(r);
  const Verdict& b = v.at("bootstrap_thm3");
  bool ok = b.pass && !r.warning;
  std::string detail = fmt("functional sup %.4e <= eps0^{3/4} %.4e (margin %.2f); drift", b.value, b.bound, b.bound / b.value);
  for (int i = 0; i < r.cfg.system.m; ++i) {
    const Verdict& d = v.at("scattering_drift_" + std::to_string(i));
    ok = ok && d.pass;
    detail += fmt(" [%d] %.3e < %.3e", i, d.value, d.bound);
  }
  return {ok, b.value, b.bound, detail};
}

Outcome c12() {
  RunResult r = run_config("bootstrap_thm4.json");
  bool ok = !r.warning;
  std::string detail;
  double worst = 0.0;
  for (int i = 0; i < r.cfg.system.m; ++i) {
    const DiagnosticsRow& first = r.rows.front();
    double e_sup = 0.0, w_ratio = 0.0, k_early = 0.0, k_late = 0.0;
    for (const auto& row : r.rows) {
      e_sup = std::max(e_sup, row.E[i]);
      w_ratio = std::max(w_ratio, row.W[i] / (std::pow(bracket(row.t), 0.05) * first.W[i]));
      double k = row.K[i] * std::pow(bracket(row.t), 0.95);
      (row.t <= 16.0 ? k_early : k_late) = std::max(row.t <= 16.0 ? k_early : k_late, k);
    }
    double e_ratio = e_sup / first.E[i], k_ratio = k_late / k_early;
    ok = ok && e_ratio <= 2.0 && w_ratio <= 2.0 && k_ratio <= 1.25;
    worst = std::max(worst, w_ratio);
    detail += fmt("[%d] supE/E(1) %.3f, W/(<t>^.05 W(1)) %.3f, K<t>^.95 late/early %.3f; ", i, e_ratio, w_ratio, k_ratio);
  }
  return {ok, worst, 2.0, detail};
}

struct Criterion {
  std::function<Outcome()> run;
  double budget_s;
};

const std::vector<Criterion> criteria{
    {c1, 1.0},   {c2, 5.0},    {c3, 30.0},  {c4, 120.0},   {c5, 300.0},    {c6, 120.0},
    {c7, 60.0},  {c8, 1200.0}, {c9, 1200.0}, {c10, 900.0}, {c11, 3600.0}, {c12, 3600.0}};

void merge_verdict(const std::string& path, int id, const Outcome& o, double secs) {
  nlohmann::json j = nlohmann::json::object();
  if (std::ifstream in(path); in) {
    try {
      j = nlohmann::json::parse(in);
    } catch (const std::exception&) {
      j = nlohmann::json::object();
    }
  }
  j["acceptance_" + std::to_string(id)] = {
      {"pass", o.pass}, {"value", o.value}, {"bound", o.bound}, {"seconds", secs}, {"detail", o.detail}};
  write_text(path, j.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  std::string verdict = "acceptance_verdict.json";
  app.add_option("--criterion", only, "run a single criterion (1-12)")->check(CLI::Range(1, 12));
  app.add_option("--verdict", verdict, "verdict file to merge results into");
  CLI11_PARSE(app, argc, argv);

  bool all = true;
  for (int id = 1; id <= 12; ++id) {
    if (only && id != only) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[id - 1].run();
    } catch (const std::exception& e) {
      o = {false, 0.0, 0.0, std::string("error: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    double budget = criteria[id - 1].budget_s;
    if (secs > budget) {
      o.pass = false;
      o.detail += fmt("; over time budget %.0f s", budget);
    }
    std::printf("criterion %2d: %s  %s (%.1f s)\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    merge_verdict(verdict, id, o, secs);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
