#include "aniso/experiments.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <stdexcept>

#include "aniso/cutoffs.hpp"
#include "aniso/measure.hpp"

namespace aniso {

using nlohmann::json;

namespace {

double profile(const DataSpec& d, const Vec3& c, double x, double y, double z) {
  double dx = x - c[0], dy = y - c[1], dz = z - c[2];
  double s2 = (dx * dx + dy * dy + dz * dz) / (d.radius * d.radius);
  if (d.kind == "gaussian") return std::exp(-s2);
  return s2 < 1.0 ? std::pow(1.0 - s2, d.power) : 0.0;
}

SystemSpec linear_copy(const SystemSpec& s) {
  SystemSpec l = s;
  for (auto& c : l.terms) c.clear();
  l.forcing = nullptr;
  return l;
}

}  // namespace

std::vector<WaveState> build_data(const RunConfig& cfg, const Grid& g) {
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<WaveState> out;
  for (const auto& d : cfg.data) {
    Vec3 c = d.center;
    if (d.jitter > 0.0)
      for (auto& v : c) v += d.jitter * U(rng);
    auto p = [&](double x, double y, double z) { return profile(d, c, x, y, z); };
    WaveState w;
    w.phi = sample(g, [&](double x, double y, double z) { return d.amplitude * p(x, y, z); }, cfg.t0);
    w.phi_t = sample(g, [&](double x, double y, double z) { return d.velocity * p(x, y, z); }, cfg.t0);
    out.push_back(std::move(w));
  }
  return out;
}

RunResult run_simulation(const RunConfig& cfg, const Progress& progress) {
  RunResult res;
  res.cfg = cfg;
  const Grid g = make_grid(cfg.n, cfg.box);
  auto data = build_data(cfg, g);
  const int order = cfg.diag.k_max;

  if (cfg.system.separation_required) {
    res.separation = cfg.system.separation(g);
    if (res.separation < cfg.system.separation_margin)
      throw std::invalid_argument("run: cone radii are not separated by the declared margin");
  }
  if (cfg.epsilon0 > 0.0) {
    // normalize with the linear lattice so that sum_i E_i(t0) = epsilon0
    SystemState lin = make_state(linear_copy(cfg.system), data, cfg.t0, order);
    double total = 0.0;
    for (int i = 0; i < lin.m(); ++i)
      total += std::sqrt(vf::word_norms(lin.psi[i], lin.dpsi[i], order).energy_sq);
    if (!(total > 0.0)) throw std::invalid_argument("run: zero data cannot be normalized");
    res.data_scale = cfg.epsilon0 / total;
    for (auto& w : data) {
      w.phi = res.data_scale * w.phi;
      w.phi_t = res.data_scale * w.phi_t;
      w.phi.time = w.phi_t.time = cfg.t0;
    }
  }
  SystemState s = make_state(cfg.system, data, cfg.t0, order);

  const long steps = std::lround((cfg.t_end - cfg.t0) / cfg.dt);
  const long stride = std::max(1L, std::lround(cfg.output_every / cfg.dt));
  std::vector<long> profile_steps;
  for (double t : cfg.profile_times) profile_steps.push_back(std::lround((t - cfg.t0) / cfg.dt));

  auto record = [&](long step) {
    if (step % stride == 0 || step == steps) {
      DiagnosticsRow row = compute_diagnostics(cfg.system, s, cfg.diag);
      row.t = cfg.t0 + step * cfg.dt;
      res.rows.push_back(row);
      res.traj.times.push_back(row.t);
      if (progress) progress(row);
    }
    for (std::size_t k = 0; k < profile_steps.size(); ++k)
      if (profile_steps[k] == step) {
        std::vector<HalfWave> hw;
        for (int i = 0; i < s.m(); ++i)
          hw.push_back(half_wave_profile(s.base(i), cfg.profile_times[k], cfg.system.speeds[i]));
        res.traj.profiles[cfg.profile_times[k]] = std::move(hw);
        std::vector<HalfWave> acc;
        for (int i = 0; i < s.m(); ++i) acc.push_back({s.grid, cfg.profile_times[k], s.duhamel[i]});
        res.traj.duhamel[cfg.profile_times[k]] = std::move(acc);
      }
  };
  if (!profile_steps.empty())
    s.duhamel.assign(s.m(), std::vector<cplx>(g.volume_count(), cplx(0.0, 0.0)));
  record(0);
  for (long step = 1; step <= steps; ++step) {
    StepInfo info = semilinear_step(cfg.system, s, cfg.dt);
    // keep the clock on the integer step grid
    s.t = cfg.t0 + step * cfg.dt;
    res.warning = res.warning || info.warning;
    record(step);
  }
  return res;
}

std::string default_constants_path() { return std::string(ANISO_DATA_DIR) + "/constants.json"; }

Constants load_constants(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open constants file " + path);
  json j = json::parse(in);
  Constants c;
  c.version = j.value("version", 1);
  c.meta = j.value("meta", json::object());
  for (auto& [k, v] : j.at("constants").items()) c.values[k] = v.get<double>();
  return c;
}

void save_constants(const Constants& c, const std::string& path) {
  json j;
  j["version"] = c.version;
  j["meta"] = c.meta;
  j["constants"] = c.values;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write constants file " + path);
  out << j.dump(2) << "\n";
}

vf::Lattice free_bump_lattice(const Grid& g, double radius, int power, double t, int order,
                              const Vec3& center, double velocity) {
  SystemSpec spec;
  spec.m = 1;
  spec.speeds = {SpeedTriple{}};
  DataSpec d;
  d.radius = radius;
  d.power = power;
  d.velocity = velocity;
  auto p = [&](double x, double y, double z) { return profile(d, center, x, y, z); };
  WaveState w{sample(g, p, 1.0),
              sample(g, [&](double x, double y, double z) { return velocity * p(x, y, z); }, 1.0)};
  SystemState s = make_state(spec, {w}, 1.0, order);
  for (int j = 0; j <= order; ++j) propagate(s.psi[0][j], s.dpsi[0][j], t - 1.0, spec.speeds[0]);
  s.t = t;
  return s.lattice(spec, 0);
}

double calibrate_chi() { return cutoffs::chi_smoothness_sup(1000000); }

double calibrate_measure() { return measure::measure_lemma_sweep(measure::SweepSpec{}).max_ratio; }

namespace {

// pinned random compact bump data inside |x| < 1 at t0 = 1
struct Member {
  Vec3 center;
  double radius;
  double velocity;
  double t;
};

std::vector<Member> ensemble(std::uint64_t seed, int count, double t_lo, double t_hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<Member> out;
  for (int i = 0; i < count; ++i) {
    Member m;
    m.radius = 0.6 + 0.3 * U(rng);
    double off = (0.95 - m.radius) * U(rng);
    double th = std::acos(2.0 * U(rng) - 1.0), ph = 2.0 * std::numbers::pi * U(rng);
    m.center = {off * std::sin(th) * std::cos(ph), off * std::sin(th) * std::sin(ph), off * std::cos(th)};
    m.velocity = 2.0 * U(rng) - 1.0;
    m.t = t_lo + (t_hi - t_lo) * U(rng);
    out.push_back(m);
  }
  return out;
}

Vec3 random_direction(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double th = std::acos(2.0 * U(rng) - 1.0), ph = 2.0 * std::numbers::pi * U(rng);
  return {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
}

}  // namespace

double calibrate_weighted_bochner() {
  const Grid g = make_grid(48, 16.0);
  std::mt19937_64 rng(2024);
  double best = 0.0;
  for (const Member& m : ensemble(101, 20, 2.0, 5.0)) {
    vf::Lattice lat = free_bump_lattice(g, m.radius, 4, m.t, 2, m.center, m.velocity);
    id::WeightSpec a;
    a.kind = id::WeightKind::InteriorPower;
    a.alpha = 4.0;
    best = std::max(best, id::weighted_bochner_ratio(lat, nullptr, a).residual);
    id::WeightSpec b;
    b.kind = id::WeightKind::Product;
    b.alpha = 4.0;
    Vec3 u = random_direction(rng);
    double r0 = m.t * (0.5 + 0.5 * std::uniform_real_distribution<double>(0.0, 1.0)(rng));
    b.x0 = {r0 * u[0], r0 * u[1], r0 * u[2]};
    best = std::max(best, id::weighted_bochner_ratio(lat, nullptr, b).residual);
  }
  return best;
}

double calibrate_exterior() {
  const Grid g = make_grid(64, 32.0);
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const SpeedTriple sp;
  double best = 0.0;
  for (int member = 0; member < 8; ++member) {
    // annulus data with a tilt; the last two members carry an exterior forcing
    double rc = 1.2 + 0.6 * U(rng), w = 0.4 + 0.3 * U(rng), tilt = 0.5 * U(rng);
    Vec3 u = random_direction(rng);
    auto annulus = [=](double x, double y, double z) {
      double r = std::sqrt(x * x + y * y + z * z);
      double s = (r - rc) / w;
      if (std::abs(s) >= 1.0) return 0.0;
      return std::pow(1.0 - s * s, 4) * (1.0 + tilt * (u[0] * x + u[1] * y + u[2] * z) / 3.0);
    };
    const bool forced = member >= 6;
    const Vec3 fc{6.0 * u[0], 6.0 * u[1], 6.0 * u[2]};
    auto fspace = [=](double x, double y, double z) {
      double dx = x - fc[0], dy = y - fc[1], dz = z - fc[2];
      double s2 = (dx * dx + dy * dy + dz * dz) / 2.25;
      return s2 < 1.0 ? 0.1 * std::pow(1.0 - s2, 4) : 0.0;
    };
    SystemSpec spec;
    spec.m = 1;
    spec.speeds = {sp};
    if (forced)
      spec.forcing = [=](int, double t, const Grid& gg) {
        return sample(gg, [&](double x, double y, double z) { return std::sin(t) * fspace(x, y, z); }, t);
      };
    WaveState w0{sample(g, annulus, 1.0), ScalarField(g, 1.0)};
    SystemState s = make_state(spec, {w0}, 1.0, 0);
    std::vector<id::ExteriorSample> traj;
    const double dt = 0.1;
    for (int step = 0; step <= 70; ++step) {
      if (step % 5 == 0) {
        id::ExteriorSample es;
        es.t = s.t;
        WaveState b = s.base(0);
        es.phi = b.phi;
        es.phi_t = b.phi_t;
        if (forced) {
          es.f = sample(g, [&](double x, double y, double z) { return std::sin(s.t) * fspace(x, y, z); }, s.t);
          es.f_t = sample(g, [&](double x, double y, double z) { return std::cos(s.t) * fspace(x, y, z); }, s.t);
        }
        traj.push_back(std::move(es));
      }
      if (step < 70) {
        semilinear_step(spec, s, dt);
        s.t = 1.0 + (step + 1) * dt;
      }
    }
    best = std::max(best, id::exterior_energy_check(traj, sp.eps).residual);
  }
  return best;
}

double calibrate_sobolev() {
  const Grid g = make_grid(48, 16.0);
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double best = 0.0;
  auto members = ensemble(404, 10, 2.0, 5.0);
  for (const Member& m : members) {
    vf::Lattice lat = free_bump_lattice(g, m.radius, 4, m.t, 0, m.center, m.velocity);
    for (int k = 0; k < 5; ++k) {
      // |x0| from deep inside to just outside the cone
      double r0 = m.t * (0.125 + 1.0 * U(rng));
      Vec3 u = random_direction(rng);
      Vec3 x0{r0 * u[0], r0 * u[1], r0 * u[2]};
      best = std::max(best, id::sobolev_embedding_check(lat.psi[0], m.t, x0).residual);
    }
  }
  return best;
}

double calibrate_interior() {
  const Grid g = make_grid(64, 24.0);
  double best = 0.0;
  for (const Member& m : ensemble(606, 10, 8.0, 8.0)) {
    vf::Lattice lat = free_bump_lattice(g, m.radius, 4, m.t, 1, m.center, m.velocity);
    best = std::max(best, id::interior_elliptic_check(lat, nullptr).residual);
  }
  return best;
}

std::map<std::string, double> calibrate_all(const std::function<void(const std::string&)>& log) {
  std::map<std::string, double> out;
  auto run = [&](const std::string& name, double (*fn)()) {
    out[name] = fn();
    if (log) log(name);
  };
  run("C_chi", calibrate_chi);
  run("C_meas", calibrate_measure);
  run("C_wb", calibrate_weighted_bochner);
  run("C_ext", calibrate_exterior);
  run("C_sob", calibrate_sobolev);
  run("C_int", calibrate_interior);
  return out;
}

std::vector<id::IdentityReport> verify_identities(int n, double box) {
  const Grid g = make_grid(n, box);
  std::vector<id::IdentityReport> out;
  // off-centre analytic field, away from the polar singularity
  ScalarField phi = sample(g, [](double x, double y, double z) {
    return (1.0 + y) * std::exp(-((x - 4.0) * (x - 4.0) + y * y + z * z));
  });
  auto b = id::bochner_integrated(phi, 4.0);
  out.push_back(b.main);
  b.printed.pass = true;  // diagnostic only
  out.push_back(b.printed);
  b.laplacian.tolerance_used = b.main.tolerance_used;
  b.laplacian.pass = b.laplacian.residual <= b.laplacian.tolerance_used;
  out.push_back(b.laplacian);
  ScalarField rad = sample(g, [](double x, double y, double z) { return std::exp(-(x * x + y * y + z * z)); });
  out.push_back(id::first_order_integrated(rad, 4.0));

  for (Vec3 eps : {Vec3{1, 1, 1}, Vec3{1, 4, 9}}) {
    vf::TimeJet J;
    J.t = 2.0;
    const double c[4] = {1.0, 0.0, -2.0, 0.0};
    for (int m = 0; m < 4; ++m)
      J.d.push_back(sample(g, [&](double x, double y, double z) {
        return c[m] * std::exp(-(x * x + y * y + z * z));
      }, 2.0));
    auto r = vf::commutator_residual(J, eps);
    id::IdentityReport rep;
    rep.check = eps[1] == 1.0 ? "commutator_isotropic" : "commutator_anisotropic";
    rep.lhs = r.residual;
    rep.residual = r.residual;
    rep.resolution = n;
    rep.tolerance_used = 1e-8;
    rep.pass = r.residual <= 1e-8;
    out.push_back(rep);
  }
  return out;
}

}  // namespace aniso
