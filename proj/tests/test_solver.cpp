#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "aniso/solver.hpp"

using namespace aniso;

namespace {

double energy(const WaveState& s, const Vec3& eps) {
  auto G = gradient(s.phi);
  double e = std::pow(l2(s.phi_t), 2);
  for (int j = 0; j < 3; ++j) e += eps[j] * std::pow(l2(G[j]), 2);
  return 0.5 * e;
}

double bump(double x, double y, double z, double R, int p) {
  double s2 = (x * x + y * y + z * z) / (R * R);
  return s2 < 1.0 ? std::pow(1.0 - s2, p) : 0.0;
}

SystemSpec single(const Vec3& eps) {
  SystemSpec s;
  s.m = 1;
  s.speeds = {SpeedTriple{eps}};
  return s;
}

}  // namespace

TEST_CASE("plane waves return after one period") {
  Grid g = make_grid(32, 2.0 * std::numbers::pi);
  struct Case {
    Vec3 eps;
    int axis;
    double k;
  };
  // omega = 2 isotropic on cos(2y), omega = 2 on cos(y) with eps_2 = 4
  for (Case c : {Case{{1, 1, 1}, 1, 2.0}, Case{{1, 4, 9}, 1, 1.0}, Case{{1, 1, 1}, 0, 1.0}}) {
    double w = std::sqrt(c.eps[c.axis]) * c.k;
    auto coord = [&](double x, double y, double z) { return c.axis == 0 ? x : (c.axis == 1 ? y : z); };
    WaveState s{sample(g, [&](double x, double y, double z) { return std::cos(c.k * coord(x, y, z)); }),
                sample(g, [&](double x, double y, double z) { return w * std::sin(c.k * coord(x, y, z)); })};
    WaveState e = exact_linear_step(s, 2.0 * std::numbers::pi / w, SpeedTriple{c.eps});
    CHECK(max_abs_diff(e.phi, s.phi) <= 1e-12);
    CHECK(max_abs_diff(e.phi_t, s.phi_t) <= 1e-12);
    // a quarter period turns cos into sin
    WaveState q = exact_linear_step(s, 0.5 * std::numbers::pi / w, SpeedTriple{c.eps});
    ScalarField want = sample(g, [&](double x, double y, double z) { return std::sin(c.k * coord(x, y, z)); });
    CHECK(max_abs_diff(q.phi, want) <= 1e-12);
  }
}

TEST_CASE("level-batched propagation matches single levels") {
  Grid g = make_grid(16, 8.0);
  SpeedTriple sp{{1, 4, 9}};
  std::vector<Spectrum> u, v;
  for (int l = 0; l < 3; ++l) {
    u.push_back(forward(sample(g, [&](double x, double y, double z) { return bump(x - 0.2 * l, y, z, 2.0, 6); })));
    v.push_back(forward(sample(g, [&](double x, double y, double z) { return (1 + l) * bump(x, y, z, 2.0, 6); })));
  }
  auto u1 = u, v1 = v;
  for (int l = 0; l < 3; ++l) propagate(u1[l], v1[l], 0.37, sp);
  propagate(u, v, 0.37, sp);
  for (int l = 0; l < 3; ++l) {
    CHECK(u[l].c == u1[l].c);
    CHECK(v[l].c == v1[l].c);
  }
}

TEST_CASE("energy is conserved by the exact linear flow") {
  Grid g = make_grid(32, 16.0);
  for (Vec3 eps : {Vec3{1, 1, 1}, Vec3{1, 4, 9}}) {
    // the flow keeps only the band-limited part, so start from it
    WaveState s{band_limit(sample(g, [](double x, double y, double z) { return bump(x - 0.3, y, z, 1.5, 8); }, 1.0)),
                band_limit(sample(g, [](double x, double y, double z) { return 0.4 * bump(x, y + 0.2, z, 1.5, 8); }, 1.0))};
    double e0 = energy(s, eps);
    for (int n = 0; n < 90; ++n) s = exact_linear_step(s, 0.1, SpeedTriple{eps});
    CHECK(std::abs(energy(s, eps) - e0) <= 1e-10 * e0);
    CHECK(s.phi.time == doctest::Approx(10.0));
  }
}

TEST_CASE("finite propagation speed") {
  // (1 - s^2)^24 of radius 7 is resolved on 96^3 / side 48 to ~1e-11
  Grid g = make_grid(96, 48.0);
  const double R = 7.0;
  auto b = [&](double x, double y, double z) { return bump(x, y, z, R, 24); };
  WaveState s{sample(g, b, 1.0), sample(g, b, 1.0)};
  ScalarField r = radius_field(g);
  struct Case {
    Vec3 eps;
    double T;
  };
  for (Case c : {Case{{1, 1, 1}, 3.0}, Case{{1, 1, 1}, 9.0}, Case{{1, 4, 9}, 2.0}}) {
    WaveState e = exact_linear_step(s, c.T, SpeedTriple{c.eps});
    double speed = std::sqrt(std::max({c.eps[0], c.eps[1], c.eps[2]}));
    double out = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i)
      if (r[i] > R + speed * c.T) out = std::max(out, std::abs(e.phi[i]));
    CHECK(out <= 1e-10);
  }
}

TEST_CASE("half-wave profiles are constant for free waves") {
  Grid g = make_grid(32, 16.0);
  SpeedTriple sp{{1, 4, 9}};
  WaveState s{band_limit(sample(g, [](double x, double y, double z) { return bump(x, y, z, 1.5, 10); }, 1.0)),
              band_limit(sample(g, [](double x, double y, double z) { return x * bump(x, y, z, 1.5, 10); }, 1.0))};
  HalfWave a = half_wave_profile(s, 1.0, sp);
  WaveState e = exact_linear_step(s, 5.0, sp);
  HalfWave b = half_wave_profile(e, 6.0, sp);
  double scale = std::sqrt(2.0 * energy(s, sp.eps));
  CHECK(profile_distance(a, b) <= 1e-12 * scale);
  // |U| is the energy density in L2: ||U||^2 = 2E
  auto U = half_wave_u(s, sp);
  double nu = 0.0;
  for (auto& z : U) nu += std::norm(z);
  CHECK(std::sqrt(nu * g.cell_volume()) == doctest::Approx(scale).epsilon(1e-10));
  Trajectory tr;
  tr.profiles[1.0] = {a};
  tr.profiles[6.0] = {b};
  CHECK(scattering_drift(tr, 0, 1.0, 6.0) <= 1e-12 * scale);
  CHECK_THROWS(scattering_drift(tr, 0, 1.0, 3.0));
  CHECK_THROWS(scattering_drift(tr, 0, 6.0, 1.0));
}

TEST_CASE("manufactured solution converges at second order") {
  Grid g = make_grid(48, 12.0);
  SystemSpec spec = single({1, 2, 3});
  // N = 0.5 d_t phi (d_1 phi)^2
  spec.terms = {{Term{0.5, {Factor{0, 0}, Factor{0, 1}, Factor{0, 1}}}}};
  auto G = [](double x, double y, double z) { return std::exp(-(x * x + y * y + z * z)); };
  ScalarField g0 = sample(g, G);
  ScalarField lap = weighted_laplacian(g0, spec.speeds[0].eps);
  ScalarField d1 = spectral_derivative(g0, {1, 0, 0});
  auto a = [](double t) { return 0.3 * std::cos(t); };
  auto da = [](double t) { return -0.3 * std::sin(t); };
  spec.forcing = [&](int, double t, const Grid&) {
    // Box phi_e - N(phi_e) for phi_e = a(t) G(x)
    ScalarField f = a(t) * g0;
    f += a(t) * lap;
    for (std::size_t i = 0; i < f.size(); ++i) f[i] -= 0.5 * da(t) * a(t) * a(t) * g0[i] * d1[i] * d1[i];
    return f;
  };
  auto run = [&](double dt) {
    SystemState s = make_state(spec, {WaveState{a(1.0) * g0, da(1.0) * g0}}, 1.0, 0);
    int steps = static_cast<int>(std::lround(2.0 / dt));
    for (int n = 0; n < steps; ++n) semilinear_step(spec, s, dt);
    WaveState w = s.base(0);
    return l2(w.phi - a(3.0) * g0) + l2(w.phi_t - da(3.0) * g0);
  };
  double e1 = run(0.1), e2 = run(0.05), e3 = run(0.025);
  CHECK(e1 < 1e-2);
  CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.15));
  CHECK(std::log2(e2 / e3) == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("commuted levels track S of the evolved solution") {
  Grid g = make_grid(48, 16.0);
  SystemSpec spec = single({1, 1, 1});
  spec.terms = {{Term{2.0, {Factor{0, 0}, Factor{0, 1}, Factor{0, 2}}}}};
  WaveState d{sample(g, [](double x, double y, double z) { return 0.5 * bump(x, y, z, 3.0, 8); }, 1.0),
              sample(g, [](double x, double y, double z) { return 0.5 * bump(x - 0.2, y, z, 3.0, 8); }, 1.0)};
  double err[2];
  for (int run = 0; run < 2; ++run) {
    double dt = run == 0 ? 0.05 : 0.025;
    SystemState s = make_state(spec, {d}, 1.0, 1);
    for (int n = 0; n < static_cast<int>(std::lround(1.0 / dt)); ++n) semilinear_step(spec, s, dt);
    vf::Lattice lat = s.lattice(spec, 0);
    err[run] = l2(lat.psi[1] - vf::apply_S(lat.psi[0], lat.dpsi[0], s.t)) / l2(lat.psi[1]);
  }
  CHECK(err[1] < err[0]);
  CHECK(err[1] < 1e-3);
}

TEST_CASE("nonlinearity is cubic") {
  Grid g = make_grid(32, 12.0);
  SystemSpec spec;
  spec.m = 2;
  spec.speeds = {SpeedTriple{{1, 1, 1}}, SpeedTriple{{0.5, 0.5, 0.5}}};
  spec.terms = {{Term{1.0, {Factor{1, 0}, Factor{1, 1}, Factor{0, 3}}}},
                {Term{-0.7, {Factor{0, 2}, Factor{0, 0}, Factor{1, 1}}}}};
  auto data = [&](double lam) {
    WaveState a{lam * sample(g, [](double x, double y, double z) { return bump(x, y, z, 2.0, 8); }, 1.0),
                lam * sample(g, [](double x, double y, double z) { return bump(x, y - 0.3, z, 2.0, 8); }, 1.0)};
    WaveState b{lam * sample(g, [](double x, double y, double z) { return bump(x + 0.4, y, z, 2.0, 8); }, 1.0),
                lam * sample(g, [](double x, double y, double z) { return -bump(x, y, z, 2.0, 8); }, 1.0)};
    return std::vector<WaveState>{a, b};
  };
  // higher levels and d_t^2 feel N itself, so exact homogeneity holds only as lam -> 0
  SystemState s1 = make_state(spec, data(1e-4), 1.0, 2), s3 = make_state(spec, data(3e-4), 1.0, 2);
  for (int c = 0; c < 2; ++c) {
    auto [l1a, l2a] = nonlinearity_L1_L2_norms(spec, s1, c, 1);
    auto [l1b, l2b] = nonlinearity_L1_L2_norms(spec, s3, c, 1);
    CHECK(l1b == doctest::Approx(27.0 * l1a).epsilon(1e-6));
    CHECK(l2b == doctest::Approx(27.0 * l2a).epsilon(1e-6));
  }
  SystemSpec none = spec;
  none.terms = {{}, {}};
  auto z = nonlinearity_L1_L2_norms(none, make_state(none, data(1.0), 1.0, 1), 0, 1);
  CHECK(z.first == 0.0);
  CHECK(z.second == 0.0);
  NonlinearNorms n = nonlinear_energy_norms(spec, s1, 2);
  for (int c = 0; c < 2; ++c) CHECK(n.low[c] <= n.high[c]);
}

TEST_CASE("system validation") {
  SystemSpec spec;
  spec.m = 2;
  spec.speeds = {SpeedTriple{}, SpeedTriple{}};
  Grid g = make_grid(16, 8.0);
  CHECK(spec.separation(g) == 0.0);
  spec.speeds[1].eps = {0.49, 0.49, 0.49};
  CHECK(spec.separation(g) > 0.1);
  spec.terms = {{Term{1.0, {Factor{0, 0}, Factor{1, 1}, Factor{1, 2}}}}, {}};
  spec.validate();
  spec.no_self_interaction = true;
  CHECK_THROWS(spec.validate());
  spec.terms[0][0].f[0].comp = 5;
  spec.no_self_interaction = false;
  CHECK_THROWS(spec.validate());
  spec.speeds[0].eps[2] = 0.0;
  CHECK_THROWS(spec.speeds[0].validate());
  SystemSpec one = single({1, 1, 1});
  SystemState s = make_state(one, {WaveState{ScalarField(g, 1.0), ScalarField(g, 1.0)}}, 1.0, 0);
  CHECK_THROWS(semilinear_step(one, s, 0.2));
  CHECK_THROWS(make_state(one, {WaveState{ScalarField(g), ScalarField(g)}}, 0.5, 0));
}
