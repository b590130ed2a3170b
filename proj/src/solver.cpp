#include "aniso/solver.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace aniso {

double SpeedTriple::cone_radius(const Vec3& x) const {
  double s = 0.0;
  for (int j = 0; j < 3; ++j) s += std::pow(eps[j], cone_exponent) * x[j] * x[j];
  return std::sqrt(s);
}

double SpeedTriple::omega(double kx, double ky, double kz) const {
  return std::sqrt(eps[0] * kx * kx + eps[1] * ky * ky + eps[2] * kz * kz);
}

void SpeedTriple::validate() const {
  for (double e : eps)
    if (!(e > 0.0)) throw std::invalid_argument("SpeedTriple: eps_j must be positive");
}

void SystemSpec::validate() const {
  if (m < 1) throw std::invalid_argument("SystemSpec: m must be >= 1");
  if (static_cast<int>(speeds.size()) != m)
    throw std::invalid_argument("SystemSpec: one speed triple per component");
  for (const auto& s : speeds) s.validate();
  if (!terms.empty() && static_cast<int>(terms.size()) != m)
    throw std::invalid_argument("SystemSpec: one term list per component");
  for (const auto& comp : terms)
    for (const auto& t : comp)
      for (const auto& f : t.f)
        if (f.comp < 0 || f.comp >= m || f.deriv < 0 || f.deriv > 3)
          throw std::invalid_argument("SystemSpec: factor out of range");
  if (no_self_interaction && !aniso::no_self_interaction(terms))
    throw std::invalid_argument("SystemSpec: a term repeats a component (self-interaction)");
}

double SystemSpec::separation(const Grid& g) const {
  double best = std::numeric_limits<double>::infinity();
  const double h = g.spacing();
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        Vec3 x{g.coord(i), g.coord(j), g.coord(k)};
        if (std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) < h) continue;
        for (int a = 0; a < m; ++a)
          for (int b = a + 1; b < m; ++b) {
            double ra = speeds[a].cone_radius(x), rb = speeds[b].cone_radius(x);
            best = std::min(best, std::abs(ra - rb) / std::max(ra, rb));
          }
      }
  return best;
}

void propagate(Spectrum& u, Spectrum& v, double dt, const SpeedTriple& sp) {
  for_each_mode(u.grid, [&](std::size_t i, double kx, double ky, double kz, bool nyq) {
    if (nyq) {
      u.c[i] = v.c[i] = 0.0;
      return;
    }
    double w = sp.omega(kx, ky, kz);
    cplx a = u.c[i], b = v.c[i];
    if (w == 0.0) {
      u.c[i] = a + dt * b;
      return;
    }
    double c = std::cos(w * dt), s = std::sin(w * dt);
    u.c[i] = c * a + s / w * b;
    v.c[i] = -w * s * a + c * b;
  });
}

void propagate(std::vector<Spectrum>& u, std::vector<Spectrum>& v, double dt, const SpeedTriple& sp) {
  if (u.size() != v.size()) throw std::invalid_argument("propagate: level mismatch");
  if (u.empty()) return;
  const std::size_t L = u.size();
  for_each_mode(u[0].grid, [&](std::size_t i, double kx, double ky, double kz, bool nyq) {
    if (nyq) {
      for (std::size_t l = 0; l < L; ++l) u[l].c[i] = v[l].c[i] = 0.0;
      return;
    }
    double w = sp.omega(kx, ky, kz);
    if (w == 0.0) {
      for (std::size_t l = 0; l < L; ++l) u[l].c[i] += dt * v[l].c[i];
      return;
    }
    double c = std::cos(w * dt), s = std::sin(w * dt);
    for (std::size_t l = 0; l < L; ++l) {
      cplx a = u[l].c[i], b = v[l].c[i];
      u[l].c[i] = c * a + s / w * b;
      v[l].c[i] = -w * s * a + c * b;
    }
  });
}

WaveState exact_linear_step(const WaveState& s, double dt, const SpeedTriple& sp) {
  Spectrum u = forward(s.phi), v = forward(s.phi_t);
  propagate(u, v, dt, sp);
  double t = s.phi.time + dt;
  return {inverse(u, t), inverse(v, t)};
}

WaveState SystemState::base(int comp) const {
  return {inverse(psi.at(comp).at(0), t), inverse(dpsi.at(comp).at(0), t)};
}

vf::Lattice SystemState::lattice(const SystemSpec& spec, int comp) const {
  vf::Lattice lat;
  lat.t = t;
  lat.eps = spec.speeds.at(comp).eps;
  for (int j = 0; j <= order; ++j) {
    lat.psi.push_back(inverse(psi[comp][j], t));
    lat.dpsi.push_back(inverse(dpsi[comp][j], t));
  }
  return lat;
}

namespace {

void zero_nyquist(Spectrum& s) {
  for_each_mode(s.grid, [&](std::size_t i, double, double, double, bool nyq) {
    if (nyq) s.c[i] = 0.0;
  });
}

Spectrum band_forward(const ScalarField& f) {
  Spectrum s = forward(f);
  zero_nyquist(s);
  return s;
}

DerivTable table_from_levels(const std::vector<std::vector<ScalarField>>& psi,
                             const std::vector<std::vector<ScalarField>>& dpsi, int order) {
  DerivTable d;
  d.m = static_cast<int>(psi.size());
  d.order = order;
  d.v.resize(d.m);
  for (int a = 0; a < d.m; ++a) {
    d.v[a].resize(4 * (order + 1));
    for (int p = 0; p <= order; ++p) {
      d.at(a, 0, p) = dpsi[a][p];
      auto G = gradient(psi[a][p]);
      for (int k = 0; k < 3; ++k) d.at(a, k + 1, p) = std::move(G[k]);
    }
  }
  return d;
}

bool has_terms(const SystemSpec& spec) {
  for (const auto& c : spec.terms)
    if (!c.empty()) return true;
  return false;
}

std::vector<std::vector<ScalarField>> sources(const SystemSpec& spec, const DerivTable& d,
                                              int order, double t) {
  const Grid& g = d.v.at(0).at(0).grid;
  std::vector<std::vector<ScalarField>> src;
  if (has_terms(spec)) {
    src = lattice_sources(commuted_nonlinearity(spec.terms, d, nullptr, order), order);
  } else {
    src.assign(spec.m, std::vector<ScalarField>(order + 1, ScalarField(g)));
  }
  if (spec.forcing) {
    if (order != 0) throw std::invalid_argument("prescribed forcing needs lattice order 0");
    for (int i = 0; i < spec.m; ++i) src[i][0] += spec.forcing(i, t, g);
  }
  return src;
}

}  // namespace

SystemState make_state(const SystemSpec& spec, const std::vector<WaveState>& data, double t0,
                       int order) {
  spec.validate();
  if (static_cast<int>(data.size()) != spec.m)
    throw std::invalid_argument("make_state: one data pair per component");
  if (!(t0 >= 1.0)) throw std::invalid_argument("make_state: t0 must be >= 1");
  if (order < 0) throw std::invalid_argument("make_state: negative order");
  const int m = spec.m;
  std::vector<std::vector<ScalarField>> psi(m), dpsi(m);
  for (int i = 0; i < m; ++i) {
    psi[i].push_back(band_limit(data[i].phi));
    dpsi[i].push_back(band_limit(data[i].phi_t));
  }
  for (int j = 0; j < order; ++j) {
    // Box S^j phi_i from levels 0..j of every component
    DerivTable d = table_from_levels(psi, dpsi, j);
    auto src = sources(spec, d, j, t0);
    for (int i = 0; i < m; ++i) {
      ScalarField pn, dn;
      vf::next_level(psi[i][j], dpsi[i][j], src[i][j], t0, spec.speeds[i].eps, pn, dn);
      psi[i].push_back(std::move(pn));
      dpsi[i].push_back(std::move(dn));
    }
  }
  SystemState s;
  s.t = t0;
  s.order = order;
  s.grid = data[0].phi.grid;
  s.psi.resize(m);
  s.dpsi.resize(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= order; ++j) {
      s.psi[i].push_back(band_forward(psi[i][j]));
      s.dpsi[i].push_back(band_forward(dpsi[i][j]));
    }
  return s;
}

DerivTable derivative_table(const SystemState& s) {
  DerivTable d;
  d.m = s.m();
  d.order = s.order;
  d.v.resize(d.m);
  for (int a = 0; a < d.m; ++a) {
    d.v[a].resize(4 * (s.order + 1));
    for (int p = 0; p <= s.order; ++p) {
      d.at(a, 0, p) = inverse(s.dpsi[a][p], s.t);
      for (int k = 0; k < 3; ++k) {
        MultiIndex3 e{0, 0, 0};
        e[k] = 1;
        d.at(a, k + 1, p) = derivative_of(s.psi[a][p], e, s.t);
      }
    }
  }
  return d;
}

DerivTable time_derivative_table(const SystemSpec& spec, const SystemState& s,
                                 const std::vector<std::vector<ScalarField>>& src) {
  DerivTable d;
  d.m = s.m();
  d.order = s.order;
  d.v.resize(d.m);
  for (int a = 0; a < d.m; ++a) {
    d.v[a].resize(4 * (s.order + 1));
    const Vec3& e = spec.speeds[a].eps;
    for (int p = 0; p <= s.order; ++p) {
      // d_t^2 psi_p = Lap_eps psi_p - Box psi_p
      ScalarField tt = derivative_of(s.psi[a][p], {2, 0, 0}, s.t);
      tt = e[0] * tt;
      axpy(e[1], derivative_of(s.psi[a][p], {0, 2, 0}, s.t), tt);
      axpy(e[2], derivative_of(s.psi[a][p], {0, 0, 2}, s.t), tt);
      tt -= src[a][p];
      d.at(a, 0, p) = std::move(tt);
      for (int k = 0; k < 3; ++k) {
        MultiIndex3 ek{0, 0, 0};
        ek[k] = 1;
        d.at(a, k + 1, p) = derivative_of(s.dpsi[a][p], ek, s.t);
      }
    }
  }
  return d;
}

namespace {

template <typename F>
void for_each_full_mode(const Grid& g, F&& fn) {
  const int n = g.n;
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k, ++idx) {
        bool nyq = i == n / 2 || j == n / 2 || k == n / 2;
        fn(idx, g.wavenumber(i), g.wavenumber(j), g.wavenumber(k), nyq);
      }
}

}  // namespace

StepInfo semilinear_step(const SystemSpec& spec, SystemState& s, double dt) {
  if (!(dt > 0.0 && dt <= 0.1 + 1e-12))
    throw std::invalid_argument("semilinear_step: dt must lie in (0, 0.1]");
  const int m = s.m();
  auto half = [&](double h) {
    for (int i = 0; i < m; ++i)
      propagate(s.psi[i], s.dpsi[i], h, spec.speeds[i]);
  };
  StepInfo info;
  half(0.5 * dt);
  s.t += 0.5 * dt;
  if (has_terms(spec) || spec.forcing) {
    DerivTable d = derivative_table(s);
    auto grad_max = [&](const DerivTable& tab) {
      double mx = 0.0;
      for (int a = 0; a < m; ++a)
        for (int k = 0; k < 4; ++k) mx = std::max(mx, max_abs(tab.at(a, k, 0)));
      return mx;
    };
    info.max_grad = grad_max(d);
    std::vector<std::vector<ScalarField>> v0(m);
    for (int a = 0; a < m; ++a)
      for (int p = 0; p <= s.order; ++p) v0[a].push_back(d.at(a, 0, p));
    // midpoint rule for d_t psi' = -Box psi with psi frozen
    auto src = sources(spec, d, s.order, s.t);
    for (int a = 0; a < m; ++a)
      for (int p = 0; p <= s.order; ++p) {
        d.at(a, 0, p) = v0[a][p];
        axpy(-0.5 * dt, src[a][p], d.at(a, 0, p));
      }
    info.max_grad = std::max(info.max_grad, grad_max(d));
    src = sources(spec, d, s.order, s.t);
    for (int a = 0; a < m; ++a)
      for (int p = 0; p <= s.order; ++p) {
        Spectrum inc = band_forward(src[a][p]);
        for (std::size_t i = 0; i < inc.c.size(); ++i) s.dpsi[a][p].c[i] -= dt * inc.c[i];
        if (p == 0 && !s.duhamel.empty()) {
          auto full = full_spectrum(inc);
          auto& acc = s.duhamel[a];
          for_each_full_mode(s.grid, [&](std::size_t i, double kx, double ky, double kz, bool nyq) {
            if (!nyq) acc[i] -= dt * std::polar(1.0, s.t * spec.speeds[a].omega(kx, ky, kz)) * full[i];
          });
        }
      }
    info.warning = info.max_grad > 1.0;
  }
  half(0.5 * dt);
  s.t += 0.5 * dt;
  return info;
}

HalfWave half_wave_profile(const WaveState& s, double t, const SpeedTriple& sp) {
  const Grid& g = s.phi.grid;
  auto u = full_spectrum(forward(s.phi));
  auto v = full_spectrum(forward(s.phi_t));
  HalfWave hw;
  hw.grid = g;
  hw.t = t;
  hw.v.assign(u.size(), 0.0);
  for_each_full_mode(g, [&](std::size_t i, double kx, double ky, double kz, bool nyq) {
    if (nyq) return;
    double w = sp.omega(kx, ky, kz);
    hw.v[i] = std::polar(1.0, t * w) * (v[i] - cplx(0, w) * u[i]);
  });
  return hw;
}

std::vector<cplx> half_wave_u(const WaveState& s, const SpeedTriple& sp) {
  const Grid& g = s.phi.grid;
  auto u = full_spectrum(forward(s.phi));
  auto v = full_spectrum(forward(s.phi_t));
  std::vector<cplx> U(u.size(), 0.0);
  for_each_full_mode(g, [&](std::size_t i, double kx, double ky, double kz, bool nyq) {
    if (nyq) return;
    U[i] = v[i] - cplx(0, sp.omega(kx, ky, kz)) * u[i];
  });
  return inverse_c2c(U, g.n);
}

double profile_distance(const HalfWave& a, const HalfWave& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("profile_distance: grid mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.v.size(); ++i) s += std::norm(a.v[i] - b.v[i]);
  return std::sqrt(s / static_cast<double>(a.grid.volume_count()) * a.grid.cell_volume());
}

double scattering_drift(const Trajectory& tr, int comp, double t1, double t2) {
  if (t2 < t1) throw std::invalid_argument("scattering_drift: t2 < t1");
  auto find = [&](const std::map<double, std::vector<HalfWave>>& m, double t) -> const HalfWave* {
    for (const auto& [tt, v] : m)
      if (std::abs(tt - t) < 1e-9) return &v.at(comp);
    return nullptr;
  };
  const HalfWave *a = find(tr.duhamel, t1), *b = find(tr.duhamel, t2);
  if (!a || !b) {
    a = find(tr.profiles, t1);
    b = find(tr.profiles, t2);
  }
  if (!a || !b) throw std::invalid_argument("scattering_drift: no profile recorded at the requested time");
  return profile_distance(*a, *b);
}

namespace {

CommutedSource diagnostics_source(const SystemSpec& spec, const SystemState& s, int k) {
  if (k > s.order) throw std::invalid_argument("nonlinear norms: lattice order below k");
  DerivTable d = derivative_table(s);
  auto src = sources(spec, d, s.order, s.t);
  DerivTable dt = time_derivative_table(spec, s, src);
  if (!has_terms(spec)) {
    CommutedSource z;
    const Grid& g = s.grid;
    z.sq.assign(s.m(), std::vector<ScalarField>(k + 1, ScalarField(g)));
    z.dt_sq = z.sq;
    return z;
  }
  return commuted_nonlinearity(spec.terms, d, &dt, k);
}

}  // namespace

NonlinearNorms nonlinear_energy_norms(const SystemSpec& spec, const SystemState& s, int k) {
  CommutedSource cs = diagnostics_source(spec, s, k);
  NonlinearNorms out;
  for (int i = 0; i < s.m(); ++i) {
    std::vector<Spectrum> a, b;
    for (int q = 0; q <= k; ++q) {
      a.push_back(forward(cs.sq[i][q]));
      b.push_back(forward(cs.dt_sq[i][q]));
    }
    out.high.push_back(std::sqrt(vf::word_norms(a, b, k).energy_sq));
    out.low.push_back(k >= 1 ? std::sqrt(vf::word_norms(a, b, k - 1).energy_sq) : 0.0);
  }
  return out;
}

std::pair<double, double> nonlinearity_L1_L2_norms(const SystemSpec& spec, const SystemState& s,
                                                   int comp, int k) {
  CommutedSource cs = diagnostics_source(spec, s, k);
  std::vector<Spectrum> a, b;
  for (int q = 0; q <= k; ++q) {
    a.push_back(forward(cs.sq.at(comp)[q]));
    b.push_back(forward(cs.dt_sq.at(comp)[q]));
  }
  double l2 = std::sqrt(vf::word_norms(a, b, k).energy_sq);
  double l1 = 0.0;
  const double h3 = s.grid.cell_volume();
  for (const auto& form : vf::word_forms(k)) {
    ScalarField f(s.grid, s.t);
    for (const auto& t : form.terms) axpy(t.coef, derivative_of(a[t.j], t.alpha, s.t), f);
    double acc = 0.0;
    for (double v : f.data) acc += std::abs(v);
    l1 += form.multiplicity * acc * h3;
  }
  return {l1, l2};
}

}  // namespace aniso
