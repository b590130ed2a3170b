#include "aniso/harness.hpp"

#include <gsl/gsl_fit.h>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace aniso {

FitResult decay_fit(const std::vector<double>& t, const std::vector<double>& v, double t_lo,
                    double t_hi) {
  if (t.size() != v.size()) throw std::invalid_argument("decay_fit: length mismatch");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo - 1e-12 || t[i] > t_hi + 1e-12) continue;
    if (!(v[i] > 0.0) || !(t[i] > 0.0))
      throw std::invalid_argument("decay_fit: non-positive value in window");
    x.push_back(std::log(t[i]));
    y.push_back(std::log(v[i]));
  }
  if (x.size() < 6) throw std::invalid_argument("decay_fit: window holds fewer than 6 samples");
  double c0, c1, cov00, cov01, cov11, sumsq;
  gsl_fit_linear(x.data(), 1, y.data(), 1, x.size(), &c0, &c1, &cov00, &cov01, &cov11, &sumsq);
  double mean = 0.0;
  for (double yy : y) mean += yy;
  mean /= static_cast<double>(y.size());
  double sst = 0.0;
  for (double yy : y) sst += (yy - mean) * (yy - mean);
  FitResult r;
  r.exponent = c1;
  r.intercept = c0;
  r.stderr_ = std::sqrt(std::max(cov11, 0.0));
  r.t_lo = t_lo;
  r.t_hi = t_hi;
  r.r2 = sst > 0.0 ? 1.0 - sumsq / sst : 1.0;
  r.samples = static_cast<int>(x.size());
  return r;
}

ScalarField gradient_magnitude(const WaveState& s) {
  auto G = gradient(s.phi);
  ScalarField out(s.phi.grid, s.phi.time);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = std::sqrt(s.phi_t[i] * s.phi_t[i] + G[0][i] * G[0][i] + G[1][i] * G[1][i] +
                       G[2][i] * G[2][i]);
  return out;
}

std::vector<double> cone_binned_sup(const WaveState& s, double t, const std::vector<double>& edges,
                                    const SpeedTriple& sp) {
  if (edges.size() < 2) throw std::invalid_argument("cone_binned_sup: need at least one bin");
  for (std::size_t b = 1; b < edges.size(); ++b)
    if (!(edges[b] > edges[b - 1])) throw std::invalid_argument("cone_binned_sup: edges not increasing");
  ScalarField mag = gradient_magnitude(s);
  const Grid& g = mag.grid;
  std::vector<double> out(edges.size() - 1, 0.0);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        double q = t - sp.cone_radius({g.coord(i), g.coord(j), g.coord(k)});
        if (q < edges.front() || q >= edges.back()) continue;
        std::size_t b = 0;
        while (q >= edges[b + 1]) ++b;
        out[b] = std::max(out[b], mag[g.index(i, j, k)]);
      }
  return out;
}

double transform_linf(const ScalarField& f) {
  Spectrum s = forward(f);
  double m = 0.0;
  for_each_mode(f.grid, [&](std::size_t i, double, double, double, bool nyq) {
    if (!nyq) m = std::max(m, std::abs(s.c[i]));
  });
  return m * f.grid.cell_volume();
}

double linf_xi_norm(const vf::Lattice& lat, int k) {
  if (k > lat.order()) throw std::invalid_argument("linf_xi_norm: lattice order below k");
  std::vector<Spectrum> a, b;
  for (int j = 0; j <= k; ++j) {
    a.push_back(forward(lat.psi[j]));
    b.push_back(forward(lat.dpsi[j]));
  }
  return vf::word_norms(a, b, k).linf_xi;
}

namespace {

// max over words |J| <= k of ||d Gamma^J phi||_Linf
double gamma_linf(const std::vector<Spectrum>& psi, const std::vector<Spectrum>& dpsi, int k,
                  double t) {
  const Grid& g = psi[0].grid;
  double best = 0.0;
  for (const auto& form : vf::word_forms(k)) {
    Spectrum a(g), b(g);
    for (const auto& term : form.terms) {
      Spectrum pa = multiply_symbol(psi[term.j], term.alpha);
      Spectrum pb = multiply_symbol(dpsi[term.j], term.alpha);
      for (std::size_t i = 0; i < a.c.size(); ++i) {
        a.c[i] += term.coef * pa.c[i];
        b.c[i] += term.coef * pb.c[i];
      }
    }
    best = std::max(best, max_abs(inverse(b, t)));
    for (int d = 0; d < 3; ++d) {
      MultiIndex3 e{0, 0, 0};
      e[d] = 1;
      best = std::max(best, max_abs(derivative_of(a, e, t)));
    }
  }
  return best;
}

}  // namespace

DiagnosticsRow compute_diagnostics(const SystemSpec& spec, const SystemState& s,
                                   const DiagnosticsConfig& cfg) {
  if (cfg.k_max > s.order || cfg.k_mid > cfg.k_max)
    throw std::invalid_argument("compute_diagnostics: lattice order below k_max");
  DiagnosticsRow row;
  row.t = s.t;
  for (int i = 0; i < s.m(); ++i) {
    auto wn = vf::word_norms(s.psi[i], s.dpsi[i], cfg.k_max);
    row.E.push_back(std::sqrt(wn.energy_sq));
    row.W.push_back(wn.linf_xi);
    row.K.push_back(gamma_linf(s.psi[i], s.dpsi[i], cfg.k_mid, s.t));
    row.cone.push_back(cone_binned_sup(s.base(i), s.t, cfg.cone_edges, spec.speeds[i]));
  }
  if (cfg.nonlinear_norms) {
    auto nn = nonlinear_energy_norms(spec, s, cfg.k_max);
    row.N_high = nn.high;
    row.N_low = nn.low;
  } else {
    row.N_high.assign(s.m(), 0.0);
    row.N_low.assign(s.m(), 0.0);
  }
  return row;
}

BootstrapMode parse_mode(const std::string& s) {
  if (s == "thm3") return BootstrapMode::Thm3;
  if (s == "thm4") return BootstrapMode::Thm4;
  throw std::invalid_argument("unknown bootstrap mode " + s);
}

std::string to_string(BootstrapMode m) { return m == BootstrapMode::Thm3 ? "thm3" : "thm4"; }

BootstrapReport bootstrap_monitor(const std::vector<DiagnosticsRow>& rows, double eps0,
                                  double delta, BootstrapMode mode, const SystemSpec& spec) {
  if (mode == BootstrapMode::Thm3 && !(spec.no_self_interaction && spec.separation_required))
    throw std::invalid_argument("bootstrap thm3 needs separated speeds and no self-interaction");
  if (mode == BootstrapMode::Thm4 && spec.m < 2)
    throw std::invalid_argument("bootstrap thm4 needs a coupled system");
  BootstrapReport rep;
  rep.bound = std::pow(eps0, 0.75);
  for (const auto& row : rows) {
    double jt = std::sqrt(1.0 + row.t * row.t);
    double v = 0.0;
    for (std::size_t i = 0; i < row.E.size(); ++i) {
      v += row.E[i];
      if (mode == BootstrapMode::Thm3)
        v += std::pow(jt, 1.5 - 2.0 * delta) * row.N_high[i] +
             std::pow(jt, 2.0 - 9.0 * delta) * row.N_low[i];
      else
        v += std::pow(jt, -delta) * row.W[i] + std::pow(jt, 1.0 - delta) * row.K[i];
    }
    rep.functional.push_back(v);
    rep.sup_value = std::max(rep.sup_value, v);
    if (v > rep.bound && !rep.first_violation) rep.first_violation = row.t;
  }
  rep.pass = !rep.first_violation.has_value();
  rep.margin = rep.sup_value > 0.0 ? rep.bound / rep.sup_value
                                   : std::numeric_limits<double>::infinity();
  return rep;
}

}  // namespace aniso
