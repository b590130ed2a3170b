#include "aniso/identities.hpp"

#include <cmath>
#include <stdexcept>

#include "aniso/cutoffs.hpp"

namespace aniso::id {

namespace {

double japan(double a) { return std::sqrt(1.0 + a * a); }

// chi(c s) and its s-derivatives
WeightValue scaled_chi(double s, double c) {
  double y = c * s;
  return {cutoffs::chi(y), c * cutoffs::chi_d1(y), c * c * cutoffs::chi_d2(y)};
}

WeightValue product(const WeightValue& a, const WeightValue& b) {
  return {a.w * b.w, a.dw * b.w + a.w * b.dw, a.d2w * b.w + 2.0 * a.dw * b.dw + a.w * b.d2w};
}

WeightValue power(double r, double alpha) {
  return {std::pow(r, alpha), alpha * std::pow(r, alpha - 1.0),
          alpha * (alpha - 1.0) * std::pow(r, alpha - 2.0)};
}

WeightValue cone_cutoff(double t, double r, const Vec3& x0, int scale) {
  double r0 = std::sqrt(x0[0] * x0[0] + x0[1] * x0[1] + x0[2] * x0[2]);
  double D = std::min(japan(t - r0), std::abs(t));
  WeightValue c = scaled_chi(r - r0, std::ldexp(1.0, -scale) / D);
  return c;
}

double sum_sq(const std::array<ScalarField, 6>& H, std::size_t i) {
  return H[0][i] * H[0][i] + H[1][i] * H[1][i] + H[2][i] * H[2][i] +
         2.0 * (H[3][i] * H[3][i] + H[4][i] * H[4][i] + H[5][i] * H[5][i]);
}

}  // namespace

WeightValue WeightSpec::eval(double t, double r) const {
  switch (kind) {
    case WeightKind::PowerR:
      return power(r, alpha);
    case WeightKind::InteriorPower: {
      // r^alpha chi_{>=j}(r/t)^2, chi_{>=j}(s) = 1 - chi(2^{1-j} s)
      int j = displayed_scales ? -20 : interior_scale;
      WeightValue c = scaled_chi(r, std::ldexp(1.0, 1 - j) / t);
      WeightValue g{1.0 - c.w, -c.dw, -c.d2w};
      return product(power(r, alpha), product(g, g));
    }
    case WeightKind::ConeCutoff:
      return cone_cutoff(t, r, x0, displayed_scales ? -10 : cone_scale);
    case WeightKind::Product:
      return product(power(r, alpha), cone_cutoff(t, r, x0, displayed_scales ? -10 : cone_scale));
    case WeightKind::Custom:
      if (!custom) throw std::invalid_argument("WeightSpec: custom weight without function");
      return custom(t, r);
  }
  return {};
}

double omega_tilde(const WeightValue& v, double t, double r) {
  const double A = 1.0 - r * r / (t * t);
  // expanded d_r(r^2 w' A) / (2 r^2)
  return 2.0 / r * v.dw - v.dw * A / r - 0.5 * v.d2w * A + r / (t * t) * v.dw;
}

double weight_ratio_sup(const WeightSpec& w, double t, double r_max, long samples) {
  double best = 0.0;
  for (long i = 1; i <= samples; ++i) {
    double r = r_max * static_cast<double>(i) / static_cast<double>(samples);
    WeightValue v = w.eval(t, r);
    if (v.w <= 0.0) continue;
    best = std::max(best, (v.dw * v.dw + v.d2w * v.d2w) / v.w);
  }
  return best;
}

bool touches_boundary(const ScalarField& phi, int cells, double rel) {
  const Grid& g = phi.grid;
  double m = max_abs(phi);
  if (m == 0.0) return false;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        bool edge = i < cells || j < cells || k < cells || i >= g.n - cells ||
                    j >= g.n - cells || k >= g.n - cells;
        if (edge && std::abs(phi[g.index(i, j, k)]) > rel * m) return true;
      }
  return false;
}

BochnerReport bochner_integrated(const ScalarField& phi, double t, double tolerance) {
  if (!(t >= 1.0)) throw std::invalid_argument("bochner_integrated: t must be >= 1");
  if (touches_boundary(phi))
    throw std::invalid_argument("bochner_integrated: support touches the window boundary");
  PolarJet J = polar_jet(phi);
  const Grid& g = phi.grid;
  const double it2 = 1.0 / (t * t);
  double lhs = 0.0, base = 0.0, ang = 0.0, slap2 = 0.0, hess2 = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    double r = J.r[i];
    double A = 1.0 - r * r * it2;
    double radial = A * (J.drr[i] + 2.0 / r * J.dr[i]);
    double L = J.slap[i] + radial;
    lhs += L * L;
    base += J.ang_hess_sq[i] + 2.0 * A * J.ang_dr_sq[i] + radial * radial;
    ang += J.ang_sq[i] / (r * r);
    slap2 += J.slap[i] * J.slap[i];
    hess2 += J.ang_hess_sq[i];
  }
  const double w = g.cell_volume();
  lhs *= w;
  base *= w;
  ang *= w;
  slap2 *= w;
  hess2 *= w;

  BochnerReport rep;
  const double scale = lhs > 0.0 ? lhs : 1.0;
  auto fill = [&](IdentityReport& r, const char* name, double l, double rr, double s) {
    r.check = name;
    r.lhs = l;
    r.rhs = rr;
    r.residual = std::abs(l - rr) / s;
    r.resolution = g.n;
    r.tolerance_used = tolerance;
    r.pass = r.residual <= tolerance;
  };
  fill(rep.main, "bochner", lhs, base - ang, scale);
  fill(rep.printed, "bochner_printed_coefficient", lhs, base - 2.0 * ang, scale);
  fill(rep.laplacian, "bochner_laplacian", slap2, hess2 + ang, slap2 > 0.0 ? slap2 : 1.0);
  return rep;
}

IdentityReport first_order_integrated(const ScalarField& phi, double t, double tolerance) {
  if (!(t >= 1.0)) throw std::invalid_argument("first_order_integrated: t must be >= 1");
  if (touches_boundary(phi))
    throw std::invalid_argument("first_order_integrated: support touches the window boundary");
  PolarJet J = polar_jet(phi);
  const double it2 = 1.0 / (t * t);
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    double r = J.r[i];
    double A = 1.0 - r * r * it2;
    double L = J.slap[i] + A * (J.drr[i] + 2.0 / r * J.dr[i]);
    lhs -= L * phi[i];
    rhs += J.ang_sq[i] + A * J.dr[i] * J.dr[i] + 3.0 * it2 * phi[i] * phi[i];
  }
  const double w = phi.grid.cell_volume();
  IdentityReport rep;
  rep.check = "first_order";
  rep.lhs = lhs * w;
  rep.rhs = rhs * w;
  double scale = std::abs(rep.rhs) > 0.0 ? std::abs(rep.rhs) : 1.0;
  rep.residual = std::abs(rep.lhs - rep.rhs) / scale;
  rep.resolution = phi.grid.n;
  rep.tolerance_used = tolerance;
  rep.pass = rep.residual <= tolerance;
  return rep;
}

IdentityReport weighted_bochner_ratio(const vf::Lattice& lat, const ScalarField* f,
                                      const WeightSpec& wspec, double delta) {
  if (lat.order() < 2) throw std::invalid_argument("weighted_bochner_ratio: lattice order < 2");
  if (!(delta > 0.0)) throw std::invalid_argument("weighted_bochner_ratio: delta must be > 0");
  const double t = lat.t;
  const ScalarField& phi = lat.psi[0];
  const Grid& g = phi.grid;
  PolarJet J = polar_jet(phi);

  // sum over words |J| <= 2 of |Gamma^J phi|^2, counted with multiplicity
  ScalarField gamma2(g);
  for (const auto& form : vf::word_forms(2)) {
    ScalarField v = lat.word_field(vf::parse_word(form.representative));
    for (std::size_t i = 0; i < v.size(); ++i) gamma2[i] += form.multiplicity * v[i] * v[i];
  }
  ScalarField dr1(g);
  for (const auto& form : vf::word_forms(1)) {
    ScalarField v = radial_derivative(lat.word_field(vf::parse_word(form.representative)));
    for (std::size_t i = 0; i < v.size(); ++i) dr1[i] += form.multiplicity * v[i] * v[i];
  }

  const double it2 = 1.0 / (t * t);
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    double r = J.r[i];
    double A = 1.0 - r * r * it2;
    WeightValue v = wspec.eval(t, r);
    if (v.w < 0.0) throw std::invalid_argument("weighted_bochner_ratio: negative weight");
    double wt = omega_tilde(v, t, r);
    double tail = 0.0;
    if (v.w == 0.0) {
      if (wt != 0.0)
        throw std::invalid_argument("weighted_bochner_ratio: omega-tilde nonzero where omega = 0");
    } else {
      tail = wt * wt / v.w * phi[i] * phi[i];
    }
    lhs += v.w * (J.ang_hess_sq[i] + A * J.ang_dr_sq[i] + A * A * J.drr[i] * J.drr[i]);
    double fi = f ? (*f)[i] : 0.0;
    rhs += it2 * it2 * v.w * gamma2[i] + (it2 + 1.0 / (r * r)) * (1.0 + r * r * it2) * v.w * dr1[i] +
           v.w * fi * fi + tail;
  }
  IdentityReport rep;
  rep.check = "weighted_bochner";
  rep.lhs = lhs * g.cell_volume();
  rep.rhs = rhs * g.cell_volume();
  rep.residual = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
  rep.resolution = g.n;
  return rep;
}

namespace {

// |d^2 phi|^2 over (t, x), with d_t^2 phi = Lap_eps phi - f
ScalarField second_jet_sq(const ScalarField& phi, const ScalarField& phi_t, const ScalarField* f,
                          const Vec3& eps) {
  auto H = hessian(phi);
  auto Gt = gradient(phi_t);
  ScalarField tt = weighted_laplacian(phi, eps);
  if (f) tt -= *f;
  ScalarField out(phi.grid);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = tt[i] * tt[i] + 2.0 * (Gt[0][i] * Gt[0][i] + Gt[1][i] * Gt[1][i] + Gt[2][i] * Gt[2][i]) +
             sum_sq(H, i);
  return out;
}

}  // namespace

IdentityReport exterior_energy_check(const std::vector<ExteriorSample>& traj, const Vec3& eps) {
  if (traj.empty()) throw std::invalid_argument("exterior_energy_check: empty trajectory");
  const Grid& g = traj[0].phi.grid;
  ScalarField r = radius_field(g);
  const double w = g.cell_volume();

  auto f_of = [](const ExteriorSample& s) -> const ScalarField* { return s.f ? &*s.f : nullptr; };
  ScalarField s0 = second_jet_sq(traj[0].phi, traj[0].phi_t, f_of(traj[0]), eps);
  double data = 0.0;
  for (std::size_t i = 0; i < s0.size(); ++i) data += r[i] * r[i] * s0[i];
  data *= w;

  // ||u d Box phi||_{L2(ext Sigma_t)} at each sample
  std::vector<double> forcing(traj.size(), 0.0);
  for (std::size_t n = 0; n < traj.size(); ++n) {
    const auto& s = traj[n];
    if (!s.f) continue;
    auto G = gradient(*s.f);
    double acc = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (r[i] < s.t) continue;
      double u = s.t - r[i];
      double ft = s.f_t ? (*s.f_t)[i] : 0.0;
      acc += u * u * (ft * ft + G[0][i] * G[0][i] + G[1][i] * G[1][i] + G[2][i] * G[2][i]);
    }
    forcing[n] = std::sqrt(acc * w);
  }

  IdentityReport rep;
  rep.check = "exterior_energy";
  rep.resolution = g.n;
  double integral = 0.0;
  for (std::size_t n = 0; n < traj.size(); ++n) {
    if (n > 0) integral += 0.5 * (traj[n].t - traj[n - 1].t) * (forcing[n] + forcing[n - 1]);
    const auto& s = traj[n];
    ScalarField sq = second_jet_sq(s.phi, s.phi_t, f_of(s), eps);
    double lhs = 0.0;
    for (std::size_t i = 0; i < sq.size(); ++i)
      if (r[i] >= s.t) lhs += (s.t - r[i]) * (s.t - r[i]) * sq[i];
    lhs *= w;
    double bound = data + integral * integral;
    double ratio = bound > 0.0 ? lhs / bound : 0.0;
    if (ratio >= rep.residual) {
      rep.residual = ratio;
      rep.lhs = lhs;
      rep.rhs = bound;
    }
  }
  return rep;
}

IdentityReport sobolev_embedding_check(const ScalarField& phi, double t, const Vec3& x0,
                                       double delta, bool displayed_scales, int cone_scale) {
  const double r0 = std::sqrt(x0[0] * x0[0] + x0[1] * x0[1] + x0[2] * x0[2]);
  if (!(r0 >= std::ldexp(std::abs(t), -5)))
    throw std::invalid_argument("sobolev_embedding_check: |x0| < 2^-5 t");
  if (!(delta > 0.0 && delta <= 0.1))
    throw std::invalid_argument("sobolev_embedding_check: delta outside (0, 0.1]");
  WeightSpec ws;
  ws.kind = WeightKind::ConeCutoff;
  ws.x0 = x0;
  ws.displayed_scales = displayed_scales;
  ws.cone_scale = cone_scale;

  PolarJet J = polar_jet(phi);
  double n0 = 0.0, n1 = 0.0, n2 = 0.0, ang = 0.0, rad = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    double r = J.r[i];
    double w = ws.eval(t, r).w;
    n0 += phi[i] * phi[i];
    n1 += J.dr[i] * J.dr[i];
    n2 += J.drr[i] * J.drr[i];
    ang += w * w * r * r * r * r * J.ang_hess_sq[i];
    double q = japan(t - r);
    rad += w * w * q * q * J.dr[i] * J.dr[i];
  }
  const double h3 = phi.grid.cell_volume();
  double l2phi = std::sqrt(n0 * h3);
  double dr_all = std::sqrt((n0 + n1 + n2) * h3);
  double rhs = std::pow(dr_all, delta) * std::pow(l2phi + std::sqrt(ang * h3), 0.5 * (1.0 + delta)) *
               std::pow(l2phi + std::sqrt(rad * h3), 0.5 * (1.0 - 3.0 * delta));
  double val = std::abs(interpolate(phi, x0));
  double m = std::min(std::abs(t), japan(t - r0));
  IdentityReport rep;
  rep.check = "sobolev_embedding";
  rep.lhs = val * delta * r0 * std::pow(m, 0.5 - 2.0 * delta);
  rep.rhs = rhs;
  rep.residual = rhs > 0.0 ? rep.lhs / rhs : 0.0;
  rep.resolution = phi.grid.n;
  return rep;
}

IdentityReport interior_elliptic_check(const vf::Lattice& lat, const ScalarField* box_u,
                                       bool displayed_scales, int scale) {
  if (!(lat.t >= 1.0)) throw std::invalid_argument("interior_elliptic_check: t must be >= 1");
  if (lat.order() < 1) throw std::invalid_argument("interior_elliptic_check: lattice order < 1");
  const double t = lat.t;
  const ScalarField& u = lat.psi[0];
  const int s = displayed_scales ? -5 : scale;
  auto H = hessian(u);
  ScalarField r = radius_field(u.grid);
  double lhs = 0.0, box2 = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    lhs += sum_sq(H, i) * cutoffs::chi_scaled(s, r[i] / t);
    if (box_u) box2 += (*box_u)[i] * (*box_u)[i];
  }
  const double h3 = u.grid.cell_volume();
  double e1 = vf::gamma_energy(lat, 1);
  IdentityReport rep;
  rep.check = "interior_elliptic";
  rep.lhs = lhs * h3;
  rep.rhs = e1 * e1 / (t * t) + box2 * h3;
  rep.residual = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
  rep.resolution = u.grid.n;
  return rep;
}

}  // namespace aniso::id
