#include "aniso/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace aniso {

namespace {

cplx ipow(double k, int p) {
  // (i k)^p
  static const cplx powers_i[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return powers_i[p % 4] * std::pow(k, p);
}

}  // namespace

Spectrum multiply_symbol(const Spectrum& s, const MultiIndex3& alpha) {
  for (int a : alpha)
    if (a < 0) throw std::invalid_argument("negative derivative order");
  const Grid& g = s.grid;
  const int n = g.n, nz = n / 2 + 1;
  // per-axis factors; a zero factor on each Nyquist index
  std::vector<cplx> fx(n), fy(n), fz(nz);
  for (int m = 0; m < n; ++m) {
    fx[m] = m == n / 2 ? 0.0 : ipow(g.wavenumber(m), alpha[0]);
    fy[m] = m == n / 2 ? 0.0 : ipow(g.wavenumber(m), alpha[1]);
  }
  for (int m = 0; m < nz; ++m) fz[m] = m == n / 2 ? 0.0 : ipow(g.wavenumber(m), alpha[2]);
  Spectrum out(g);
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const bool zero = i == n / 2 || j == n / 2;
      for (int k = 0; k < nz; ++k, ++idx)
        out.c[idx] = zero || k == n / 2 ? cplx(0.0) : s.c[idx] * fx[i] * fy[j] * fz[k];
    }
  return out;
}

ScalarField derivative_of(const Spectrum& s, const MultiIndex3& alpha, double time) {
  return inverse(multiply_symbol(s, alpha), time);
}

ScalarField spectral_derivative(const ScalarField& f, const MultiIndex3& alpha) {
  return derivative_of(forward(f), alpha, f.time);
}

ScalarField band_limit(const ScalarField& f) { return spectral_derivative(f, {0, 0, 0}); }

std::array<ScalarField, 3> gradient(const ScalarField& f) {
  Spectrum s = forward(f);
  return {derivative_of(s, {1, 0, 0}, f.time), derivative_of(s, {0, 1, 0}, f.time),
          derivative_of(s, {0, 0, 1}, f.time)};
}

std::array<ScalarField, 6> hessian(const ScalarField& f) {
  Spectrum s = forward(f);
  return {derivative_of(s, {2, 0, 0}, f.time), derivative_of(s, {0, 2, 0}, f.time),
          derivative_of(s, {0, 0, 2}, f.time), derivative_of(s, {1, 1, 0}, f.time),
          derivative_of(s, {1, 0, 1}, f.time), derivative_of(s, {0, 1, 1}, f.time)};
}

ScalarField laplacian(const ScalarField& f) { return weighted_laplacian(f, {1.0, 1.0, 1.0}); }

ScalarField weighted_laplacian(const ScalarField& f, const Vec3& eps) {
  Spectrum s = forward(f);
  for_each_mode(f.grid, [&](std::size_t idx, double kx, double ky, double kz, bool nyq) {
    s.c[idx] *= nyq ? 0.0 : -(eps[0] * kx * kx + eps[1] * ky * ky + eps[2] * kz * kz);
  });
  return inverse(s, f.time);
}

ScalarField euler_derivative(const ScalarField& f) {
  auto g = gradient(f);
  ScalarField out(f.grid, f.time);
  const Grid& gr = f.grid;
  for (int i = 0; i < gr.n; ++i)
    for (int j = 0; j < gr.n; ++j)
      for (int k = 0; k < gr.n; ++k) {
        std::size_t id = gr.index(i, j, k);
        out.data[id] = gr.coord(i) * g[0].data[id] + gr.coord(j) * g[1].data[id] +
                       gr.coord(k) * g[2].data[id];
      }
  return out;
}

ScalarField radial_derivative(const ScalarField& f) {
  ScalarField e = euler_derivative(f);
  ScalarField r = radius_field(f.grid);
  for (std::size_t i = 0; i < e.size(); ++i) e.data[i] /= r.data[i];
  return e;
}

PolarJet polar_jet(const ScalarField& f) {
  const Grid& g = f.grid;
  PolarJet J;
  J.r = radius_field(g);
  Spectrum s = forward(f);
  J.grad = {derivative_of(s, {1, 0, 0}, f.time), derivative_of(s, {0, 1, 0}, f.time),
            derivative_of(s, {0, 0, 1}, f.time)};
  J.hess = {derivative_of(s, {2, 0, 0}, f.time), derivative_of(s, {0, 2, 0}, f.time),
            derivative_of(s, {0, 0, 2}, f.time), derivative_of(s, {1, 1, 0}, f.time),
            derivative_of(s, {1, 0, 1}, f.time), derivative_of(s, {0, 1, 1}, f.time)};
  const std::size_t N = g.volume_count();
  J.dr = ScalarField(g, f.time);
  J.drr = ScalarField(g, f.time);
  J.lap = ScalarField(g, f.time);
  J.slap = ScalarField(g, f.time);
  J.ang_sq = ScalarField(g, f.time);
  J.ang_hess_sq = ScalarField(g, f.time);
  J.ang_dr_sq = ScalarField(g, f.time);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        std::size_t id = g.index(i, j, k);
        const double r = J.r.data[id];
        const double xh[3] = {g.coord(i) / r, g.coord(j) / r, g.coord(k) / r};
        const double gv[3] = {J.grad[0].data[id], J.grad[1].data[id], J.grad[2].data[id]};
        const double H[3][3] = {
            {J.hess[0].data[id], J.hess[3].data[id], J.hess[4].data[id]},
            {J.hess[3].data[id], J.hess[1].data[id], J.hess[5].data[id]},
            {J.hess[4].data[id], J.hess[5].data[id], J.hess[2].data[id]}};
        double dr = 0.0, Hx[3] = {0, 0, 0};
        for (int a = 0; a < 3; ++a) {
          dr += xh[a] * gv[a];
          for (int b = 0; b < 3; ++b) Hx[a] += H[a][b] * xh[b];
        }
        double drr = 0.0, Hsq = 0.0, Hxsq = 0.0, gsq = 0.0;
        for (int a = 0; a < 3; ++a) {
          drr += xh[a] * Hx[a];
          Hxsq += Hx[a] * Hx[a];
          gsq += gv[a] * gv[a];
          for (int b = 0; b < 3; ++b) Hsq += H[a][b] * H[a][b];
        }
        const double lap = H[0][0] + H[1][1] + H[2][2];
        // P H P with P = I - xhat xhat^T
        const double php_sq = Hsq - 2.0 * Hxsq + drr * drr;
        const double tr_php = lap - drr;
        // grad(d_r f) = H xhat + (grad f - xhat d_r f)/r
        double gdr_sq = 0.0;
        for (int a = 0; a < 3; ++a) {
          double v = Hx[a] + (gv[a] - xh[a] * dr) / r;
          gdr_sq += v * v;
        }
        J.dr.data[id] = dr;
        J.drr.data[id] = drr;
        J.lap.data[id] = lap;
        J.slap.data[id] = lap - drr - 2.0 / r * dr;
        J.ang_sq.data[id] = gsq - dr * dr;
        // covariant Hessian on S_r: P H P - (d_r f / r) P
        J.ang_hess_sq.data[id] = php_sq - 2.0 / r * dr * tr_php + 2.0 / (r * r) * dr * dr;
        J.ang_dr_sq.data[id] = gdr_sq - drr * drr;
      }
  (void)N;
  return J;
}

ScalarField slashed_laplacian(const ScalarField& f) { return polar_jet(f).slap; }

ScalarField angular_gradient_sq(const ScalarField& f) {
  auto g = gradient(f);
  ScalarField dr = radial_derivative(f);
  ScalarField out(f.grid, f.time);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double gsq = g[0].data[i] * g[0].data[i] + g[1].data[i] * g[1].data[i] +
                 g[2].data[i] * g[2].data[i];
    out.data[i] = gsq - dr.data[i] * dr.data[i];
  }
  return out;
}

double norm(const ScalarField& f, const ScalarField* weight, const Region& region,
            NormKind kind) {
  const Grid& g = f.grid;
  if (weight) check_same_grid(f, *weight);
  double acc = 0.0;
  std::size_t count = 0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        Vec3 x{g.coord(i), g.coord(j), g.coord(k)};
        if (!region.contains(f.time, x)) continue;
        std::size_t id = g.index(i, j, k);
        double w = weight ? weight->data[id] : 1.0;
        if (w < 0.0) throw std::invalid_argument("norm: negative weight");
        ++count;
        if (kind == NormKind::L2)
          acc += w * f.data[id] * f.data[id];
        else
          acc = std::max(acc, w * std::abs(f.data[id]));
      }
  if (count == 0) throw std::invalid_argument("norm: empty region");
  return kind == NormKind::L2 ? std::sqrt(acc * g.cell_volume()) : acc;
}

double integrate(const ScalarField& f) {
  double acc = 0.0;
  for (double v : f.data) acc += v;
  return acc * f.grid.cell_volume();
}

double l2_spectral(const Spectrum& s) {
  const int n = s.grid.n;
  const int nz = s.nz();
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < nz; ++k) acc += hermitian_weight(n, k) * std::norm(s.c[s.index(i, j, k)]);
  // Parseval: sum |f|^2 = (1/N) sum |fhat|^2
  double N = static_cast<double>(s.grid.volume_count());
  return std::sqrt(acc / N * s.grid.cell_volume());
}

double interpolate(const ScalarField& f, const Vec3& x) {
  const Grid& g = f.grid;
  const int n = g.n;
  const int nz = n / 2 + 1;
  Spectrum s = forward(f);
  // e^{i k (x - x_0)} with x_0 the first lattice coordinate
  std::vector<cplx> ex(n), ey(n), ez(nz);
  for (int m = 0; m < n; ++m) {
    ex[m] = std::polar(1.0, g.wavenumber(m) * (x[0] - g.coord(0)));
    ey[m] = std::polar(1.0, g.wavenumber(m) * (x[1] - g.coord(0)));
  }
  for (int m = 0; m < nz; ++m) ez[m] = std::polar(1.0, g.wavenumber(m) * (x[2] - g.coord(0)));
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    if (i == n / 2) continue;
    for (int j = 0; j < n; ++j) {
      if (j == n / 2) continue;
      cplx exy = ex[i] * ey[j];
      for (int k = 0; k < nz - 1; ++k) {
        acc += hermitian_weight(n, k) * std::real(s.c[s.index(i, j, k)] * exy * ez[k]);
      }
    }
  }
  return acc / static_cast<double>(g.volume_count());
}

}  // namespace aniso
