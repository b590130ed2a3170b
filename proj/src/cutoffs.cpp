#include "aniso/cutoffs.hpp"

#include <cmath>
#include <stdexcept>

namespace aniso::cutoffs {

namespace {

// branch polynomials on the left half line, y = x + 3 or y = x + 1
double left(double x) {
  if (x <= -3.0) return 0.0;
  if (x <= -2.0) return 0.25 * std::pow(x + 3.0, 11);
  if (x <= -1.0) {
    double y = x + 1.0;
    return 0.25 * (-19.0 * std::pow(y, 11) - 22.0 * std::pow(y, 10) + 4.0);
  }
  return 1.0;
}

double left_d1(double x) {
  if (x <= -3.0) return 0.0;
  if (x <= -2.0) return 2.75 * std::pow(x + 3.0, 10);
  if (x <= -1.0) {
    double y = x + 1.0;
    return 0.25 * (-209.0 * std::pow(y, 10) - 220.0 * std::pow(y, 9));
  }
  return 0.0;
}

double left_d2(double x) {
  if (x <= -3.0) return 0.0;
  if (x <= -2.0) return 27.5 * std::pow(x + 3.0, 9);
  if (x <= -1.0) {
    double y = x + 1.0;
    return 0.25 * (-2090.0 * std::pow(y, 9) - 1980.0 * std::pow(y, 8));
  }
  return 0.0;
}

}  // namespace

double chi(double x) { return x <= 0.0 ? left(x) : left(-x); }
double chi_d1(double x) { return x <= 0.0 ? left_d1(x) : -left_d1(-x); }
double chi_d2(double x) { return x <= 0.0 ? left_d2(x) : left_d2(-x); }

double chi_smoothness_sup(long sample_count, double a, double b) {
  if (sample_count < 2) throw std::invalid_argument("chi_smoothness_sup: need samples");
  double best = 0.0;
  for (long i = 0; i < sample_count; ++i) {
    double x = a + (b - a) * static_cast<double>(i) / static_cast<double>(sample_count - 1);
    double c = chi(x);
    if (c <= 0.0) continue;
    double d1 = chi_d1(x), d2 = chi_d2(x);
    best = std::max(best, (d1 * d1 + d2 * d2) / c);
  }
  return best;
}

double chi_scaled(int k, double x) { return chi(std::ldexp(x, -k)); }
double chi_band(int k, double x) { return chi_scaled(k, x) - chi_scaled(k - 1, x); }
double chi_ge(int k, double x) { return 1.0 - chi_scaled(k - 1, x); }

double chi_range(int k1, int k2, double x) {
  if (k1 > k2) throw std::invalid_argument("chi_range: k1 > k2");
  double s = 0.0;
  for (int k = k1; k <= k2; ++k) s += chi_band(k, x);
  return s;
}

double chi_scaled_d1(int k, double x) { return std::ldexp(chi_d1(std::ldexp(x, -k)), -k); }
double chi_scaled_d2(int k, double x) { return std::ldexp(chi_d2(std::ldexp(x, -k)), -2 * k); }

DyadicIndex make_index(int k, int l, double t) {
  if (!(t >= 1.0)) throw std::invalid_argument("make_index: t must be >= 1");
  DyadicIndex idx;
  idx.k = k;
  idx.l = l;
  idx.m = static_cast<int>(std::ceil(std::log2(t)));
  if (idx.m < 1) idx.m = 1;
  idx.l_bar = -idx.m - k;
  return idx;
}

double angular_cutoff(const DyadicIndex& idx, const Vec3& xi, const Vec3& x, double t) {
  if (t == 0.0) throw std::invalid_argument("angular_cutoff: t = 0");
  double xin = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
  if (xin == 0.0) throw std::invalid_argument("angular_cutoff: xi = 0");
  // l_bar >= 2 leaves the single index l = l_bar and the trivial partition
  if (idx.l_bar >= 2) {
    if (idx.l != idx.l_bar) throw std::invalid_argument("angular_cutoff: l != l_bar >= 2");
    return 1.0;
  }
  if (idx.l < idx.l_bar || idx.l > 2)
    throw std::invalid_argument("angular_cutoff: l outside [l_bar, 2]");
  double a = 1.0 - (x[0] * xi[0] + x[1] * xi[1] + x[2] * xi[2]) / (t * xin);
  if (idx.l == idx.l_bar) return chi_scaled(idx.l_bar, a);
  if (idx.l == 2) return chi_ge(2, a);
  return chi_band(idx.l, a);
}

Spectrum pk_symbol(const Spectrum& s, int k) {
  Spectrum out(s.grid);
  for_each_mode(s.grid, [&](std::size_t i, double kx, double ky, double kz, bool nyq) {
    if (nyq) {
      out.c[i] = 0.0;
      return;
    }
    out.c[i] = s.c[i] * chi_band(k, std::sqrt(kx * kx + ky * ky + kz * kz));
  });
  return out;
}

ScalarField pk_project(const ScalarField& f, int k) { return inverse(pk_symbol(forward(f), k), f.time); }

std::pair<int, int> resolved_band(const Grid& g) {
  double kmin = 2.0 * 3.141592653589793 / g.box_length;
  double kmax = std::sqrt(3.0) * 3.141592653589793 / g.spacing();
  // chi_k lives on (2^{k-1}, 3 2^k)
  int lo = static_cast<int>(std::floor(std::log2(kmin / 3.0)));
  int hi = static_cast<int>(std::ceil(std::log2(kmax))) + 1;
  return {lo, hi};
}

}  // namespace aniso::cutoffs
