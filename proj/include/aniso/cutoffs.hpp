#pragma once

#include "aniso/fft.hpp"
#include "aniso/grid.hpp"

namespace aniso::cutoffs {

// The even C^2 bump: 1 on [-1,1], 0 outside [-3,3], degree-11 polynomial joins.
double chi(double x);
double chi_d1(double x);
double chi_d2(double x);

// sup of (chi'^2 + chi''^2)/chi over {chi > 0} on a uniform sample of [a,b]
double chi_smoothness_sup(long sample_count, double a = -3.0, double b = 3.0);

double chi_scaled(int k, double x);              // chi(2^-k x)
double chi_band(int k, double x);                // chi_{<=k} - chi_{<=k-1}
double chi_range(int k1, int k2, double x);      // sum_{k1..k2} chi_k
double chi_ge(int k, double x);                  // 1 - chi_{<=k-1}

// derivatives of chi_scaled in x
double chi_scaled_d1(int k, double x);
double chi_scaled_d2(int k, double x);

struct DyadicIndex {
  int k = 0;
  int l = 0;
  int l_bar = 0;
  int m = 0;
};

// l_bar = -m - k for t in [2^{m-1}, 2^m]
DyadicIndex make_index(int k, int l, double t);

double angular_cutoff(const DyadicIndex& idx, const Vec3& xi, const Vec3& x, double t);

// Fourier multiplier with radial symbol chi_k(|xi|)
Spectrum pk_symbol(const Spectrum& s, int k);
ScalarField pk_project(const ScalarField& f, int k);
// Range of k for which chi_k has support on the resolved band of the grid.
std::pair<int, int> resolved_band(const Grid& g);

}  // namespace aniso::cutoffs
