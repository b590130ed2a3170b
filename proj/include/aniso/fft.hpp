#pragma once

#include <complex>
#include <vector>

#include "aniso/grid.hpp"

namespace aniso {

using cplx = std::complex<double>;

// Half-spectrum (r2c) coefficients, layout [i][j][k] with k in [0, n/2].
// Unnormalized forward transform; inverse divides by n^3.
struct Spectrum {
  Grid grid;
  std::vector<cplx> c;

  Spectrum() = default;
  explicit Spectrum(const Grid& g)
      : grid(g), c(static_cast<std::size_t>(g.n) * g.n * (g.n / 2 + 1)) {}
  int nz() const { return grid.n / 2 + 1; }
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * grid.n + j) * nz() + k;
  }
};

Spectrum forward(const ScalarField& f);
ScalarField inverse(const Spectrum& s, double time = 0.0);

// Full complex transform on the n^3 lattice (for non-Hermitian profiles).
std::vector<cplx> forward_c2c(const std::vector<cplx>& f, int n);
std::vector<cplx> inverse_c2c(const std::vector<cplx>& f, int n);

// Expand a half spectrum to the full n^3 spectral lattice.
std::vector<cplx> full_spectrum(const Spectrum& s);

// Iterate over half-spectrum modes with their wavevector.
// Nyquist flag is true when any component sits on the Nyquist plane.
template <typename F>
void for_each_mode(const Grid& g, F&& fn) {
  const int n = g.n;
  const int nz = n / 2 + 1;
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i) {
    double kx = g.wavenumber(i);
    for (int j = 0; j < n; ++j) {
      double ky = g.wavenumber(j);
      for (int k = 0; k < nz; ++k, ++idx) {
        double kz = g.wavenumber(k);
        bool nyq = (i == n / 2) || (j == n / 2) || (k == n / 2);
        fn(idx, kx, ky, kz, nyq);
      }
    }
  }
}

// Multiplicity of a half-spectrum mode in the full sum (1 on k=0 and k=n/2 planes, else 2).
inline double hermitian_weight(int n, int k) { return (k == 0 || k == n / 2) ? 1.0 : 2.0; }

}  // namespace aniso
