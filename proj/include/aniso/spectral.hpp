#pragma once

#include <array>
#include <optional>

#include "aniso/fft.hpp"
#include "aniso/grid.hpp"

namespace aniso {

using MultiIndex3 = std::array<int, 3>;

// Derivatives act on the trigonometric interpolant with the Nyquist
// planes removed, so every operator returns a real band-limited field and
// mixed partials commute exactly.
ScalarField spectral_derivative(const ScalarField& f, const MultiIndex3& alpha);
ScalarField derivative_of(const Spectrum& s, const MultiIndex3& alpha, double time = 0.0);
Spectrum multiply_symbol(const Spectrum& s, const MultiIndex3& alpha);
ScalarField band_limit(const ScalarField& f);

std::array<ScalarField, 3> gradient(const ScalarField& f);
// components ordered xx, yy, zz, xy, xz, yz
std::array<ScalarField, 6> hessian(const ScalarField& f);
ScalarField laplacian(const ScalarField& f);
// sum_j eps_j d_j^2 f
ScalarField weighted_laplacian(const ScalarField& f, const Vec3& eps);
// x . grad f
ScalarField euler_derivative(const ScalarField& f);

ScalarField radial_derivative(const ScalarField& f);
ScalarField slashed_laplacian(const ScalarField& f);
ScalarField angular_gradient_sq(const ScalarField& f);

// Every polar quantity of one field computed from a single gradient/Hessian pass.
struct PolarJet {
  ScalarField r;
  std::array<ScalarField, 3> grad;
  std::array<ScalarField, 6> hess;
  ScalarField dr;          // d_r f
  ScalarField drr;         // d_r^2 f = xhat^T H xhat
  ScalarField lap;         // Laplacian
  ScalarField slap;        // slashed Laplacian
  ScalarField ang_sq;      // |slashed grad f|^2
  ScalarField ang_hess_sq; // |slashed grad^2 f|^2 (projected Hessian, frame free)
  ScalarField ang_dr_sq;   // |slashed grad d_r f|^2
};
PolarJet polar_jet(const ScalarField& f);

enum class NormKind { L2, Linf };

double norm(const ScalarField& f, const ScalarField* weight, const Region& region,
            NormKind kind);
inline double l2(const ScalarField& f) { return norm(f, nullptr, Region::all(), NormKind::L2); }
inline double linf(const ScalarField& f) {
  return norm(f, nullptr, Region::all(), NormKind::Linf);
}
// lattice quadrature of f (trapezoid rule)
double integrate(const ScalarField& f);
// L2 norm computed on the spectral side
double l2_spectral(const Spectrum& s);

// Exact trigonometric interpolation of the band-limited field at an arbitrary point.
double interpolate(const ScalarField& f, const Vec3& x);

}  // namespace aniso
