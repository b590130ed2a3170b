#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "aniso/vectorfield.hpp"

namespace aniso::id {

struct IdentityReport {
  std::string check;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  // identities: |lhs - rhs|/scale; inequalities: lhs/rhs
  int resolution = 0;
  double tolerance_used = 0.0;
  double constant = 0.0;
  bool pass = false;
};

// Radial weights omega(t, r) with their first two r-derivatives.
enum class WeightKind { PowerR, InteriorPower, ConeCutoff, Product, Custom };

struct WeightValue {
  double w = 0.0, dw = 0.0, d2w = 0.0;
};

struct WeightSpec {
  WeightKind kind = WeightKind::PowerR;
  double alpha = 4.0;
  Vec3 x0{0.0, 0.0, 0.0};
  // true: cutoff scales exactly as printed (chi_{<=-10}, chi_{>=-20}), far below lattice
  // resolution at desk scale; false: the resolvable scales below
  bool displayed_scales = false;
  int cone_scale = 0;       // chi_{<=cone_scale} when !displayed_scales
  int interior_scale = -2;  // chi_{>=interior_scale}^2(r/t) when !displayed_scales
  std::function<WeightValue(double t, double r)> custom;

  WeightValue eval(double t, double r) const;
};

// omega-tilde = (2/r) w' - (1/2r^2) d_r(r^2 w' (1 - r^2/t^2))
double omega_tilde(const WeightValue& v, double t, double r);

// sup over {omega > 0} of (|w'|^2 + |w''|^2)/w along r in (0, r_max]
double weight_ratio_sup(const WeightSpec& w, double t, double r_max, long samples = 20000);

// Integrated degenerate Bochner identity. coefficient is the factor in front of
// r^-2 |slashed grad phi|^2; the identity holds with -1.
struct BochnerReport {
  IdentityReport main;        // with the exact coefficient
  IdentityReport printed;     // the same with coefficient -2
  IdentityReport laplacian;   // int |slap|^2 = int |slashed hess|^2 + r^-2 |slashed grad|^2
};
BochnerReport bochner_integrated(const ScalarField& phi, double t, double tolerance = 1e-6);

IdentityReport first_order_integrated(const ScalarField& phi, double t, double tolerance = 1e-8);

// LHS / RHS of the weighted Bochner inequality. f = Box phi (empty for free waves).
IdentityReport weighted_bochner_ratio(const vf::Lattice& lat, const ScalarField* f,
                                      const WeightSpec& w, double delta = 0.05);

struct ExteriorSample {
  double t = 0.0;
  ScalarField phi, phi_t;
  std::optional<ScalarField> f, f_t;  // Box phi and d_t Box phi when forced
};
// LHS(t_last) / (int_{Sigma_t0} r^2 |d^2 phi|^2 + (int ||u d Box phi||_ext dt)^2)
IdentityReport exterior_energy_check(const std::vector<ExteriorSample>& traj, const Vec3& eps);

// phi(t, x0) times delta |x0| min{t,<t-|x0|>}^{1/2-2delta} over the three-factor right side
IdentityReport sobolev_embedding_check(const ScalarField& phi, double t, const Vec3& x0,
                                       double delta = 0.05, bool displayed_scales = false,
                                       int cone_scale = 0);

// int |grad^2 u|^2 chi_{<=s}(|x|/t) over t^-2 int |d Gamma^{<=1} u|^2 + int |Box u|^2
IdentityReport interior_elliptic_check(const vf::Lattice& lat, const ScalarField* box_u,
                                       bool displayed_scales = false, int scale = -1);

// true if |phi| exceeds rel * max|phi| within `cells` of the box boundary
bool touches_boundary(const ScalarField& phi, int cells = 2, double rel = 1e-9);

}  // namespace aniso::id
