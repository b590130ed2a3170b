#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "aniso/nonlinearity.hpp"
#include "aniso/vectorfield.hpp"

namespace aniso {

struct SpeedTriple {
  Vec3 eps{1.0, 1.0, 1.0};
  // r_i = sqrt(sum eps_j^e x_j^2); e = -2 as displayed, -1 gives the true cone of Box_eps
  double cone_exponent = -2.0;

  double cone_radius(const Vec3& x) const;
  double omega(double kx, double ky, double kz) const;
  void validate() const;
};

struct SystemSpec {
  int m = 1;
  std::vector<SpeedTriple> speeds;
  std::vector<std::vector<Term>> terms;  // terms[i] builds N_i
  bool separation_required = false;
  bool no_self_interaction = false;
  double separation_margin = 0.1;
  // extra prescribed source added to N_i (manufactured solutions); order-0 runs only
  std::function<ScalarField(int comp, double t, const Grid& g)> forcing;

  void validate() const;
  // min over lattice points with |x| >= h of |r_i - r_j| / max(r_i, r_j)
  double separation(const Grid& g) const;
};

struct WaveState {
  ScalarField phi, phi_t;
};

void propagate(Spectrum& u, Spectrum& v, double dt, const SpeedTriple& sp);
// every lattice level at once; one cos/sin per mode
void propagate(std::vector<Spectrum>& u, std::vector<Spectrum>& v, double dt, const SpeedTriple& sp);
WaveState exact_linear_step(const WaveState& s, double dt, const SpeedTriple& sp);

// Levels S^j phi_i and d_t S^j phi_i held as spectra. psi[i][j].
struct SystemState {
  double t = 1.0;
  int order = 0;
  Grid grid;
  std::vector<std::vector<Spectrum>> psi, dpsi;
  // when sized m x full spectrum: running sum of the level-0 kicks in profile
  // variables, e^{i t omega} dv, so profile increments avoid cancellation
  std::vector<std::vector<cplx>> duhamel;

  int m() const { return static_cast<int>(psi.size()); }
  WaveState base(int comp) const;
  vf::Lattice lattice(const SystemSpec& spec, int comp) const;
};

// Populate the commuted lattice at t0 from data (phi_i, d_t phi_i).
SystemState make_state(const SystemSpec& spec, const std::vector<WaveState>& data, double t0,
                       int order);

// derivative tables of the current state (d_t and spatial first derivatives of every level)
DerivTable derivative_table(const SystemState& s);
// d_t of the table entries given the sources Box psi_p
DerivTable time_derivative_table(const SystemSpec& spec, const SystemState& s,
                                 const std::vector<std::vector<ScalarField>>& src);

struct StepInfo {
  bool warning = false;  // |d phi| > 1 somewhere during the kick
  double max_grad = 0.0;
};

// Strang split: half exact linear flow, midpoint kick on d_t psi, half linear flow.
StepInfo semilinear_step(const SystemSpec& spec, SystemState& s, double dt);

// V(t) = e^{i t omega}(d_t phi - i omega phi) on the full spectral lattice
struct HalfWave {
  Grid grid;
  double t = 0.0;
  std::vector<cplx> v;
};
HalfWave half_wave_profile(const WaveState& s, double t, const SpeedTriple& sp);
// U = (d_t - i omega) phi in physical space
std::vector<cplx> half_wave_u(const WaveState& s, const SpeedTriple& sp);
double profile_distance(const HalfWave& a, const HalfWave& b);

struct Trajectory {
  std::vector<double> times;
  // half-wave profiles recorded at selected times, per component
  std::map<double, std::vector<HalfWave>> profiles;
  // accumulated nonlinear profile increments at the same times, when tracked
  std::map<double, std::vector<HalfWave>> duhamel;
};
// ||V(t2) - V(t1)||, from the accumulated increments when recorded
double scattering_drift(const Trajectory& tr, int comp, double t1, double t2);

// (||Gamma^{<=k} N_i||_{L1}, ||d Gamma^{<=k} N_i||_{L2}) summed over words
std::pair<double, double> nonlinearity_L1_L2_norms(const SystemSpec& spec, const SystemState& s,
                                                   int comp, int k);

// ||d Gamma^{<=k} N_i||_{L2} for every component and both k and k-1, from one evaluation
struct NonlinearNorms {
  std::vector<double> high, low;
};
NonlinearNorms nonlinear_energy_norms(const SystemSpec& spec, const SystemState& s, int k);

}  // namespace aniso
