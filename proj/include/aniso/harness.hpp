#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aniso/solver.hpp"

namespace aniso {

struct FitResult {
  double exponent = 0.0;
  double stderr_ = 0.0;
  double intercept = 0.0;
  double t_lo = 0.0, t_hi = 0.0;
  double r2 = 0.0;
  int samples = 0;
};

// least squares slope of log v against log t over samples with t in [t_lo, t_hi]
FitResult decay_fit(const std::vector<double>& t, const std::vector<double>& v, double t_lo,
                    double t_hi);

// |d phi| = sqrt(phi_t^2 + |grad phi|^2)
ScalarField gradient_magnitude(const WaveState& s);

// sup |d phi| over shells edges[b] <= t - r_i < edges[b+1]; empty shells give 0
std::vector<double> cone_binned_sup(const WaveState& s, double t, const std::vector<double>& edges,
                                    const SpeedTriple& sp);

// max |coefficient| * h^3, the lattice surrogate of sup |continuum transform|
double transform_linf(const ScalarField& f);

// max over words |J| <= k and components of the box-normalized transform of d Gamma^J phi
double linf_xi_norm(const vf::Lattice& lat, int k);

struct DiagnosticsConfig {
  int k_max = 4;
  int k_mid = 2;
  double delta = 0.05;
  std::vector<double> cone_edges{0.0, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
  bool nonlinear_norms = true;
};

struct DiagnosticsRow {
  double t = 0.0;
  std::vector<double> E, K, W, N_high, N_low;
  std::vector<std::vector<double>> cone;
};

DiagnosticsRow compute_diagnostics(const SystemSpec& spec, const SystemState& s,
                                   const DiagnosticsConfig& cfg);

enum class BootstrapMode { Thm3, Thm4 };
BootstrapMode parse_mode(const std::string& s);
std::string to_string(BootstrapMode m);

struct BootstrapReport {
  bool pass = true;
  double sup_value = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // bound / sup_value
  std::optional<double> first_violation;
  std::vector<double> functional;
};

// thm3: sum_i E_i + <t>^{3/2-2d} N_high_i + <t>^{2-9d} N_low_i
// thm4: sum_i E_i + <t>^{-d} W_i + <t>^{1-d} K_i
BootstrapReport bootstrap_monitor(const std::vector<DiagnosticsRow>& rows, double eps0,
                                  double delta, BootstrapMode mode, const SystemSpec& spec);

}  // namespace aniso
