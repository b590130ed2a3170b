#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "aniso/config.hpp"
#include "aniso/identities.hpp"

namespace aniso {

std::vector<WaveState> build_data(const RunConfig& cfg, const Grid& g);

struct RunResult {
  RunConfig cfg;
  std::vector<DiagnosticsRow> rows;
  Trajectory traj;
  bool warning = false;
  double data_scale = 1.0;  // factor applied to reach sum E_i(t0) = epsilon0
  double separation = 0.0;
};

using Progress = std::function<void(const DiagnosticsRow&)>;
RunResult run_simulation(const RunConfig& cfg, const Progress& progress = {});

// Calibrated constants kept in a versioned file.
struct Constants {
  int version = 1;
  std::map<std::string, double> values;
  nlohmann::json meta;
};
Constants load_constants(const std::string& path);
void save_constants(const Constants& c, const std::string& path);
std::string default_constants_path();

// Pinned ensembles. Each returns the maximum ratio over its members.
double calibrate_chi();
double calibrate_measure();
double calibrate_weighted_bochner();
double calibrate_exterior();
double calibrate_sobolev();
double calibrate_interior();
std::map<std::string, double> calibrate_all(const std::function<void(const std::string&)>& log = {});

// compact free-wave lattice: bump of the given radius at t0 = 1, evolved to t
vf::Lattice free_bump_lattice(const Grid& g, double radius, int power, double t, int order,
                              const Vec3& center = {0.0, 0.0, 0.0}, double velocity = 0.0);

// identity suite run by verify-identities
std::vector<id::IdentityReport> verify_identities(int n, double box);

}  // namespace aniso
