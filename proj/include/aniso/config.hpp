#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "aniso/harness.hpp"

namespace aniso {

// initial datum of one component at t0
struct DataSpec {
  std::string kind = "bump";  // bump: (1 - s^2)^power on s = |x - c|/radius < 1; gaussian: exp(-s^2)
  Vec3 center{0.0, 0.0, 0.0};
  double radius = 2.0;
  int power = 4;
  double amplitude = 1.0;  // phi0
  double velocity = 0.0;   // phi1 uses the same profile with this amplitude
  double jitter = 0.0;     // seeded uniform displacement of the center
};

struct RunConfig {
  std::string name = "run";
  std::uint64_t seed = 12345;
  int n = 64;
  double box = 32.0;
  SystemSpec system;
  double epsilon0 = 0.0;  // > 0: rescale data so that sum_i E_i(t0) = epsilon0
  std::vector<DataSpec> data;
  double t0 = 1.0, t_end = 8.0, dt = 0.1, output_every = 1.0;
  std::vector<double> profile_times;
  DiagnosticsConfig diag;
  std::string bootstrap_mode;  // empty, thm3 or thm4
  nlohmann::json source;       // the document as read
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
// ANISO_SEED overrides the configured seed
void apply_env_overrides(RunConfig& cfg);
// FNV-1a over the canonical dump
std::string config_hash(const nlohmann::json& j);

}  // namespace aniso
