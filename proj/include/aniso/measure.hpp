#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "aniso/grid.hpp"

namespace aniso::measure {

// S_{k,l}(t,x) = { xi : |1 + mu x.xi/(t|xi|)| <= 2^l, |xi| in [2^{k-1}, 2^k] }
struct PhaseSetSpec {
  double t = 1.0;
  Vec3 x{0.0, 0.0, 0.0};
  int k = 0;
  int l = 0;
  int mu = -1;  // +1 or -1
};

PhaseSetSpec make_spec(double beta, int k, int l, int mu, double t = 1.0);

// theta intervals (cos theta = cos of the angle between x and xi) on which the
// defining inequality holds, returned as disjoint [theta_lo, theta_hi] pairs
std::vector<std::pair<double, double>> theta_set(double beta, int l, int mu);

// Theta_l = { theta in [0,pi] : |1 - beta cos theta| <= 2^l }
std::vector<std::pair<double, double>> theta_l(double beta, int l);

double skl_measure_quad(const PhaseSetSpec& spec, int radial_nodes = 64, int angular_nodes = 64);

struct McEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  long hits = 0;
  long accepted = 0;
};
McEstimate skl_measure_mc(const PhaseSetSpec& spec, long samples, std::uint64_t seed);

struct SweepRow {
  int k = 0;
  int l = 0;
  double beta = 0.0;
  int mu = -1;
  double measure_quad = 0.0;
  double measure_mc = 0.0;
  double mc_stderr = 0.0;
  double ratio = 0.0;
  bool has_mc = false;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  double max_ratio = 0.0;
  SweepRow argmax;
};

struct SweepSpec {
  int k_min = -6, k_max = 6;
  int l_min = -40, l_max = 2;
  std::vector<double> betas{0.0, 0.3, 0.5, 0.9, 1.0, 1.5, 10.0};
  std::vector<int> mus{-1, 1};
  int radial_nodes = 64;
  int angular_nodes = 64;
  long mc_samples = 0;  // 0 disables the Monte-Carlo column
  std::uint64_t seed = 12345;
};

SweepReport measure_lemma_sweep(const SweepSpec& spec);

// Gauss-Legendre nodes/weights on [-1,1]
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace aniso::measure
