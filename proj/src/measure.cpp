#include "aniso/measure.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace aniso::measure {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  gsl_integration_glfixed_table* tab = gsl_integration_glfixed_table_alloc(n);
  if (!tab) throw std::runtime_error("gauss_legendre: table allocation failed");
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i)
    gsl_integration_glfixed_point(-1.0, 1.0, i, &nodes[i], &weights[i], tab);
  gsl_integration_glfixed_table_free(tab);
}

PhaseSetSpec make_spec(double beta, int k, int l, int mu, double t) {
  PhaseSetSpec s;
  s.t = t;
  // fixed generic direction so no lattice axis is singled out
  const double u[3] = {1.0 / std::sqrt(14.0), 2.0 / std::sqrt(14.0), 3.0 / std::sqrt(14.0)};
  for (int i = 0; i < 3; ++i) s.x[i] = beta * t * u[i];
  s.k = k;
  s.l = l;
  s.mu = mu;
  return s;
}

std::vector<std::pair<double, double>> theta_set(double beta, int l, int mu) {
  const double w = std::ldexp(1.0, l);
  std::vector<std::pair<double, double>> out;
  if (beta == 0.0) {
    if (1.0 <= w) out.emplace_back(0.0, std::numbers::pi);
    return out;
  }
  // |1 + s c| <= w with s = mu beta, c = cos theta
  const double s = mu * beta;
  double c_lo, c_hi;
  if (s > 0) {
    c_lo = (-1.0 - w) / s;
    c_hi = (-1.0 + w) / s;
  } else {
    c_lo = (1.0 - w) / -s;
    c_hi = (1.0 + w) / -s;
  }
  c_lo = std::max(c_lo, -1.0);
  c_hi = std::min(c_hi, 1.0);
  if (c_lo > c_hi) return out;
  // cos is decreasing on [0, pi]
  out.emplace_back(std::acos(c_hi), std::acos(c_lo));
  return out;
}

std::vector<std::pair<double, double>> theta_l(double beta, int l) { return theta_set(beta, l, -1); }

double skl_measure_quad(const PhaseSetSpec& spec, int radial_nodes, int angular_nodes) {
  if (spec.t == 0.0) throw std::invalid_argument("skl_measure_quad: t = 0");
  if (radial_nodes < 1 || angular_nodes < 1)
    throw std::invalid_argument("skl_measure_quad: node counts must be positive");
  const double beta =
      std::sqrt(spec.x[0] * spec.x[0] + spec.x[1] * spec.x[1] + spec.x[2] * spec.x[2]) /
      std::abs(spec.t);
  // a negative t flips the sign in front of x.xi
  const int mu = spec.t > 0 ? spec.mu : -spec.mu;
  auto intervals = theta_set(beta, spec.l, mu);
  if (intervals.empty()) return 0.0;

  std::vector<double> xn, wn;
  gauss_legendre(radial_nodes, xn, wn);
  const double a = std::ldexp(1.0, spec.k - 1), b = std::ldexp(1.0, spec.k);
  double radial = 0.0;
  for (int i = 0; i < radial_nodes; ++i) {
    double r = 0.5 * (b - a) * xn[i] + 0.5 * (a + b);
    radial += 0.5 * (b - a) * wn[i] * r * r;
  }

  gauss_legendre(angular_nodes, xn, wn);
  double angular = 0.0;
  for (auto [th0, th1] : intervals) {
    for (int i = 0; i < angular_nodes; ++i) {
      double th = 0.5 * (th1 - th0) * xn[i] + 0.5 * (th0 + th1);
      angular += 0.5 * (th1 - th0) * wn[i] * std::sin(th);
    }
  }
  return 2.0 * std::numbers::pi * radial * angular;
}

McEstimate skl_measure_mc(const PhaseSetSpec& spec, long samples, std::uint64_t seed) {
  if (spec.t == 0.0) throw std::invalid_argument("skl_measure_mc: t = 0");
  std::mt19937_64 rng(seed);
  const double R = std::ldexp(1.0, spec.k), R0 = std::ldexp(1.0, spec.k - 1);
  std::uniform_real_distribution<double> U(-R, R);
  const double w = std::ldexp(1.0, spec.l);
  McEstimate est;
  long accepted = 0, hits = 0;
  // rejection sampling: uniform in the cube, keep points inside the shell
  while (accepted < samples) {
    double q[3] = {U(rng), U(rng), U(rng)};
    double n2 = q[0] * q[0] + q[1] * q[1] + q[2] * q[2];
    if (n2 > R * R || n2 < R0 * R0) continue;
    ++accepted;
    double xn = std::sqrt(n2);
    double v = 1.0 + spec.mu * (spec.x[0] * q[0] + spec.x[1] * q[1] + spec.x[2] * q[2]) /
                         (spec.t * xn);
    if (std::abs(v) <= w) ++hits;
  }
  const double shell = 4.0 * std::numbers::pi / 3.0 * (R * R * R - R0 * R0 * R0);
  const double p = static_cast<double>(hits) / static_cast<double>(accepted);
  est.value = shell * p;
  est.stderr_ = shell * std::sqrt(p * (1.0 - p) / static_cast<double>(accepted));
  est.hits = hits;
  est.accepted = accepted;
  return est;
}

SweepReport measure_lemma_sweep(const SweepSpec& spec) {
  SweepReport rep;
  std::uint64_t cell = 0;
  for (int k = spec.k_min; k <= spec.k_max; ++k)
    for (int l = spec.l_min; l <= spec.l_max; ++l)
      for (double beta : spec.betas)
        for (int mu : spec.mus) {
          SweepRow row;
          row.k = k;
          row.l = l;
          row.beta = beta;
          row.mu = mu;
          PhaseSetSpec ps = make_spec(beta, k, l, mu);
          row.measure_quad = skl_measure_quad(ps, spec.radial_nodes, spec.angular_nodes);
          row.ratio = row.measure_quad / std::ldexp(1.0, 3 * k + l);
          if (spec.mc_samples > 0) {
            // independent stream per cell
            McEstimate mc = skl_measure_mc(ps, spec.mc_samples, spec.seed + 7919 * cell);
            row.measure_mc = mc.value;
            row.mc_stderr = mc.stderr_;
            row.has_mc = true;
          }
          ++cell;
          if (row.ratio > rep.max_ratio) {
            rep.max_ratio = row.ratio;
            rep.argmax = row;
          }
          rep.rows.push_back(row);
        }
  return rep;
}

}  // namespace aniso::measure
