#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "aniso/measure.hpp"

using namespace aniso;
using namespace aniso::measure;

namespace {
double shell(int k) { return 4.0 * std::numbers::pi / 3.0 * (std::ldexp(1.0, 3 * k) - std::ldexp(1.0, 3 * (k - 1))); }
}  // namespace

TEST_CASE("closed forms") {
  CHECK(skl_measure_quad(make_spec(0.0, 0, -1, -1)) == 0.0);
  for (int k : {-2, 0, 3})
    for (int l : {0, 1, 2}) CHECK(skl_measure_quad(make_spec(0.0, k, l, 1)) == doctest::Approx(shell(k)).epsilon(1e-12));
  double half = skl_measure_quad(make_spec(1.0, 0, 0, -1));
  CHECK(std::abs(half - 7.0 * std::numbers::pi / 12.0) < 1e-10);
  CHECK_THROWS(skl_measure_quad(make_spec(1.0, 0, 0, -1, 0.0)));
}

TEST_CASE("Monte-Carlo oracle agrees within three standard errors") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> K(-3, 3), L(-5, 2);
  std::uniform_real_distribution<double> B(0.0, 2.0);
  int agree = 0;
  for (int i = 0; i < 50; ++i) {
    PhaseSetSpec s = make_spec(B(rng), K(rng), L(rng), (i % 2) ? 1 : -1);
    double q = skl_measure_quad(s);
    McEstimate mc = skl_measure_mc(s, 100000, 1000 + i);
    // full shells and empty sets have zero sampling error
    bool ok = std::abs(mc.value - q) <= 3.0 * mc.stderr_ + 1e-12 * q;
    agree += ok;
  }
  CHECK(agree == 50);
}

TEST_CASE("Monte-Carlo scaling and determinism") {
  PhaseSetSpec s = make_spec(0.9, 1, -1, -1);
  McEstimate a = skl_measure_mc(s, 100000, 5), b = skl_measure_mc(s, 400000, 5);
  // four times the samples halves the standard error
  CHECK(b.stderr_ / a.stderr_ == doctest::Approx(0.5).epsilon(0.2));
  CHECK(skl_measure_mc(s, 100000, 5).value == a.value);
  McEstimate z = skl_measure_mc(make_spec(0.0, 0, -1, -1), 100000, 1);
  CHECK(z.value == 0.0);
  CHECK(z.stderr_ == 0.0);
}

TEST_CASE("theta sets") {
  for (double beta : {0.0, 0.3, 0.49})
    CHECK(theta_set(beta, -100, -1).empty());
  for (double beta : {0.5, 1.0, 1.5, 10.0})
    for (auto [a, b] : theta_l(beta, -100)) {
      CHECK(a >= 0.0);
      CHECK(b <= std::numbers::pi / 2 + 1e-15);
    }
}

TEST_CASE("sweep ratio") {
  SweepSpec s;
  SweepReport r = measure_lemma_sweep(s);
  CHECK(std::isfinite(r.max_ratio));
  CHECK(r.max_ratio > 0.0);
  for (const auto& row : r.rows)
    if (row.beta == 0.0 && row.l >= 0)
      CHECK(row.ratio == doctest::Approx(4.0 * std::numbers::pi / 3.0 * 0.875 * std::ldexp(1.0, -row.l)).epsilon(1e-12));
  SweepSpec d = s;
  d.radial_nodes = 128;
  d.angular_nodes = 128;
  double r2 = measure_lemma_sweep(d).max_ratio;
  CHECK(r2 / r.max_ratio < 2.0);
  CHECK(r2 / r.max_ratio > 0.5);
}
