#include "aniso/grid.hpp"

#include <cmath>
#include <numbers>

namespace aniso {

double Grid::wavenumber(int m) const {
  int mm = (m <= n / 2) ? m : m - n;
  return 2.0 * std::numbers::pi * mm / box_length;
}

Grid make_grid(int n, double box_length) {
  if (n < 8) throw std::invalid_argument("make_grid: n must be >= 8");
  if (n % 2 != 0) throw std::invalid_argument("make_grid: n must be even");
  if (!(box_length > 0.0))
    throw std::invalid_argument("make_grid: box_length must be positive");
  Grid g;
  g.n = n;
  g.box_length = box_length;
  double h = box_length / n;
  g.origin_offset = {0.5 * h, 0.5 * h, 0.5 * h};
  return g;
}

ScalarField sample(const Grid& g, const std::function<double(double, double, double)>& f,
                   double t) {
  ScalarField out(g, t);
  for (int i = 0; i < g.n; ++i) {
    double x = g.coord(i);
    for (int j = 0; j < g.n; ++j) {
      double y = g.coord(j);
      for (int k = 0; k < g.n; ++k) out.data[g.index(i, j, k)] = f(x, y, g.coord(k));
    }
  }
  return out;
}

ScalarField radius_field(const Grid& g) {
  return sample(g, [](double x, double y, double z) { return std::sqrt(x * x + y * y + z * z); });
}

ScalarField coordinate_field(const Grid& g, int axis) {
  return sample(g, [axis](double x, double y, double z) {
    return axis == 0 ? x : (axis == 1 ? y : z);
  });
}

void check_same_grid(const ScalarField& a, const ScalarField& b) {
  if (!(a.grid == b.grid) || a.data.size() != b.data.size())
    throw std::invalid_argument("field shape mismatch");
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  check_same_grid(a, b);
  ScalarField c = a;
  for (std::size_t i = 0; i < c.size(); ++i) c.data[i] += b.data[i];
  return c;
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  check_same_grid(a, b);
  ScalarField c = a;
  for (std::size_t i = 0; i < c.size(); ++i) c.data[i] -= b.data[i];
  return c;
}

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  check_same_grid(a, b);
  ScalarField c = a;
  for (std::size_t i = 0; i < c.size(); ++i) c.data[i] *= b.data[i];
  return c;
}

ScalarField operator*(double s, const ScalarField& a) {
  ScalarField c = a;
  for (auto& v : c.data) v *= s;
  return c;
}

ScalarField& operator+=(ScalarField& a, const ScalarField& b) {
  check_same_grid(a, b);
  for (std::size_t i = 0; i < a.size(); ++i) a.data[i] += b.data[i];
  return a;
}

ScalarField& operator-=(ScalarField& a, const ScalarField& b) {
  check_same_grid(a, b);
  for (std::size_t i = 0; i < a.size(); ++i) a.data[i] -= b.data[i];
  return a;
}

void axpy(double s, const ScalarField& x, ScalarField& y) {
  check_same_grid(x, y);
  for (std::size_t i = 0; i < y.size(); ++i) y.data[i] += s * x.data[i];
}

double max_abs(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.data) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_diff(const ScalarField& a, const ScalarField& b) {
  check_same_grid(a, b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
  return m;
}

bool Region::contains(double t, const Vec3& x) const {
  double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
  switch (kind) {
    case RegionKind::All:
      return true;
    case RegionKind::InteriorCone:
      return r <= t - margin;
    case RegionKind::ExteriorCone:
      return r >= t;
    case RegionKind::Ball:
      return r <= radius;
    case RegionKind::ConeShell: {
      double ri = cone_radius ? cone_radius(x) : r;
      double q = t - ri;
      return q >= q_min && q < q_max;
    }
  }
  return false;
}

}  // namespace aniso
