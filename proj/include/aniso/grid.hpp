#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace aniso {

using Vec3 = std::array<double, 3>;

struct Grid {
  int n = 0;
  double box_length = 0.0;
  Vec3 origin_offset{0.0, 0.0, 0.0};

  double spacing() const { return box_length / n; }
  std::size_t volume_count() const {
    return static_cast<std::size_t>(n) * n * n;
  }
  // cell volume h^3 used by the lattice quadrature
  double cell_volume() const {
    double h = spacing();
    return h * h * h;
  }
  double coord(int i) const { return -0.5 * box_length + (i + 0.5) * spacing(); }
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n + j) * n + k;
  }
  // spectral wavenumber along one axis for FFT index m
  double wavenumber(int m) const;
  bool operator==(const Grid& o) const {
    return n == o.n && box_length == o.box_length;
  }
};

Grid make_grid(int n, double box_length);

struct ScalarField {
  Grid grid;
  std::vector<double> data;
  double time = 0.0;

  ScalarField() = default;
  explicit ScalarField(const Grid& g, double t = 0.0)
      : grid(g), data(g.volume_count(), 0.0), time(t) {}

  double& operator[](std::size_t i) { return data[i]; }
  double operator[](std::size_t i) const { return data[i]; }
  std::size_t size() const { return data.size(); }
};

// pointwise helpers
ScalarField sample(const Grid& g, const std::function<double(double, double, double)>& f,
                   double t = 0.0);
ScalarField radius_field(const Grid& g);
ScalarField coordinate_field(const Grid& g, int axis);

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double s, const ScalarField& a);
ScalarField& operator+=(ScalarField& a, const ScalarField& b);
ScalarField& operator-=(ScalarField& a, const ScalarField& b);
void axpy(double s, const ScalarField& x, ScalarField& y);
double max_abs(const ScalarField& f);
double max_abs_diff(const ScalarField& a, const ScalarField& b);

void check_same_grid(const ScalarField& a, const ScalarField& b);

enum class RegionKind { All, InteriorCone, ExteriorCone, Ball, ConeShell };

// cone membership uses r (Euclidean) unless a cone radius is supplied
struct Region {
  RegionKind kind = RegionKind::All;
  double margin = 0.0;   // interior cone: r <= t - margin
  double radius = 0.0;   // ball
  double q_min = 0.0;    // cone shell on q = t - r_i
  double q_max = 0.0;
  std::function<double(const Vec3&)> cone_radius;  // r_i(x); empty means |x|

  static Region all() { return {}; }
  static Region interior_cone(double margin) {
    Region r;
    r.kind = RegionKind::InteriorCone;
    r.margin = margin;
    return r;
  }
  static Region exterior_cone() {
    Region r;
    r.kind = RegionKind::ExteriorCone;
    return r;
  }
  static Region ball(double radius) {
    Region r;
    r.kind = RegionKind::Ball;
    r.radius = radius;
    return r;
  }
  static Region cone_shell(std::function<double(const Vec3&)> ri, double qmin,
                           double qmax) {
    Region r;
    r.kind = RegionKind::ConeShell;
    r.cone_radius = std::move(ri);
    r.q_min = qmin;
    r.q_max = qmax;
    return r;
  }

  bool contains(double t, const Vec3& x) const;
};

}  // namespace aniso
