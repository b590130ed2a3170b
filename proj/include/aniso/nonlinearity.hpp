#pragma once

#include <array>
#include <vector>

#include "aniso/grid.hpp"

namespace aniso {

// One factor d_deriv phi_comp; deriv 0 is d_t, 1..3 spatial.
struct Factor {
  int comp = 0;
  int deriv = 0;
};

// coef * prod of three first-derivative factors
struct Term {
  double coef = 0.0;
  std::array<Factor, 3> f{};
};

// Level derivative tables in physical space. table[a][d * (order+1) + p] = d_d psi_p of
// component a (d = 0 is d_t). The time table holds d_t of the same entries.
struct DerivTable {
  int m = 0;
  int order = 0;
  std::vector<std::vector<ScalarField>> v;
  const ScalarField& at(int a, int d, int p) const { return v[a][d * (order + 1) + p]; }
  ScalarField& at(int a, int d, int p) { return v[a][d * (order + 1) + p]; }
};

// S^q N_i for q = 0..order (and d_t S^q N_i when dt is given), using
// S^q d phi = d (S - 1)^q phi and the Leibniz rule for S over products.
struct CommutedSource {
  std::vector<std::vector<ScalarField>> sq;     // [i][q]
  std::vector<std::vector<ScalarField>> dt_sq;  // [i][q], empty unless requested
};
CommutedSource commuted_nonlinearity(const std::vector<std::vector<Term>>& terms,
                                     const DerivTable& d, const DerivTable* dt, int order);

// Box S^j phi_i = (S + 2)^j N_i
std::vector<std::vector<ScalarField>> lattice_sources(const CommutedSource& cs, int order);

// true if every term has three distinct components
bool no_self_interaction(const std::vector<std::vector<Term>>& terms);

double binomial(int n, int k);

}  // namespace aniso
