#include "aniso/nonlinearity.hpp"

#include <cmath>
#include <stdexcept>

namespace aniso {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

bool no_self_interaction(const std::vector<std::vector<Term>>& terms) {
  for (const auto& comp : terms)
    for (const auto& t : comp)
      if (t.coef != 0.0 && (t.f[0].comp == t.f[1].comp || t.f[0].comp == t.f[2].comp ||
                            t.f[1].comp == t.f[2].comp))
        return false;
  return true;
}

CommutedSource commuted_nonlinearity(const std::vector<std::vector<Term>>& terms,
                                     const DerivTable& d, const DerivTable* dt, int order) {
  if (order > d.order) throw std::invalid_argument("commuted_nonlinearity: table order too low");
  if (dt && dt->order < order)
    throw std::invalid_argument("commuted_nonlinearity: time table order too low");
  const int m = static_cast<int>(terms.size());
  if (m > d.m) throw std::invalid_argument("commuted_nonlinearity: component count mismatch");
  const Grid& g = d.v.at(0).at(0).grid;
  const int P = order + 1;

  CommutedSource out;
  out.sq.assign(m, std::vector<ScalarField>(P, ScalarField(g)));
  if (dt) out.dt_sq.assign(m, std::vector<ScalarField>(P, ScalarField(g)));

  // (S - 1)^q expansion coefficients
  std::vector<double> shift(P * P, 0.0);
  for (int q = 0; q < P; ++q)
    for (int p = 0; p <= q; ++p) shift[q * P + p] = binomial(q, p) * (((q - p) % 2) ? -1.0 : 1.0);
  std::vector<double> binom(P * P, 0.0);
  for (int q = 0; q < P; ++q)
    for (int p = 0; p <= q; ++p) binom[q * P + p] = binomial(q, p);

  const int M = d.m;
  std::vector<double> G(M * 4 * P), Gt(M * 4 * P);
  std::vector<double> ab(P), abt(P);
  const std::size_t N = g.volume_count();
  for (std::size_t x = 0; x < N; ++x) {
    for (int a = 0; a < M; ++a)
      for (int dd = 0; dd < 4; ++dd)
        for (int q = 0; q < P; ++q) {
          double s = 0.0, st = 0.0;
          for (int p = 0; p <= q; ++p) {
            s += shift[q * P + p] * d.at(a, dd, p)[x];
            if (dt) st += shift[q * P + p] * dt->at(a, dd, p)[x];
          }
          G[(a * 4 + dd) * P + q] = s;
          Gt[(a * 4 + dd) * P + q] = st;
        }
    for (int i = 0; i < m; ++i)
      for (const Term& term : terms[i]) {
        const double* A = &G[(term.f[0].comp * 4 + term.f[0].deriv) * P];
        const double* B = &G[(term.f[1].comp * 4 + term.f[1].deriv) * P];
        const double* C = &G[(term.f[2].comp * 4 + term.f[2].deriv) * P];
        const double* At = &Gt[(term.f[0].comp * 4 + term.f[0].deriv) * P];
        const double* Bt = &Gt[(term.f[1].comp * 4 + term.f[1].deriv) * P];
        const double* Ct = &Gt[(term.f[2].comp * 4 + term.f[2].deriv) * P];
        // S^s (A B) and d_t of it, then the third factor
        for (int s = 0; s < P; ++s) {
          double v = 0.0, vt = 0.0;
          for (int p = 0; p <= s; ++p) {
            double c = binom[s * P + p];
            v += c * A[p] * B[s - p];
            if (dt) vt += c * (At[p] * B[s - p] + A[p] * Bt[s - p]);
          }
          ab[s] = v;
          abt[s] = vt;
        }
        for (int q = 0; q < P; ++q) {
          double v = 0.0, vt = 0.0;
          for (int s = 0; s <= q; ++s) {
            double c = binom[q * P + s];
            v += c * ab[s] * C[q - s];
            if (dt) vt += c * (abt[s] * C[q - s] + ab[s] * Ct[q - s]);
          }
          out.sq[i][q][x] += term.coef * v;
          if (dt) out.dt_sq[i][q][x] += term.coef * vt;
        }
      }
  }
  return out;
}

std::vector<std::vector<ScalarField>> lattice_sources(const CommutedSource& cs, int order) {
  std::vector<std::vector<ScalarField>> out(cs.sq.size());
  for (std::size_t i = 0; i < cs.sq.size(); ++i) {
    if (static_cast<int>(cs.sq[i].size()) < order + 1)
      throw std::invalid_argument("lattice_sources: not enough commuted terms");
    const Grid& g = cs.sq[i][0].grid;
    for (int j = 0; j <= order; ++j) {
      ScalarField s(g);
      for (int q = 0; q <= j; ++q) axpy(binomial(j, q) * std::ldexp(1.0, j - q), cs.sq[i][q], s);
      out[i].push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace aniso
