#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "aniso/spectral.hpp"

namespace aniso::vf {

enum class Letter { D1, D2, D3, S };
using Word = std::vector<Letter>;

std::string to_string(const Word& w);
Word parse_word(const std::string& s);  // e.g. "S D1 D2", empty string = identity
std::vector<Word> all_words(int max_order);

// Normal ordered expansion Gamma^J = sum c * d^alpha S^j, using [S, d_i] = -d_i.
struct NormalTerm {
  MultiIndex3 alpha{0, 0, 0};
  int j = 0;
  double coef = 0.0;
};
std::vector<NormalTerm> normal_order(const Word& w);

// Distinct normal forms among all words of length <= max_order, with the
// number of words producing each form (norms sum over words, not forms).
struct WordForm {
  int order = 0;
  int multiplicity = 0;
  std::string representative;
  std::vector<NormalTerm> terms;
};
std::vector<WordForm> word_forms(int max_order);

// Levels S^j phi and d_t S^j phi, j = 0..order, at one time.
struct Lattice {
  double t = 1.0;
  Vec3 eps{1.0, 1.0, 1.0};
  std::vector<ScalarField> psi;
  std::vector<ScalarField> dpsi;
  int order() const { return static_cast<int>(psi.size()) - 1; }

  // Gamma^J phi and d_t Gamma^J phi for an arbitrary word
  ScalarField word_field(const Word& w) const;
  ScalarField word_dt(const Word& w) const;
};

// Time jets of a field known analytically (value and time derivatives at t).
struct TimeJet {
  double t = 0.0;
  std::vector<ScalarField> d;  // d[m] = d_t^m phi
};

ScalarField apply_S(const ScalarField& phi, const ScalarField& phi_t, double t);

// Box phi = -phi_tt + sum eps_j d_j^2 phi
ScalarField box(const ScalarField& phi, const ScalarField& phi_tt, const Vec3& eps);

// ||Box(S phi) - S(Box phi) - 2 Box phi|| / ||Box phi||; needs d_t^0..3.
struct CommutatorReport {
  double residual = 0.0;        // the identity [Box, S] = 2 Box
  double reversed_sign = 0.0;   // the same expression with [S, Box] = 2 Box
  double box_norm = 0.0;
};
CommutatorReport commutator_residual(const TimeJet& jet, const Vec3& eps);

// L phi = slashed-Laplacian + (1 - r^2/t^2) r^-2 d_r(r^2 d_r phi)
ScalarField L_apply(const ScalarField& phi, double t);

struct FReport {
  ScalarField form_dt;    // (1/t^2)(2t d_t S phi - S^2 phi - S phi)
  ScalarField form_dr;    // (1/t^2)(S^2 phi - 2 r d_r S phi - S phi)
  double discrepancy = 0.0;
};
FReport F_apply(const Lattice& lat);

// Populate levels at t0 by substituting the equation for every d_t^2.
// source(j, levels) returns Box S^j phi = (S+2)^j f built from levels 0..j.
using SourceFn = std::function<ScalarField(int, const std::vector<ScalarField>&,
                                           const std::vector<ScalarField>&)>;
Lattice populate_lattice(const ScalarField& phi0, const ScalarField& phi1, double t0, int order,
                         const Vec3& eps, const SourceFn& source = {});

// one recursion step shared with the coupled solver
void next_level(const ScalarField& psi, const ScalarField& dpsi, const ScalarField& src,
                double t0, const Vec3& eps, ScalarField& psi_next, ScalarField& dpsi_next);

// sqrt(sum_{|J|<=k} ||d Gamma^J phi||^2) with d = (d_t, grad), summed over words
double gamma_energy(const Lattice& lat, int k);

// Spectral evaluation of word norms for a set of levels.
struct WordNorms {
  double energy_sq = 0.0;  // sum over words of ||d Gamma^J||_L2^2
  double linf_xi = 0.0;    // max over words and components of |F(d Gamma^J)|
};
WordNorms word_norms(const std::vector<Spectrum>& psi_hat, const std::vector<Spectrum>& dpsi_hat,
                     int k);

}  // namespace aniso::vf
