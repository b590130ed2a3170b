#include "aniso/vectorfield.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace aniso::vf {

std::string to_string(const Word& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ' ';
    switch (w[i]) {
      case Letter::D1: s += "D1"; break;
      case Letter::D2: s += "D2"; break;
      case Letter::D3: s += "D3"; break;
      case Letter::S: s += "S"; break;
    }
  }
  return s;
}

Word parse_word(const std::string& s) {
  Word w;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) {
    if (tok == "D1") w.push_back(Letter::D1);
    else if (tok == "D2") w.push_back(Letter::D2);
    else if (tok == "D3") w.push_back(Letter::D3);
    else if (tok == "S") w.push_back(Letter::S);
    else throw std::invalid_argument("parse_word: unknown letter " + tok);
  }
  return w;
}

std::vector<Word> all_words(int max_order) {
  std::vector<Word> out{Word{}};
  std::size_t begin = 0;
  for (int n = 1; n <= max_order; ++n) {
    std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i)
      for (Letter L : {Letter::D1, Letter::D2, Letter::D3, Letter::S}) {
        Word w = out[i];
        w.push_back(L);
        out.push_back(w);
      }
    begin = end;
  }
  return out;
}

std::vector<NormalTerm> normal_order(const Word& w) {
  // apply letters right to left: Gamma_1 (Gamma_2 (... phi))
  std::map<std::pair<MultiIndex3, int>, double> P{{{{0, 0, 0}, 0}, 1.0}};
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    std::map<std::pair<MultiIndex3, int>, double> Q;
    for (const auto& [key, c] : P) {
      const auto& [a, j] = key;
      if (*it == Letter::S) {
        // S d^a S^j = d^a S^{j+1} - |a| d^a S^j
        Q[{a, j + 1}] += c;
        int deg = a[0] + a[1] + a[2];
        if (deg) Q[{a, j}] -= deg * c;
      } else {
        MultiIndex3 b = a;
        b[static_cast<int>(*it)] += 1;
        Q[{b, j}] += c;
      }
    }
    P.clear();
    for (const auto& [key, c] : Q)
      if (c != 0.0) P[key] = c;
  }
  std::vector<NormalTerm> out;
  for (const auto& [key, c] : P) out.push_back({key.first, key.second, c});
  return out;
}

std::vector<WordForm> word_forms(int max_order) {
  static std::mutex mu;
  static std::map<int, std::vector<WordForm>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto hit = cache.find(max_order);
  if (hit != cache.end()) return hit->second;

  std::map<std::pair<int, std::vector<std::tuple<MultiIndex3, int, double>>>, std::size_t> seen;
  std::vector<WordForm> forms;
  for (const Word& w : all_words(max_order)) {
    auto terms = normal_order(w);
    std::vector<std::tuple<MultiIndex3, int, double>> key;
    for (auto& t : terms) key.emplace_back(t.alpha, t.j, t.coef);
    auto k = std::make_pair(static_cast<int>(w.size()), key);
    auto f = seen.find(k);
    if (f == seen.end()) {
      seen[k] = forms.size();
      forms.push_back({static_cast<int>(w.size()), 1, to_string(w), terms});
    } else {
      forms[f->second].multiplicity += 1;
    }
  }
  cache[max_order] = forms;
  return forms;
}

namespace {

ScalarField combine(const std::vector<ScalarField>& levels, const Word& w, double time) {
  auto terms = normal_order(w);
  if (levels.empty()) throw std::invalid_argument("empty lattice");
  ScalarField out(levels[0].grid, time);
  std::map<int, Spectrum> spectra;
  for (const auto& t : terms) {
    if (t.j >= static_cast<int>(levels.size()))
      throw std::invalid_argument("word needs a higher lattice order");
    auto it = spectra.find(t.j);
    if (it == spectra.end()) it = spectra.emplace(t.j, forward(levels[t.j])).first;
    axpy(t.coef, derivative_of(it->second, t.alpha, time), out);
  }
  return out;
}

ScalarField xdotgrad(const ScalarField& f) { return euler_derivative(f); }

}  // namespace

ScalarField Lattice::word_field(const Word& w) const { return combine(psi, w, t); }
ScalarField Lattice::word_dt(const Word& w) const { return combine(dpsi, w, t); }

ScalarField apply_S(const ScalarField& phi, const ScalarField& phi_t, double t) {
  check_same_grid(phi, phi_t);
  ScalarField out = xdotgrad(phi);
  axpy(t, phi_t, out);
  out.time = t;
  return out;
}

ScalarField box(const ScalarField& phi, const ScalarField& phi_tt, const Vec3& eps) {
  ScalarField out = weighted_laplacian(phi, eps);
  out -= phi_tt;
  return out;
}

CommutatorReport commutator_residual(const TimeJet& jet, const Vec3& eps) {
  if (jet.d.size() < 4) throw std::invalid_argument("commutator_residual: need d_t^0..3");
  const double t = jet.t;
  const auto& d = jet.d;
  ScalarField box_phi = box(d[0], d[2], eps);
  ScalarField box_phi_t = box(d[1], d[3], eps);
  ScalarField S_box = apply_S(box_phi, box_phi_t, t);
  ScalarField S_phi = apply_S(d[0], d[1], t);
  // d_t^2 (S phi) = 2 phi_tt + t phi_ttt + x.grad phi_tt
  ScalarField S_phi_tt = xdotgrad(d[2]);
  axpy(2.0, d[2], S_phi_tt);
  axpy(t, d[3], S_phi_tt);
  ScalarField box_S = box(S_phi, S_phi_tt, eps);

  CommutatorReport rep;
  rep.box_norm = l2(box_phi);
  ScalarField r1 = box_S - S_box;
  axpy(-2.0, box_phi, r1);
  ScalarField r2 = S_box - box_S;
  axpy(-2.0, box_phi, r2);
  double denom = rep.box_norm > 0.0 ? rep.box_norm : 1.0;
  rep.residual = l2(r1) / denom;
  rep.reversed_sign = l2(r2) / denom;
  return rep;
}

ScalarField L_apply(const ScalarField& phi, double t) {
  if (!(t >= 1.0)) throw std::invalid_argument("L_apply: t must be >= 1");
  const Grid& g = phi.grid;
  auto H = hessian(phi);
  auto G = gradient(phi);
  ScalarField out(g, phi.time);
  const double it2 = 1.0 / (t * t);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        std::size_t id = g.index(i, j, k);
        double x = g.coord(i), y = g.coord(j), z = g.coord(k);
        double lap = H[0].data[id] + H[1].data[id] + H[2].data[id];
        double xHx = x * x * H[0].data[id] + y * y * H[1].data[id] + z * z * H[2].data[id] +
                     2.0 * (x * y * H[3].data[id] + x * z * H[4].data[id] + y * z * H[5].data[id]);
        double xg = x * G[0].data[id] + y * G[1].data[id] + z * G[2].data[id];
        // r^2 d_r^2 = x.H.x and r^2 (2/r) d_r = 2 x.grad
        out.data[id] = lap - it2 * (xHx + 2.0 * xg);
      }
  return out;
}

FReport F_apply(const Lattice& lat) {
  if (lat.order() < 2) throw std::invalid_argument("F_apply: lattice order must be >= 2");
  const double t = lat.t;
  const ScalarField& Sphi = lat.psi[1];
  const ScalarField& S2phi = lat.psi[2];
  const ScalarField& dtSphi = lat.dpsi[1];
  const double it2 = 1.0 / (t * t);
  FReport rep;
  rep.form_dt = S2phi;
  for (auto& v : rep.form_dt.data) v = -v;
  axpy(2.0 * t, dtSphi, rep.form_dt);
  rep.form_dt -= Sphi;
  rep.form_dt = it2 * rep.form_dt;

  rep.form_dr = S2phi;
  axpy(-2.0, xdotgrad(Sphi), rep.form_dr);
  rep.form_dr -= Sphi;
  rep.form_dr = it2 * rep.form_dr;
  rep.discrepancy = max_abs_diff(rep.form_dt, rep.form_dr);
  return rep;
}

void next_level(const ScalarField& psi, const ScalarField& dpsi, const ScalarField& src,
                double t0, const Vec3& eps, ScalarField& psi_next, ScalarField& dpsi_next) {
  // S psi = t d_t psi + x.grad psi
  psi_next = apply_S(psi, dpsi, t0);
  // d_t S psi = d_t psi + t d_t^2 psi + x.grad d_t psi, d_t^2 psi = Lap_eps psi - Box psi
  ScalarField dtt = weighted_laplacian(psi, eps);
  dtt -= src;
  dpsi_next = xdotgrad(dpsi);
  dpsi_next += dpsi;
  axpy(t0, dtt, dpsi_next);
  dpsi_next.time = t0;
}

Lattice populate_lattice(const ScalarField& phi0, const ScalarField& phi1, double t0, int order,
                         const Vec3& eps, const SourceFn& source) {
  if (!(t0 >= 1.0)) throw std::invalid_argument("populate_lattice: t0 must be >= 1");
  if (order < 0) throw std::invalid_argument("populate_lattice: negative order");
  Lattice lat;
  lat.t = t0;
  lat.eps = eps;
  lat.psi.push_back(phi0);
  lat.dpsi.push_back(phi1);
  lat.psi[0].time = lat.dpsi[0].time = t0;
  for (int j = 0; j < order; ++j) {
    ScalarField src = source ? source(j, lat.psi, lat.dpsi) : ScalarField(phi0.grid, t0);
    ScalarField pn, dn;
    next_level(lat.psi[j], lat.dpsi[j], src, t0, eps, pn, dn);
    lat.psi.push_back(std::move(pn));
    lat.dpsi.push_back(std::move(dn));
  }
  return lat;
}

WordNorms word_norms(const std::vector<Spectrum>& psi_hat, const std::vector<Spectrum>& dpsi_hat,
                     int k) {
  if (psi_hat.empty() || psi_hat.size() != dpsi_hat.size())
    throw std::invalid_argument("word_norms: level mismatch");
  if (k > static_cast<int>(psi_hat.size()) - 1)
    throw std::invalid_argument("word_norms: lattice order below k");
  const Grid& g = psi_hat[0].grid;
  auto forms = word_forms(k);

  // monomial table (i xi)^alpha for |alpha| <= k
  std::vector<MultiIndex3> monos;
  std::map<MultiIndex3, int> mono_index;
  for (int a = 0; a <= k; ++a)
    for (int b = 0; a + b <= k; ++b)
      for (int c = 0; a + b + c <= k; ++c) {
        mono_index[{a, b, c}] = static_cast<int>(monos.size());
        monos.push_back({a, b, c});
      }
  struct FlatTerm {
    int mono;
    int j;
    double coef;
  };
  std::vector<std::vector<FlatTerm>> flat(forms.size());
  for (std::size_t f = 0; f < forms.size(); ++f)
    for (auto& t : forms[f].terms) flat[f].push_back({mono_index.at(t.alpha), t.j, t.coef});

  std::vector<cplx> mono(monos.size());
  double energy = 0.0, wmax = 0.0;
  const int n = g.n;
  for_each_mode(g, [&](std::size_t idx, double kx, double ky, double kz, bool nyq) {
    if (nyq) return;
    const int kk = static_cast<int>(idx % (n / 2 + 1));
    const double hw = hermitian_weight(n, kk);
    const cplx ix(0, kx), iy(0, ky), iz(0, kz);
    for (std::size_t m = 0; m < monos.size(); ++m) {
      cplx v = 1.0;
      for (int p = 0; p < monos[m][0]; ++p) v *= ix;
      for (int p = 0; p < monos[m][1]; ++p) v *= iy;
      for (int p = 0; p < monos[m][2]; ++p) v *= iz;
      mono[m] = v;
    }
    const double k2 = kx * kx + ky * ky + kz * kz;
    const double kmax_c = std::max({std::abs(kx), std::abs(ky), std::abs(kz)});
    for (std::size_t f = 0; f < forms.size(); ++f) {
      cplx a = 0.0, b = 0.0;
      for (const auto& t : flat[f]) {
        cplx w = t.coef * mono[t.mono];
        a += w * psi_hat[t.j].c[idx];
        b += w * dpsi_hat[t.j].c[idx];
      }
      energy += forms[f].multiplicity * hw * (std::norm(b) + k2 * std::norm(a));
      wmax = std::max(wmax, std::max(std::norm(b), kmax_c * kmax_c * std::norm(a)));
    }
  });
  WordNorms out;
  const double N = static_cast<double>(g.volume_count());
  out.energy_sq = energy / N * g.cell_volume();
  out.linf_xi = std::sqrt(wmax) * g.cell_volume();
  return out;
}

double gamma_energy(const Lattice& lat, int k) {
  if (k > lat.order()) throw std::invalid_argument("gamma_energy: lattice order below k");
  std::vector<Spectrum> ph, dh;
  for (int j = 0; j <= k; ++j) {
    ph.push_back(forward(lat.psi[j]));
    dh.push_back(forward(lat.dpsi[j]));
  }
  return std::sqrt(word_norms(ph, dh, k).energy_sq);
}

}  // namespace aniso::vf
