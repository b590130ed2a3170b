#include "aniso/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>

namespace aniso {

namespace {

// Plans are made with FFTW_ESTIMATE so the chosen algorithm (and hence the
// floating point result) does not depend on timing measurements.
struct PlanSet {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  fftw_plan c2c_f = nullptr;
  fftw_plan c2c_b = nullptr;
};

std::mutex plan_mutex;
std::map<int, PlanSet> plans;

PlanSet& plans_for(int n, bool need_c2c) {
  std::lock_guard<std::mutex> lock(plan_mutex);
  PlanSet& p = plans[n];
  std::size_t nr = static_cast<std::size_t>(n) * n * n;
  std::size_t nc = static_cast<std::size_t>(n) * n * (n / 2 + 1);
  if (!p.r2c) {
    double* rin = fftw_alloc_real(nr);
    fftw_complex* cout = fftw_alloc_complex(nc);
    p.r2c = fftw_plan_dft_r2c_3d(n, n, n, rin, cout, FFTW_ESTIMATE);
    p.c2r = fftw_plan_dft_c2r_3d(n, n, n, cout, rin, FFTW_ESTIMATE);
    fftw_free(rin);
    fftw_free(cout);
  }
  if (need_c2c && !p.c2c_f) {
    fftw_complex* a = fftw_alloc_complex(nr);
    fftw_complex* b = fftw_alloc_complex(nr);
    p.c2c_f = fftw_plan_dft_3d(n, n, n, a, b, FFTW_FORWARD, FFTW_ESTIMATE);
    p.c2c_b = fftw_plan_dft_3d(n, n, n, a, b, FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_free(a);
    fftw_free(b);
  }
  return p;
}

// new-array execute requires alignment matching the planning arrays
template <typename T>
struct AlignedBuf {
  T* p;
  std::size_t n;
  explicit AlignedBuf(std::size_t count) : n(count) {
    p = static_cast<T*>(fftw_malloc(sizeof(T) * count));
    if (!p) throw std::bad_alloc();
  }
  ~AlignedBuf() { fftw_free(p); }
  AlignedBuf(const AlignedBuf&) = delete;
  AlignedBuf& operator=(const AlignedBuf&) = delete;
};

}  // namespace

Spectrum forward(const ScalarField& f) {
  const int n = f.grid.n;
  PlanSet& p = plans_for(n, false);
  Spectrum s(f.grid);
  AlignedBuf<double> in(f.size());
  AlignedBuf<fftw_complex> out(s.c.size());
  std::memcpy(in.p, f.data.data(), sizeof(double) * f.size());
  fftw_execute_dft_r2c(p.r2c, in.p, out.p);
  std::memcpy(reinterpret_cast<void*>(s.c.data()), out.p, sizeof(fftw_complex) * s.c.size());
  return s;
}

ScalarField inverse(const Spectrum& s, double time) {
  const int n = s.grid.n;
  PlanSet& p = plans_for(n, false);
  ScalarField f(s.grid, time);
  AlignedBuf<fftw_complex> in(s.c.size());
  AlignedBuf<double> out(f.size());
  std::memcpy(in.p, reinterpret_cast<const void*>(s.c.data()), sizeof(fftw_complex) * s.c.size());
  fftw_execute_dft_c2r(p.c2r, in.p, out.p);
  const double scale = 1.0 / static_cast<double>(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) f.data[i] = out.p[i] * scale;
  return f;
}

std::vector<cplx> forward_c2c(const std::vector<cplx>& f, int n) {
  PlanSet& p = plans_for(n, true);
  AlignedBuf<fftw_complex> in(f.size());
  AlignedBuf<fftw_complex> out(f.size());
  std::memcpy(in.p, reinterpret_cast<const void*>(f.data()), sizeof(fftw_complex) * f.size());
  fftw_execute_dft(p.c2c_f, in.p, out.p);
  std::vector<cplx> r(f.size());
  std::memcpy(reinterpret_cast<void*>(r.data()), out.p, sizeof(fftw_complex) * f.size());
  return r;
}

std::vector<cplx> inverse_c2c(const std::vector<cplx>& f, int n) {
  PlanSet& p = plans_for(n, true);
  AlignedBuf<fftw_complex> in(f.size());
  AlignedBuf<fftw_complex> out(f.size());
  std::memcpy(in.p, reinterpret_cast<const void*>(f.data()), sizeof(fftw_complex) * f.size());
  fftw_execute_dft(p.c2c_b, in.p, out.p);
  std::vector<cplx> r(f.size());
  const double scale = 1.0 / static_cast<double>(f.size());
  const cplx* src = reinterpret_cast<const cplx*>(out.p);
  for (std::size_t i = 0; i < f.size(); ++i) r[i] = src[i] * scale;
  return r;
}

std::vector<cplx> full_spectrum(const Spectrum& s) {
  const int n = s.grid.n;
  const int nz = s.nz();
  std::vector<cplx> full(static_cast<std::size_t>(n) * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        std::size_t dst = (static_cast<std::size_t>(i) * n + j) * n + k;
        if (k < nz) {
          full[dst] = s.c[s.index(i, j, k)];
        } else {
          int ii = (n - i) % n, jj = (n - j) % n, kk = n - k;
          full[dst] = std::conj(s.c[s.index(ii, jj, kk)]);
        }
      }
  return full;
}

}  // namespace aniso
