// AVX2 + FMA variants. Compiled with -mavx2 -mfma; only reached after the
// dispatcher has checked the CPU feature bits.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "qcadsr/kernels.hpp"

namespace qcadsr::kernels {

namespace {

// Two interleaved complex doubles per register: [re0, im0, re1, im1].
inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

inline __m256d cmul(__m256d a, __m256d b) {
  __m256d b_re = _mm256_movedup_pd(b);
  __m256d b_im = _mm256_permute_pd(b, 0xF);
  __m256d a_sw = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

void qca_step_avx2(std::span<const cplx> r, std::span<const cplx> l, std::span<cplx> r_out,
                   std::span<cplx> l_out, double nn, double m) {
  const std::size_t n = r.size();
  if (n < 4) {
    scalar_table().qca_step(r, l, r_out, l_out, nn, m);
    return;
  }
  const cplx mim(0.0, -m);
  auto edge = [&](std::size_t x) {
    std::size_t xp = (x + 1 == n) ? 0 : x + 1;
    std::size_t xm = (x == 0) ? n - 1 : x - 1;
    r_out[x] = nn * r[xp] + mim * l[x];
    l_out[x] = mim * r[x] + nn * l[xm];
  };

  // -i m (a + ib) = (m b, -m a): swap lanes, then scale by (m, -m).
  const __m256d vn = _mm256_set1_pd(nn);
  const __m256d vm = _mm256_setr_pd(m, -m, m, -m);
  edge(0);
  std::size_t x = 1;
  for (; x + 2 < n; x += 2) {
    __m256d r_here = load2(&r[x]);
    __m256d l_here = load2(&l[x]);
    __m256d r_next = load2(&r[x + 1]);
    __m256d l_prev = load2(&l[x - 1]);
    __m256d rm = _mm256_mul_pd(_mm256_permute_pd(l_here, 0x5), vm);
    __m256d lm = _mm256_mul_pd(_mm256_permute_pd(r_here, 0x5), vm);
    store2(&r_out[x], _mm256_fmadd_pd(vn, r_next, rm));
    store2(&l_out[x], _mm256_fmadd_pd(vn, l_prev, lm));
  }
  for (; x < n; ++x) edge(x);
}

void mode_transform_avx2(std::span<const cplx> a00, std::span<const cplx> a01,
                         std::span<const cplx> a10, std::span<const cplx> a11,
                         std::span<cplx> r, std::span<cplx> l) {
  const std::size_t n = r.size();
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    __m256d u = load2(&r[j]);
    __m256d v = load2(&l[j]);
    __m256d ru = _mm256_add_pd(cmul(load2(&a00[j]), u), cmul(load2(&a01[j]), v));
    __m256d lv = _mm256_add_pd(cmul(load2(&a10[j]), u), cmul(load2(&a11[j]), v));
    store2(&r[j], ru);
    store2(&l[j], lv);
  }
  for (; j < n; ++j) {
    cplx u = r[j], v = l[j];
    r[j] = a00[j] * u + a01[j] * v;
    l[j] = a10[j] * u + a11[j] * v;
  }
}

// Four evaluation points at a time, real and imaginary parts in separate
// registers. Two such groups are interleaved to hide FMA latency.
void trig_series_avx2(std::span<const cplx> coeffs, std::span<const double> ks,
                      std::span<cplx> out) {
  const std::size_t n = coeffs.size();
  const double* c = reinterpret_cast<const double*>(coeffs.data());
  const std::size_t np = ks.size();
  std::size_t i = 0;

  auto seed = [&](std::size_t base, double s0, __m256d& zr, __m256d& zi) {
    alignas(32) double re[4], im[4];
    for (int q = 0; q < 4; ++q) {
      double ph = -ks[base + q] * s0;
      re[q] = std::cos(ph);
      im[q] = std::sin(ph);
    }
    zr = _mm256_load_pd(re);
    zi = _mm256_load_pd(im);
  };
  auto steps = [&](std::size_t base, __m256d& sr, __m256d& si) {
    alignas(32) double re[4], im[4];
    for (int q = 0; q < 4; ++q) {
      re[q] = std::cos(ks[base + q]);
      im[q] = -std::sin(ks[base + q]);
    }
    sr = _mm256_load_pd(re);
    si = _mm256_load_pd(im);
  };
  auto flush = [&](std::size_t base, __m256d ar, __m256d ai) {
    alignas(32) double re[4], im[4];
    _mm256_store_pd(re, ar);
    _mm256_store_pd(im, ai);
    for (int q = 0; q < 4; ++q) out[base + q] = cplx(re[q], im[q]);
  };

  for (; i + 8 <= np; i += 8) {
    __m256d sr0, si0, sr1, si1;
    steps(i, sr0, si0);
    steps(i + 4, sr1, si1);
    __m256d ar0 = _mm256_setzero_pd(), ai0 = _mm256_setzero_pd();
    __m256d ar1 = _mm256_setzero_pd(), ai1 = _mm256_setzero_pd();
    for (std::size_t s0 = 0; s0 < n; s0 += kTrigReseed) {
      __m256d zr0, zi0, zr1, zi1;
      seed(i, static_cast<double>(s0), zr0, zi0);
      seed(i + 4, static_cast<double>(s0), zr1, zi1);
      const std::size_t s1 = std::min(n, s0 + kTrigReseed);
      for (std::size_t s = s0; s < s1; ++s) {
        __m256d cr = _mm256_broadcast_sd(c + 2 * s);
        __m256d ci = _mm256_broadcast_sd(c + 2 * s + 1);
        ar0 = _mm256_fmadd_pd(cr, zr0, _mm256_fnmadd_pd(ci, zi0, ar0));
        ai0 = _mm256_fmadd_pd(cr, zi0, _mm256_fmadd_pd(ci, zr0, ai0));
        ar1 = _mm256_fmadd_pd(cr, zr1, _mm256_fnmadd_pd(ci, zi1, ar1));
        ai1 = _mm256_fmadd_pd(cr, zi1, _mm256_fmadd_pd(ci, zr1, ai1));
        __m256d nr0 = _mm256_fmsub_pd(zr0, sr0, _mm256_mul_pd(zi0, si0));
        __m256d ni0 = _mm256_fmadd_pd(zr0, si0, _mm256_mul_pd(zi0, sr0));
        __m256d nr1 = _mm256_fmsub_pd(zr1, sr1, _mm256_mul_pd(zi1, si1));
        __m256d ni1 = _mm256_fmadd_pd(zr1, si1, _mm256_mul_pd(zi1, sr1));
        zr0 = nr0;
        zi0 = ni0;
        zr1 = nr1;
        zi1 = ni1;
      }
    }
    flush(i, ar0, ai0);
    flush(i + 4, ar1, ai1);
  }
  if (i < np) {
    scalar_table().trig_series(coeffs, ks.subspan(i), out.subspan(i));
  }
}

void density_avx2(std::span<const cplx> r, std::span<const cplx> l, std::span<double> out) {
  const std::size_t n = r.size();
  std::size_t x = 0;
  for (; x + 4 <= n; x += 4) {
    __m256d r0 = load2(&r[x]), r1 = load2(&r[x + 2]);
    __m256d l0 = load2(&l[x]), l1 = load2(&l[x + 2]);
    __m256d s0 = _mm256_fmadd_pd(r0, r0, _mm256_mul_pd(l0, l0));
    __m256d s1 = _mm256_fmadd_pd(r1, r1, _mm256_mul_pd(l1, l1));
    // hadd -> [d0, d2, d1, d3]; restore order.
    __m256d h = _mm256_hadd_pd(s0, s1);
    _mm256_storeu_pd(&out[x], _mm256_permute4x64_pd(h, 0b11011000));
  }
  for (; x < n; ++x) out[x] = std::norm(r[x]) + std::norm(l[x]);
}

}  // namespace

const KernelTable& avx2_table_unchecked() {
  static const KernelTable table{"avx2", qca_step_avx2, mode_transform_avx2, trig_series_avx2,
                                 density_avx2};
  return table;
}

}  // namespace qcadsr::kernels
