#include <algorithm>
#include <cmath>

#include "qcadsr/kernels.hpp"

namespace qcadsr::kernels {

namespace {

void qca_step_scalar(std::span<const cplx> r, std::span<const cplx> l, std::span<cplx> r_out,
                     std::span<cplx> l_out, double nn, double m) {
  const std::size_t n = r.size();
  if (n == 0) return;
  const cplx mim(0.0, -m);
  for (std::size_t x = 0; x < n; ++x) {
    std::size_t xp = (x + 1 == n) ? 0 : x + 1;
    std::size_t xm = (x == 0) ? n - 1 : x - 1;
    r_out[x] = nn * r[xp] + mim * l[x];
    l_out[x] = mim * r[x] + nn * l[xm];
  }
}

void mode_transform_scalar(std::span<const cplx> a00, std::span<const cplx> a01,
                           std::span<const cplx> a10, std::span<const cplx> a11,
                           std::span<cplx> r, std::span<cplx> l) {
  for (std::size_t j = 0; j < r.size(); ++j) {
    cplx u = r[j], v = l[j];
    r[j] = a00[j] * u + a01[j] * v;
    l[j] = a10[j] * u + a11[j] * v;
  }
}

void trig_series_scalar(std::span<const cplx> coeffs, std::span<const double> ks,
                        std::span<cplx> out) {
  const std::size_t n = coeffs.size();
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double k = ks[i];
    const cplx step(std::cos(k), -std::sin(k));
    cplx acc(0.0, 0.0);
    for (std::size_t s0 = 0; s0 < n; s0 += kTrigReseed) {
      double phase = -k * static_cast<double>(s0);
      cplx z(std::cos(phase), std::sin(phase));
      std::size_t s1 = std::min(n, s0 + kTrigReseed);
      for (std::size_t s = s0; s < s1; ++s) {
        acc += coeffs[s] * z;
        z *= step;
      }
    }
    out[i] = acc;
  }
}

void density_scalar(std::span<const cplx> r, std::span<const cplx> l, std::span<double> out) {
  for (std::size_t x = 0; x < r.size(); ++x) out[x] = std::norm(r[x]) + std::norm(l[x]);
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar", qca_step_scalar, mode_transform_scalar,
                                 trig_series_scalar, density_scalar};
  return table;
}

}  // namespace qcadsr::kernels
