#pragma once

// Data-parallel inner loops of the lattice engine.
//
// Every kernel has a scalar reference implementation. Wider variants (AVX2+FMA
// on x86-64) are compiled into separate translation units and chosen once at
// startup from the CPU feature bits. Variants agree with the reference up to
// floating-point reassociation; see tests/test_kernels.cpp.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace qcadsr::kernels {

using cplx = std::complex<double>;

struct KernelTable {
  std::string_view name;

  /// One automaton step on a periodic lattice of size n = r.size():
  ///   r_out[x] = nn r[x+1] - i m l[x]
  ///   l_out[x] = -i m r[x] + nn l[x-1]
  void (*qca_step)(std::span<const cplx> r, std::span<const cplx> l, std::span<cplx> r_out,
                   std::span<cplx> l_out, double nn, double m);

  /// In-place per-mode 2x2 transform (r, l) <- A_j (r, l) with
  /// A_j = [[a00, a01], [a10, a11]]_j.
  void (*mode_transform)(std::span<const cplx> a00, std::span<const cplx> a01,
                         std::span<const cplx> a10, std::span<const cplx> a11,
                         std::span<cplx> r, std::span<cplx> l);

  /// out[i] = sum_s coeffs[s] exp(-i ks[i] s), s = 0 .. coeffs.size()-1.
  void (*trig_series)(std::span<const cplx> coeffs, std::span<const double> ks,
                      std::span<cplx> out);

  /// out[x] = |r[x]|^2 + |l[x]|^2.
  void (*density)(std::span<const cplx> r, std::span<const cplx> l, std::span<double> out);
};

const KernelTable& scalar_table();

/// nullptr when the build or the CPU lacks AVX2+FMA.
const KernelTable* avx2_table();

/// Table used by the library. Chosen on first use: the widest supported
/// variant, unless the environment variable QCADSR_KERNELS=scalar is set.
const KernelTable& active();

/// Phasors in trig_series are re-seeded from sincos every this many terms.
inline constexpr std::size_t kTrigReseed = 64;

}  // namespace qcadsr::kernels
