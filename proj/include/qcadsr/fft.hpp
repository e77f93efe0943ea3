#pragma once

// Lattice <-> Brillouin-zone transforms on the centred grid
// k_j = -pi + 2 pi j / N, j = 0 .. N-1.
//
//   forward:  out_j = sum_x exp(-i k_j x) in_x
//   inverse:  out_x = (1/N) sum_j exp(+i k_j x) in_j
//
// Backed by FFTW. Plans are cached per size and shared between threads.

#include <complex>
#include <span>

namespace qcadsr::fft {

using cplx = std::complex<double>;

/// Requires in.size() == out.size(), even and nonzero. in and out may alias.
void lattice_to_spectrum(std::span<const cplx> in, std::span<cplx> out);
void spectrum_to_lattice(std::span<const cplx> in, std::span<cplx> out);

}  // namespace qcadsr::fft
