#include "qcadsr/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "qcadsr/errors.hpp"

namespace qcadsr::fft {

namespace {

struct Plan {
  fftw_complex* buf = nullptr;
  fftw_plan plan = nullptr;
};

std::mutex g_mutex;

// Never freed: plans live for the process. Keyed by (size, sign).
std::map<std::pair<std::size_t, int>, Plan>& plans() {
  static auto* cache = new std::map<std::pair<std::size_t, int>, Plan>();
  return *cache;
}

Plan& plan_for(std::size_t n, int sign) {
  auto& cache = plans();
  auto it = cache.find({n, sign});
  if (it != cache.end()) return it->second;
  Plan p;
  p.buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  if (p.buf == nullptr) throw NumericalError("fftw_malloc failed for size " + std::to_string(n));
  p.plan = fftw_plan_dft_1d(static_cast<int>(n), p.buf, p.buf, sign, FFTW_ESTIMATE);
  if (p.plan == nullptr) throw NumericalError("FFTW planning failed for size " + std::to_string(n));
  return cache.emplace(std::make_pair(n, sign), p).first->second;
}

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw DomainError("transform input and output sizes differ");
  if (a == 0 || a % 2 != 0) {
    throw DomainError("lattice size must be even and nonzero, got " + std::to_string(a));
  }
}

// (-1)^x twiddle moves the FFTW grid 2 pi j / N onto -pi + 2 pi j / N.
void run(std::span<const cplx> in, std::span<cplx> out, int sign, double scale) {
  check_sizes(in.size(), out.size());
  const std::size_t n = in.size();
  std::lock_guard<std::mutex> lock(g_mutex);
  Plan& p = plan_for(n, sign);
  auto* buf = reinterpret_cast<cplx*>(p.buf);
  if (sign == FFTW_FORWARD) {
    for (std::size_t x = 0; x < n; ++x) buf[x] = (x & 1U) ? -in[x] : in[x];
    fftw_execute(p.plan);
    std::copy(buf, buf + n, out.begin());
  } else {
    std::copy(in.begin(), in.end(), buf);
    fftw_execute(p.plan);
    for (std::size_t x = 0; x < n; ++x) out[x] = ((x & 1U) ? -scale : scale) * buf[x];
  }
}

}  // namespace

void lattice_to_spectrum(std::span<const cplx> in, std::span<cplx> out) {
  run(in, out, FFTW_FORWARD, 1.0);
}

void spectrum_to_lattice(std::span<const cplx> in, std::span<cplx> out) {
  run(in, out, FFTW_BACKWARD, 1.0 / static_cast<double>(in.size()));
}

}  // namespace qcadsr::fft
