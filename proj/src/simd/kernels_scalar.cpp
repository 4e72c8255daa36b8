#include "gkp/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace gkp::simd {
namespace {

void cz_generator_scalar(const cplx* in, cplx* out, cplx* scratch, int dim,
                         cplx scale) {
  const auto d = static_cast<std::size_t>(dim);
  // scratch = Q * in, column by column
  for (std::size_t j = 0; j < d; ++j) {
    const cplx* col = in + j * d;
    cplx* t = scratch + j * d;
    for (std::size_t i = 0; i < d; ++i) {
      cplx acc{0.0, 0.0};
      if (i > 0) acc += std::sqrt(0.5 * static_cast<double>(i)) * col[i - 1];
      if (i + 1 < d) acc += std::sqrt(0.5 * static_cast<double>(i + 1)) * col[i + 1];
      t[i] = acc;
    }
  }
  // out = scale * scratch * Q^T, combining whole columns
  for (std::size_t j = 0; j < d; ++j) {
    cplx* o = out + j * d;
    const double lo = j > 0 ? std::sqrt(0.5 * static_cast<double>(j)) : 0.0;
    const double hi = j + 1 < d ? std::sqrt(0.5 * static_cast<double>(j + 1)) : 0.0;
    const cplx* tl = j > 0 ? scratch + (j - 1) * d : nullptr;
    const cplx* th = j + 1 < d ? scratch + (j + 1) * d : nullptr;
    for (std::size_t i = 0; i < d; ++i) {
      cplx acc{0.0, 0.0};
      if (tl) acc += lo * tl[i];
      if (th) acc += hi * th[i];
      o[i] = scale * acc;
    }
  }
}

void axpy_scalar(std::size_t n, cplx a, const cplx* x, cplx* y) {
  for (std::size_t k = 0; k < n; ++k) y[k] += a * x[k];
}

double max_abs_scalar(std::size_t n, const cplx* x) {
  double m = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    m = std::max({m, std::abs(x[k].real()), std::abs(x[k].imag())});
  return m;
}

// Iterative Laguerre recursion over the Fock-basis Wigner kernels W_{mn}.
void wigner_scalar(const cplx* psi, int dim, const double* q, const double* p,
                   double* w, std::size_t npts) {
  const auto d = static_cast<std::size_t>(dim);
  std::vector<cplx> list(d);
  std::vector<double> sq(d + 1);
  for (std::size_t k = 0; k <= d; ++k) sq[k] = std::sqrt(static_cast<double>(k));
  for (std::size_t pt = 0; pt < npts; ++pt) {
    const cplx a = cplx{q[pt], p[pt]} / std::numbers::sqrt2;
    const cplx two_a = 2.0 * a;
    const cplx two_ac = std::conj(two_a);
    list[0] = std::exp(-2.0 * std::norm(a)) / std::numbers::pi;
    double acc = std::norm(psi[0]) * list[0].real();
    for (std::size_t n = 1; n < d; ++n) {
      list[n] = two_a * list[n - 1] / sq[n];
      acc += 2.0 * (psi[0] * std::conj(psi[n]) * list[n]).real();
    }
    for (std::size_t m = 1; m < d; ++m) {
      cplx temp = list[m];
      list[m] = (two_ac * temp - sq[m] * list[m - 1]) / sq[m];
      acc += std::norm(psi[m]) * list[m].real();
      for (std::size_t n = m + 1; n < d; ++n) {
        const cplx next = (two_a * list[n - 1] - sq[m] * temp) / sq[n];
        temp = list[n];
        list[n] = next;
        acc += 2.0 * (psi[m] * std::conj(psi[n]) * list[n]).real();
      }
    }
    w[pt] = acc;
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", cz_generator_scalar, axpy_scalar,
                                 max_abs_scalar, wigner_scalar};
  return table;
}

}  // namespace gkp::simd
