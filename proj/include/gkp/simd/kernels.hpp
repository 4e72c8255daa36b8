#pragma once

// Data-parallel inner loops used by the Fock-space simulator.
//
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2+FMA variant.  The active table is chosen once at first use from the
// CPU feature set, overridable with GKP_SIMD=scalar|avx2|auto.  Variants are
// equivalence-tested against the scalar table (tests/unit/test_kernels.cpp).

#include <complex>
#include <cstddef>
#include <string_view>

namespace gkp::simd {

using cplx = std::complex<double>;

struct KernelTable {
  std::string_view name;

  // out = scale * Q psi Q^T for a D x D column-major two-mode amplitude
  // matrix, where Q is the truncated position quadrature (zero diagonal,
  // off-diagonal sqrt((k+1)/2)).  scratch must hold D*D values.
  void (*cz_generator)(const cplx* in, cplx* out, cplx* scratch, int dim,
                       cplx scale);

  // y += a * x
  void (*axpy)(std::size_t n, cplx a, const cplx* x, cplx* y);

  // max over k of max(|Re x_k|, |Im x_k|)
  double (*max_abs)(std::size_t n, const cplx* x);

  // W[k] = Wigner function of the pure single-mode state psi (length dim)
  // at phase-space point (q[k], p[k]), for k < npts.
  void (*wigner)(const cplx* psi, int dim, const double* q, const double* p,
                 double* w, std::size_t npts);
};

const KernelTable& scalar_kernels();

// nullptr when the binary was built without AVX2 support or the CPU lacks it.
const KernelTable* avx2_kernels();

// Table selected for this process (GKP_SIMD override, else best available).
const KernelTable& kernels();

}  // namespace gkp::simd
