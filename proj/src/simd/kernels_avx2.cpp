// AVX2+FMA variants of the kernels in kernels.hpp.  This translation unit is
// the only one compiled with -mavx2 -mfma; nothing here runs unless
// avx2_kernels() reported CPU support.

#include "gkp/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#if defined(GKP_BUILD_AVX2)
#include <immintrin.h>

namespace gkp::simd::avx2 {
namespace {

// Coefficients duplicated per complex lane: [c0, c0, c1, c1, ...].
struct StencilCoeffs {
  int dim = -1;
  std::vector<double> lo;  // sqrt(i/2)
  std::vector<double> hi;  // sqrt((i+1)/2)
};

const StencilCoeffs& coeffs_for(int dim) {
  thread_local StencilCoeffs c;
  if (c.dim != dim) {
    c.dim = dim;
    c.lo.assign(2 * static_cast<std::size_t>(dim), 0.0);
    c.hi.assign(2 * static_cast<std::size_t>(dim), 0.0);
    for (int i = 0; i < dim; ++i) {
      const double lo = std::sqrt(0.5 * i);
      const double hi = i + 1 < dim ? std::sqrt(0.5 * (i + 1)) : 0.0;
      c.lo[2 * i] = c.lo[2 * i + 1] = lo;
      c.hi[2 * i] = c.hi[2 * i + 1] = hi;
    }
  }
  return c;
}

inline __m256d cmul(__m256d v, __m256d sr, __m256d si) {
  const __m256d sw = _mm256_permute_pd(v, 0b0101);
  return _mm256_fmaddsub_pd(sr, v, _mm256_mul_pd(si, sw));
}

void cz_generator(const cplx* in, cplx* out, cplx* scratch, int dim, cplx scale) {
  const auto d = static_cast<std::size_t>(dim);
  const StencilCoeffs& c = coeffs_for(dim);
  const double* lo = c.lo.data();
  const double* hi = c.hi.data();

  for (std::size_t j = 0; j < d; ++j) {
    const double* col = reinterpret_cast<const double*>(in + j * d);
    double* t = reinterpret_cast<double*>(scratch + j * d);
    // i = 0
    t[0] = hi[0] * (d > 1 ? col[2] : 0.0);
    t[1] = hi[0] * (d > 1 ? col[3] : 0.0);
    std::size_t i = 1;
    for (; i + 2 < d; i += 2) {
      const __m256d below = _mm256_loadu_pd(col + 2 * (i - 1));
      const __m256d above = _mm256_loadu_pd(col + 2 * (i + 1));
      const __m256d l = _mm256_loadu_pd(lo + 2 * i);
      const __m256d h = _mm256_loadu_pd(hi + 2 * i);
      _mm256_storeu_pd(t + 2 * i, _mm256_fmadd_pd(h, above, _mm256_mul_pd(l, below)));
    }
    for (; i < d; ++i) {
      double re = lo[2 * i] * col[2 * (i - 1)];
      double im = lo[2 * i] * col[2 * (i - 1) + 1];
      if (i + 1 < d) {
        re += hi[2 * i] * col[2 * (i + 1)];
        im += hi[2 * i] * col[2 * (i + 1) + 1];
      }
      t[2 * i] = re;
      t[2 * i + 1] = im;
    }
  }

  const __m256d sr = _mm256_set1_pd(scale.real());
  const __m256d si = _mm256_set1_pd(scale.imag());
  const __m256d zero = _mm256_setzero_pd();
  for (std::size_t j = 0; j < d; ++j) {
    double* o = reinterpret_cast<double*>(out + j * d);
    const double* tl = j > 0 ? reinterpret_cast<const double*>(scratch + (j - 1) * d) : nullptr;
    const double* th = j + 1 < d ? reinterpret_cast<const double*>(scratch + (j + 1) * d) : nullptr;
    const __m256d l = _mm256_set1_pd(lo[2 * j]);
    const __m256d h = _mm256_set1_pd(hi[2 * j]);
    std::size_t i = 0;
    for (; i + 2 <= d; i += 2) {
      const __m256d a = tl ? _mm256_mul_pd(l, _mm256_loadu_pd(tl + 2 * i)) : zero;
      const __m256d acc = th ? _mm256_fmadd_pd(h, _mm256_loadu_pd(th + 2 * i), a) : a;
      _mm256_storeu_pd(o + 2 * i, cmul(acc, sr, si));
    }
    for (; i < d; ++i) {
      cplx acc{0.0, 0.0};
      if (tl) acc += lo[2 * j] * cplx{tl[2 * i], tl[2 * i + 1]};
      if (th) acc += hi[2 * j] * cplx{th[2 * i], th[2 * i + 1]};
      const cplx r = scale * acc;
      o[2 * i] = r.real();
      o[2 * i + 1] = r.imag();
    }
  }
}

void axpy(std::size_t n, cplx a, const cplx* x, cplx* y) {
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  const double* xp = reinterpret_cast<const double*>(x);
  double* yp = reinterpret_cast<double*>(y);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d prod = cmul(_mm256_loadu_pd(xp + 2 * k), ar, ai);
    _mm256_storeu_pd(yp + 2 * k, _mm256_add_pd(_mm256_loadu_pd(yp + 2 * k), prod));
  }
  for (; k < n; ++k) y[k] += a * x[k];
}

double max_abs(std::size_t n, const cplx* x) {
  const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  __m256d m = _mm256_setzero_pd();
  const double* xp = reinterpret_cast<const double*>(x);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) m = _mm256_max_pd(m, _mm256_and_pd(mask, _mm256_loadu_pd(xp + 2 * k)));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, m);
  double r = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  for (; k < n; ++k) r = std::max({r, std::abs(x[k].real()), std::abs(x[k].imag())});
  return r;
}

// Four phase-space points per vector, structure-of-arrays recursion state.
void wigner(const cplx* psi, int dim, const double* q, const double* p, double* w,
            std::size_t npts) {
  const auto d = static_cast<std::size_t>(dim);
  std::vector<double> storage(8 * d + 4);
  auto* lre = reinterpret_cast<__m256d*>((reinterpret_cast<std::uintptr_t>(storage.data()) + 31) & ~std::uintptr_t{31});
  __m256d* lim = lre + d;
  std::vector<double> sq(d + 1), inv_sq(d + 1, 0.0);
  for (std::size_t k = 0; k <= d; ++k) {
    sq[k] = std::sqrt(static_cast<double>(k));
    if (k > 0) inv_sq[k] = 1.0 / sq[k];
  }
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  std::size_t pt = 0;
  for (; pt + 4 <= npts; pt += 4) {
    alignas(32) double g0[4];
    for (int l = 0; l < 4; ++l) {
      const double ar = q[pt + l] * inv_sqrt2, ai = p[pt + l] * inv_sqrt2;
      g0[l] = std::exp(-2.0 * (ar * ar + ai * ai)) / std::numbers::pi;
    }
    const __m256d tar = _mm256_mul_pd(_mm256_set1_pd(2.0 * inv_sqrt2), _mm256_loadu_pd(q + pt));
    const __m256d tai = _mm256_mul_pd(_mm256_set1_pd(2.0 * inv_sqrt2), _mm256_loadu_pd(p + pt));
    const __m256d ntai = _mm256_sub_pd(_mm256_setzero_pd(), tai);

    lre[0] = _mm256_load_pd(g0);
    lim[0] = _mm256_setzero_pd();
    __m256d acc = _mm256_mul_pd(_mm256_set1_pd(std::norm(psi[0])), lre[0]);
    for (std::size_t n = 1; n < d; ++n) {
      const __m256d is = _mm256_set1_pd(inv_sq[n]);
      // (tar + i tai) * list[n-1]
      const __m256d re = _mm256_fmsub_pd(tar, lre[n - 1], _mm256_mul_pd(tai, lim[n - 1]));
      const __m256d im = _mm256_fmadd_pd(tar, lim[n - 1], _mm256_mul_pd(tai, lre[n - 1]));
      lre[n] = _mm256_mul_pd(re, is);
      lim[n] = _mm256_mul_pd(im, is);
      const cplx rho = psi[0] * std::conj(psi[n]);
      acc = _mm256_fmadd_pd(_mm256_set1_pd(2.0 * rho.real()), lre[n], acc);
      acc = _mm256_fnmadd_pd(_mm256_set1_pd(2.0 * rho.imag()), lim[n], acc);
    }
    for (std::size_t m = 1; m < d; ++m) {
      __m256d tre = lre[m], tim = lim[m];
      const __m256d sm = _mm256_set1_pd(sq[m]);
      const __m256d ism = _mm256_set1_pd(inv_sq[m]);
      {
        // (tar - i tai) * temp - sqrt(m) * list[m-1], all over sqrt(m)
        __m256d re = _mm256_fmsub_pd(tar, tre, _mm256_mul_pd(ntai, tim));
        __m256d im = _mm256_fmadd_pd(tar, tim, _mm256_mul_pd(ntai, tre));
        re = _mm256_fnmadd_pd(sm, lre[m - 1], re);
        im = _mm256_fnmadd_pd(sm, lim[m - 1], im);
        lre[m] = _mm256_mul_pd(re, ism);
        lim[m] = _mm256_mul_pd(im, ism);
      }
      acc = _mm256_fmadd_pd(_mm256_set1_pd(std::norm(psi[m])), lre[m], acc);
      for (std::size_t n = m + 1; n < d; ++n) {
        const __m256d is = _mm256_set1_pd(inv_sq[n]);
        __m256d re = _mm256_fmsub_pd(tar, lre[n - 1], _mm256_mul_pd(tai, lim[n - 1]));
        __m256d im = _mm256_fmadd_pd(tar, lim[n - 1], _mm256_mul_pd(tai, lre[n - 1]));
        re = _mm256_fnmadd_pd(sm, tre, re);
        im = _mm256_fnmadd_pd(sm, tim, im);
        tre = lre[n];
        tim = lim[n];
        lre[n] = _mm256_mul_pd(re, is);
        lim[n] = _mm256_mul_pd(im, is);
        const cplx rho = psi[m] * std::conj(psi[n]);
        acc = _mm256_fmadd_pd(_mm256_set1_pd(2.0 * rho.real()), lre[n], acc);
        acc = _mm256_fnmadd_pd(_mm256_set1_pd(2.0 * rho.imag()), lim[n], acc);
      }
    }
    _mm256_storeu_pd(w + pt, acc);
  }
  if (pt < npts) scalar_kernels().wigner(psi, dim, q + pt, p + pt, w + pt, npts - pt);
}

}  // namespace

const KernelTable& table() {
  static const KernelTable t{"avx2", cz_generator, axpy, max_abs, wigner};
  return t;
}

}  // namespace gkp::simd::avx2

#endif
