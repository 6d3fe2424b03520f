#include "qtel/kernels.hpp"

#if defined(QTEL_HAVE_AVX2)

#include <immintrin.h>

// Each __m256d lane pair holds one complex double: [re0 im0 re1 im1].
// Complex products use the broadcast-real / broadcast-imag + swapped-pair
// decomposition: with xr = [a a ...], xi = [b b ...], ys = swap_pairs(y),
//   fmaddsub(xr, y, xi*ys) = x * y        (even lanes ac - bd, odd ad + bc)
//   fmsubadd(xr, y, xi*ys) = conj(x) * y  (even lanes ac + bd, odd ad - bc)

namespace qtel::kernels {
namespace {

inline __m256d cmul(__m256d x, __m256d y) {
  const __m256d xr = _mm256_movedup_pd(x);
  const __m256d xi = _mm256_permute_pd(x, 0xF);
  const __m256d ys = _mm256_permute_pd(y, 0x5);
  return _mm256_fmaddsub_pd(xr, y, _mm256_mul_pd(xi, ys));
}

inline __m256d cmul_conj(__m256d x, __m256d y) {
  const __m256d xr = _mm256_movedup_pd(x);
  const __m256d xi = _mm256_permute_pd(x, 0xF);
  const __m256d ys = _mm256_permute_pd(y, 0x5);
  return _mm256_fmsubadd_pd(xr, y, _mm256_mul_pd(xi, ys));
}

inline cplx reduce_pairs(__m256d acc) {
  const __m128d lo = _mm256_castpd256_pd128(acc);
  const __m128d hi = _mm256_extractf128_pd(acc, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  alignas(16) double out[2];
  _mm_store_pd(out, s);
  return {out[0], out[1]};
}

cplx v_dotc(std::size_t n, const cplx* x, const cplx* y) {
  const double* xd = reinterpret_cast<const double*>(x);
  const double* yd = reinterpret_cast<const double*>(y);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    acc = _mm256_add_pd(acc, cmul_conj(xv, yv));
  }
  cplx r = reduce_pairs(acc);
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    r += cplx{xr * yr + xi * yi, xr * yi - xi * yr};
  }
  return r;
}

cplx v_dotu(std::size_t n, const cplx* x, const cplx* y) {
  const double* xd = reinterpret_cast<const double*>(x);
  const double* yd = reinterpret_cast<const double*>(y);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    acc = _mm256_add_pd(acc, cmul(xv, yv));
  }
  cplx r = reduce_pairs(acc);
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    r += cplx{xr * yr - xi * yi, xr * yi + xi * yr};
  }
  return r;
}

void v_axpy(std::size_t n, cplx a, const cplx* x, cplx* y) {
  const double* xd = reinterpret_cast<const double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d xs = _mm256_permute_pd(xv, 0x5);
    const __m256d prod = _mm256_fmaddsub_pd(ar, xv, _mm256_mul_pd(ai, xs));
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(_mm256_loadu_pd(yd + 2 * i), prod));
  }
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] += cplx{a.real() * xr - a.imag() * xi, a.real() * xi + a.imag() * xr};
  }
}

void v_scal(std::size_t n, cplx a, cplx* x) {
  double* xd = reinterpret_cast<double*>(x);
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d xs = _mm256_permute_pd(xv, 0x5);
    _mm256_storeu_pd(xd + 2 * i, _mm256_fmaddsub_pd(ar, xv, _mm256_mul_pd(ai, xs)));
  }
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    x[i] = cplx{a.real() * xr - a.imag() * xi, a.real() * xi + a.imag() * xr};
  }
}

double v_nrm2sq(std::size_t n, const cplx* x) {
  const double* xd = reinterpret_cast<const double*>(x);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    acc = _mm256_fmadd_pd(xv, xv, acc);
  }
  const __m128d lo = _mm256_castpd256_pd128(acc);
  const __m128d hi = _mm256_extractf128_pd(acc, 1);
  const __m128d s2 = _mm_add_pd(lo, hi);
  const __m128d s1 = _mm_hadd_pd(s2, s2);
  double r = _mm_cvtsd_f64(s1);
  for (; i < n; ++i) r += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return r;
}

void v_matvec(std::size_t m, std::size_t n, const cplx* a, const cplx* x, cplx* y) {
  for (std::size_t i = 0; i < m; ++i) y[i] = v_dotu(n, a + i * n, x);
}

void v_matmul(std::size_t m, std::size_t k, std::size_t n, const cplx* a, const cplx* b, cplx* c) {
  for (std::size_t i = 0; i < m; ++i) {
    cplx* crow = c + i * n;
    for (std::size_t j = 0; j < n; ++j) crow[j] = cplx{0.0, 0.0};
    for (std::size_t l = 0; l < k; ++l) v_axpy(n, a[i * k + l], b + l * n, crow);
  }
}

}  // namespace

const Backend& avx2_backend() {
  static const Backend backend{v_dotc, v_dotu, v_axpy, v_scal, v_nrm2sq, v_matvec, v_matmul,
                               "avx2"};
  return backend;
}

}  // namespace qtel::kernels

#endif  // QTEL_HAVE_AVX2
