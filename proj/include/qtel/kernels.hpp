#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

// Low-level dense kernels over interleaved std::complex<double> arrays.
// A scalar reference implementation always exists; on x86-64 an AVX2+FMA
// variant is compiled in and selected at runtime (overridable through the
// QTEL_SIMD environment variable: auto | scalar | avx2).  All variants are
// equivalence-tested against the scalar reference at tolerance; exact bit
// equality across variants is not promised.

namespace qtel::kernels {

using cplx = std::complex<double>;

struct Backend {
  // sum conj(x[i]) * y[i]
  cplx (*dotc)(std::size_t n, const cplx* x, const cplx* y);
  // sum x[i] * y[i]
  cplx (*dotu)(std::size_t n, const cplx* x, const cplx* y);
  // y[i] += a * x[i]
  void (*axpy)(std::size_t n, cplx a, const cplx* x, cplx* y);
  // x[i] *= a
  void (*scal)(std::size_t n, cplx a, cplx* x);
  // sum |x[i]|^2
  double (*nrm2sq)(std::size_t n, const cplx* x);
  // y = A x with A row-major m x n; y must not alias A or x
  void (*matvec)(std::size_t m, std::size_t n, const cplx* a, const cplx* x, cplx* y);
  // C = A B with A m x k, B k x n, all row-major; C must not alias A or B
  void (*matmul)(std::size_t m, std::size_t k, std::size_t n, const cplx* a, const cplx* b,
                 cplx* c);
  const char* name;
};

const Backend& scalar_backend();
#if defined(QTEL_HAVE_AVX2)
const Backend& avx2_backend();
#endif

// Resolved once on first use from CPU features and QTEL_SIMD.
const Backend& active();
std::string_view active_name();

inline cplx dotc(std::size_t n, const cplx* x, const cplx* y) { return active().dotc(n, x, y); }
inline cplx dotu(std::size_t n, const cplx* x, const cplx* y) { return active().dotu(n, x, y); }
inline void axpy(std::size_t n, cplx a, const cplx* x, cplx* y) { active().axpy(n, a, x, y); }
inline void scal(std::size_t n, cplx a, cplx* x) { active().scal(n, a, x); }
inline double nrm2sq(std::size_t n, const cplx* x) { return active().nrm2sq(n, x); }
inline void matvec(std::size_t m, std::size_t n, const cplx* a, const cplx* x, cplx* y) {
  active().matvec(m, n, a, x, y);
}
inline void matmul(std::size_t m, std::size_t k, std::size_t n, const cplx* a, const cplx* b,
                   cplx* c) {
  active().matmul(m, k, n, a, b, c);
}

}  // namespace qtel::kernels
