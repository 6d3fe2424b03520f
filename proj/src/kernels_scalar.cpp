#include "qtel/kernels.hpp"

namespace qtel::kernels {
namespace {

cplx s_dotc(std::size_t n, const cplx* x, const cplx* y) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    re += xr * yr + xi * yi;
    im += xr * yi - xi * yr;
  }
  return {re, im};
}

cplx s_dotu(std::size_t n, const cplx* x, const cplx* y) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    re += xr * yr - xi * yi;
    im += xr * yi + xi * yr;
  }
  return {re, im};
}

void s_axpy(std::size_t n, cplx a, const cplx* x, cplx* y) {
  const double ar = a.real(), ai = a.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] += cplx{ar * xr - ai * xi, ar * xi + ai * xr};
  }
}

void s_scal(std::size_t n, cplx a, cplx* x) {
  const double ar = a.real(), ai = a.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    x[i] = cplx{ar * xr - ai * xi, ar * xi + ai * xr};
  }
}

double s_nrm2sq(std::size_t n, const cplx* x) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return acc;
}

void s_matvec(std::size_t m, std::size_t n, const cplx* a, const cplx* x, cplx* y) {
  for (std::size_t i = 0; i < m; ++i) y[i] = s_dotu(n, a + i * n, x);
}

void s_matmul(std::size_t m, std::size_t k, std::size_t n, const cplx* a, const cplx* b, cplx* c) {
  for (std::size_t i = 0; i < m; ++i) {
    cplx* crow = c + i * n;
    for (std::size_t j = 0; j < n; ++j) crow[j] = cplx{0.0, 0.0};
    for (std::size_t l = 0; l < k; ++l) s_axpy(n, a[i * k + l], b + l * n, crow);
  }
}

}  // namespace

const Backend& scalar_backend() {
  static const Backend backend{s_dotc, s_dotu, s_axpy, s_scal, s_nrm2sq, s_matvec, s_matmul,
                               "scalar"};
  return backend;
}

}  // namespace qtel::kernels
