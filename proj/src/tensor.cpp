#include "qtel/tensor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "qtel/eig.hpp"

namespace qtel {

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat& Mat::operator+=(const Mat& o) {
  for (std::size_t i = 0; i < d_.size(); ++i) d_[i] += o.d_[i];
  return *this;
}

Mat& Mat::operator-=(const Mat& o) {
  for (std::size_t i = 0; i < d_.size(); ++i) d_[i] -= o.d_[i];
  return *this;
}

Mat& Mat::operator*=(cplx a) {
  kernels::scal(d_.size(), a, d_.data());
  return *this;
}

Mat operator+(Mat a, const Mat& b) { return a += b; }
Mat operator-(Mat a, const Mat& b) { return a -= b; }
Mat operator*(Mat a, cplx s) { return a *= s; }
Mat operator*(cplx s, Mat a) { return a *= s; }

Mat mul(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("mul: dimension mismatch");
  Mat c(a.rows(), b.cols());
  kernels::matmul(a.rows(), a.cols(), b.cols(), a.data(), b.data(), c.data());
  return c;
}

Mat operator*(const Mat& a, const Mat& b) { return mul(a, b); }

Mat dagger(const Mat& a) {
  Mat r(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(j, i) = std::conj(a(i, j));
  return r;
}

Mat transpose(const Mat& a) {
  Mat r(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(j, i) = a(i, j);
  return r;
}

Mat conjugate(const Mat& a) {
  Mat r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = std::conj(a(i, j));
  return r;
}

cplx trace(const Mat& a) {
  cplx t = 0.0;
  for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) t += a(i, i);
  return t;
}

double max_abs(const Mat& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j)));
  return m;
}

double max_abs_diff(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

Vec apply(const Mat& a, const Vec& x) {
  if (a.cols() != x.size()) throw std::invalid_argument("apply: dimension mismatch");
  Vec y(a.rows());
  kernels::matvec(a.rows(), a.cols(), a.data(), x.data(), y.data());
  return y;
}

cplx inner(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw std::invalid_argument("inner: dimension mismatch");
  return kernels::dotc(x.size(), x.data(), y.data());
}

cplx quad_form(const Vec& x, const Mat& m, const Vec& y) {
  const Vec my = apply(m, y);
  return inner(x, my);
}

double norm(const Vec& x) { return std::sqrt(kernels::nrm2sq(x.size(), x.data())); }

void normalize(Vec& x) {
  const double n = norm(x);
  if (n == 0.0) throw std::invalid_argument("normalize: zero vector");
  kernels::scal(x.size(), cplx{1.0 / n, 0.0}, x.data());
}

Mat outer(const Vec& x, const Vec& y) {
  Mat r(x.size(), y.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) r(i, j) = x[i] * std::conj(y[j]);
  return r;
}

Mat tensor_product(const Mat& a, const Mat& b) {
  Mat r(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx{0.0, 0.0}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return r;
}

Vec tensor_product(const Vec& a, const Vec& b) {
  Vec r(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) r[i * b.size() + k] = a[i] * b[k];
  return r;
}

SubsystemMask SubsystemMask::of(int n_qubits, std::initializer_list<int> qubits) {
  SubsystemMask m;
  m.selected.assign(static_cast<std::size_t>(n_qubits), false);
  for (int q : qubits) {
    if (q < 0 || q >= n_qubits) throw std::invalid_argument("subsystem mask: qubit out of range");
    m.selected[static_cast<std::size_t>(q)] = true;
  }
  return m;
}

int SubsystemMask::count() const {
  return static_cast<int>(std::count(selected.begin(), selected.end(), true));
}

int qubit_count(const Mat& rho) {
  if (rho.rows() != rho.cols() || rho.rows() == 0 || !std::has_single_bit(rho.rows()))
    throw std::invalid_argument("expected a square matrix with power-of-2 dimension");
  return std::countr_zero(rho.rows());
}

Mat partial_trace(const Mat& rho, const SubsystemMask& keep) {
  const int nq = qubit_count(rho);
  if (keep.size() != nq) throw std::invalid_argument("partial_trace: mask length mismatch");
  const int nkeep = keep.count();
  if (nkeep == 0 || nkeep == nq) throw std::invalid_argument("degenerate partial trace");

  // bit positions (from MSB = qubit 0) of kept and traced qubits
  std::vector<int> keep_shift, tr_shift;
  for (int q = 0; q < nq; ++q) {
    const int shift = nq - 1 - q;
    (keep.selected[static_cast<std::size_t>(q)] ? keep_shift : tr_shift).push_back(shift);
  }
  const std::size_t dk = std::size_t{1} << nkeep;
  const std::size_t dt = std::size_t{1} << (nq - nkeep);

  auto scatter = [](std::size_t bits, const std::vector<int>& shifts) {
    std::size_t out = 0;
    for (std::size_t b = 0; b < shifts.size(); ++b)
      if (bits >> (shifts.size() - 1 - b) & 1) out |= std::size_t{1} << shifts[b];
    return out;
  };

  Mat r(dk, dk);
  for (std::size_t i = 0; i < dk; ++i)
    for (std::size_t j = 0; j < dk; ++j) {
      const std::size_t bi = scatter(i, keep_shift), bj = scatter(j, keep_shift);
      cplx s = 0.0;
      for (std::size_t t = 0; t < dt; ++t) {
        const std::size_t bt = scatter(t, tr_shift);
        s += rho(bi | bt, bj | bt);
      }
      r(i, j) = s;
    }
  return r;
}

Mat partial_transpose(const Mat& rho, const SubsystemMask& transposed) {
  const int nq = qubit_count(rho);
  if (transposed.size() != nq)
    throw std::invalid_argument("partial_transpose: mask length mismatch");
  std::size_t mask_bits = 0;
  for (int q = 0; q < nq; ++q)
    if (transposed.selected[static_cast<std::size_t>(q)])
      mask_bits |= std::size_t{1} << (nq - 1 - q);

  const std::size_t d = rho.rows();
  Mat r(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      // swap the masked bits between row and column index
      const std::size_t ii = (i & ~mask_bits) | (j & mask_bits);
      const std::size_t jj = (j & ~mask_bits) | (i & mask_bits);
      r(ii, jj) = rho(i, j);
    }
  return r;
}

DensityCheck validate_density(const Mat& rho) {
  DensityCheck c{};
  c.hermiticity_error = max_abs_diff(rho, dagger(rho));
  c.trace_error = std::abs(trace(rho) - cplx{1.0, 0.0});
  // Diagnose rather than throw: the spectrum is taken on the Hermitian part.
  const Mat herm = (rho + dagger(rho)) * cplx{0.5, 0.0};
  const auto eig = eigh(herm);
  c.min_eigenvalue = eig.values.front();
  return c;
}

}  // namespace qtel
