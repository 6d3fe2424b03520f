#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "qtel/kernels.hpp"

namespace qtel {

using cplx = std::complex<double>;
using Vec = std::vector<cplx>;

// Centralized tolerances: one tuning surface for the whole library.
namespace tol {
inline constexpr double structural = 1e-12;  // hermiticity, unit trace, normalization
inline constexpr double psd_slack = -1e-10;  // smallest admissible density eigenvalue
inline constexpr double oracle = 1e-10;      // route-vs-route equivalence checks
}  // namespace tol

// Dense row-major complex matrix.  Small (dim <= 64 throughout); value type,
// safe to copy and share across threads.
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), d_(rows * cols) {}

  static Mat identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  cplx& operator()(std::size_t i, std::size_t j) { return d_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return d_[i * cols_ + j]; }
  cplx* data() { return d_.data(); }
  const cplx* data() const { return d_.data(); }

  Mat& operator+=(const Mat& o);
  Mat& operator-=(const Mat& o);
  Mat& operator*=(cplx a);

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<cplx> d_;
};

Mat operator+(Mat a, const Mat& b);
Mat operator-(Mat a, const Mat& b);
Mat operator*(Mat a, cplx s);
Mat operator*(cplx s, Mat a);
Mat mul(const Mat& a, const Mat& b);
Mat operator*(const Mat& a, const Mat& b);

Mat dagger(const Mat& a);
Mat transpose(const Mat& a);
Mat conjugate(const Mat& a);
cplx trace(const Mat& a);
double max_abs(const Mat& a);
double max_abs_diff(const Mat& a, const Mat& b);

Vec apply(const Mat& a, const Vec& x);
cplx inner(const Vec& x, const Vec& y);                    // <x|y>
cplx quad_form(const Vec& x, const Mat& m, const Vec& y);  // <x|M|y>
double norm(const Vec& x);
void normalize(Vec& x);
Mat outer(const Vec& x, const Vec& y);  // |x><y|

// Left factor is the more significant register.
Mat tensor_product(const Mat& a, const Mat& b);
Vec tensor_product(const Vec& a, const Vec& b);

// Boolean-per-qubit cut selector; qubit 0 is the most significant bit of the
// basis index (leftmost ket symbol).
struct SubsystemMask {
  std::vector<bool> selected;

  static SubsystemMask of(int n_qubits, std::initializer_list<int> qubits);
  int count() const;
  int size() const { return static_cast<int>(selected.size()); }
};

// Throws std::invalid_argument("degenerate partial trace") when the mask
// keeps all or none of the qubits.
Mat partial_trace(const Mat& rho, const SubsystemMask& keep);
Mat partial_transpose(const Mat& rho, const SubsystemMask& transposed);

int qubit_count(const Mat& rho);  // throws unless square with power-of-2 dim

struct DensityCheck {
  double hermiticity_error;
  double trace_error;
  double min_eigenvalue;
  bool ok() const {
    return hermiticity_error <= tol::structural && trace_error <= tol::structural &&
           min_eigenvalue >= tol::psd_slack;
  }
};

// Shared validator used by tests and debug assertions.
DensityCheck validate_density(const Mat& rho);

}  // namespace qtel
