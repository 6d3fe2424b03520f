#pragma once

#include <vector>

#include "qtel/tensor.hpp"

namespace qtel {

struct EigH {
  std::vector<double> values;  // ascending
  Mat vectors;                 // column k is the eigenvector of values[k]
  double residual;             // max-entry |A - V diag(w) V^dagger|
};

// Cyclic Jacobi eigendecomposition for complex Hermitian matrices (dim <= 64
// in this library).  Deterministic rotation order; the certified residual is
// computed on the original input.  Throws std::invalid_argument when the
// input is not Hermitian within 1e-10.
EigH eigh(const Mat& h);

std::vector<double> hermitian_spectrum(const Mat& h);

// sum of |eigenvalue|; requires Hermitian input
double trace_norm(const Mat& h);

// sum of singular values (any square matrix), via eigh(A^dagger A)
double nuclear_norm(const Mat& a);

struct Svd {
  Mat u;                  // columns: left singular vectors
  Mat v;                  // columns: right singular vectors
  std::vector<double> s;  // descending, >= 0
};

// A = U diag(s) V^dagger for square A; small dims only.
Svd svd(const Mat& a);

// exp(i H) for Hermitian H
Mat exp_ih(const Mat& h);

}  // namespace qtel
