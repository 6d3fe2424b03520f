#include "qtel/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace qtel {
namespace {

Mat ginibre(std::size_t rows, std::size_t cols, RandomStream& rs) {
  Mat g(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) g(i, j) = rs.complex_normal();
  return g;
}

}  // namespace

Vec haar_pure(std::size_t dim, RandomStream& rs) {
  Vec psi(dim);
  for (std::size_t i = 0; i < dim; ++i) psi[i] = rs.complex_normal();
  normalize(psi);
  return psi;
}

Mat haar_unitary(std::size_t dim, RandomStream& rs) {
  Mat g = ginibre(dim, dim, rs);
  // Modified Gram-Schmidt on columns; divide out the R diagonal phase so
  // R has a real positive diagonal.
  Mat q(dim, dim);
  for (std::size_t k = 0; k < dim; ++k) {
    Vec col(dim);
    for (std::size_t i = 0; i < dim; ++i) col[i] = g(i, k);
    for (std::size_t j = 0; j < k; ++j) {
      Vec qj(dim);
      for (std::size_t i = 0; i < dim; ++i) qj[i] = q(i, j);
      const cplx r = inner(qj, col);
      for (std::size_t i = 0; i < dim; ++i) col[i] -= r * qj[i];
    }
    const double nrm = norm(col);
    if (nrm < 1e-12) throw std::runtime_error("haar_unitary: rank-deficient draw");
    for (std::size_t i = 0; i < dim; ++i) q(i, k) = col[i] / nrm;
  }
  return q;
}

Mat ginibre_density(std::size_t dim, std::size_t rank, RandomStream& rs) {
  if (rank == 0 || rank > dim) rank = dim;
  const Mat g = ginibre(dim, rank, rs);
  Mat rho = g * dagger(g);
  const double tr = trace(rho).real();
  rho = rho * cplx{1.0 / tr, 0.0};
  return rho;
}

}  // namespace qtel
