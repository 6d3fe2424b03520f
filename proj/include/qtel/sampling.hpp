#pragma once

#include "qtel/rng.hpp"
#include "qtel/tensor.hpp"

namespace qtel {

// Haar-random pure state: normalized vector of iid complex normals.
Vec haar_pure(std::size_t dim, RandomStream& rs);

// Haar-random unitary: QR of a Ginibre matrix with the R diagonal made
// real positive, which fixes the distribution to the Haar measure.
Mat haar_unitary(std::size_t dim, RandomStream& rs);

// Random density matrix of the given rank: G G^dagger / tr(G G^dagger)
// with G a dim x rank Ginibre matrix.  rank == 0 means full rank.
Mat ginibre_density(std::size_t dim, std::size_t rank, RandomStream& rs);

}  // namespace qtel
