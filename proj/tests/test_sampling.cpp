#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstddef>

#include "qtel/eig.hpp"
#include "qtel/rng.hpp"
#include "qtel/sampling.hpp"
#include "qtel/tensor.hpp"

using namespace qtel;

TEST_CASE("haar_pure returns unit vectors of the right dimension") {
  RandomStream rs(21, 0);
  for (std::size_t dim : {2u, 4u, 16u}) {
    const Vec psi = haar_pure(dim, rs);
    REQUIRE(psi.size() == dim);
    CHECK(std::abs(norm(psi) - 1.0) < 1e-13);
  }
}

TEST_CASE("haar_unitary is unitary") {
  RandomStream rs(22, 0);
  for (std::size_t dim : {2u, 4u, 16u}) {
    const Mat u = haar_unitary(dim, rs);
    CHECK(max_abs_diff(dagger(u) * u, Mat::identity(dim)) < 1e-12);
    CHECK(max_abs_diff(u * dagger(u), Mat::identity(dim)) < 1e-12);
  }
}

TEST_CASE("haar_unitary first-column moment matches the Haar measure") {
  // |U(0,0)|^2 of a Haar dim-2 unitary is uniform on [0,1].
  RandomStream rs(23, 0);
  const int n = 4000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const Mat u = haar_unitary(2, rs);
    sum += std::norm(u(0, 0));
  }
  const double se = std::sqrt(1.0 / 12.0 / n);
  CHECK(std::abs(sum / n - 0.5) < 5.0 * se);
}

TEST_CASE("haar_pure overlap moment matches 1/dim") {
  RandomStream rs(24, 0);
  const int n = 4000;
  const std::size_t dim = 4;
  Vec e0(dim, cplx{0.0, 0.0});
  e0[0] = 1.0;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec psi = haar_pure(dim, rs);
    sum += std::norm(inner(e0, psi));
  }
  // |<e0|psi>|^2 ~ Beta(1, dim-1): mean 1/dim, var (dim-1)/(dim^2 (dim+1))
  const double mean = 1.0 / dim;
  const double se = std::sqrt((dim - 1.0) / (dim * dim * (dim + 1.0)) / n);
  CHECK(std::abs(sum / n - mean) < 5.0 * se);
}

TEST_CASE("ginibre_density produces valid states of the requested rank") {
  RandomStream rs(25, 0);
  for (std::size_t rank : {1u, 2u, 5u, 16u}) {
    const Mat rho = ginibre_density(16, rank, rs);
    CHECK(validate_density(rho).ok());
    const auto spec = hermitian_spectrum(rho);
    std::size_t positive = 0;
    for (double v : spec)
      if (v > 1e-10) ++positive;
    CHECK(positive == rank);
  }
  // rank 0 means full rank
  const Mat full = ginibre_density(8, 0, rs);
  const auto spec = hermitian_spectrum(full);
  for (double v : spec) CHECK(v > 1e-10);
}

TEST_CASE("sampling is reproducible from the stream state") {
  RandomStream a(26, 4);
  RandomStream b(26, 4);
  const Mat ua = haar_unitary(4, a);
  const Mat ub = haar_unitary(4, b);
  CHECK(max_abs_diff(ua, ub) == 0.0);
  const Vec pa = haar_pure(4, a);
  const Vec pb = haar_pure(4, b);
  for (std::size_t i = 0; i < pa.size(); ++i) CHECK(pa[i] == pb[i]);
}
