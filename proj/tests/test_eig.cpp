#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qtel/eig.hpp"
#include "qtel/rng.hpp"
#include "qtel/sampling.hpp"
#include "qtel/tensor.hpp"

using namespace qtel;

namespace {

Mat hermitian_random(std::size_t n, RandomStream& rs) {
  Mat a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = rs.complex_normal();
  return (a + dagger(a)) * cplx{0.5, 0.0};
}

Mat diag_from(const std::vector<double>& w) {
  Mat d(w.size(), w.size());
  for (std::size_t i = 0; i < w.size(); ++i) d(i, i) = w[i];
  return d;
}

}  // namespace

TEST_CASE("eigh recovers a planted spectrum") {
  RandomStream rs(11, 0);
  std::vector<double> planted{-3.0, -0.5, 0.0, 0.25, 1.0, 1.0, 2.5, 10.0};
  const Mat u = haar_unitary(planted.size(), rs);
  const Mat h = u * diag_from(planted) * dagger(u);

  const EigH e = eigh(h);
  REQUIRE(e.values.size() == planted.size());
  for (std::size_t i = 0; i < planted.size(); ++i)
    CHECK(std::abs(e.values[i] - planted[i]) < 1e-11);
  CHECK(e.residual < 1e-10 * std::max(1.0, max_abs(h)));
}

TEST_CASE("eigh returns an orthonormal eigenbasis") {
  RandomStream rs(12, 0);
  for (std::size_t n : {2u, 4u, 8u, 16u}) {
    const Mat h = hermitian_random(n, rs);
    const EigH e = eigh(h);
    CHECK(max_abs_diff(dagger(e.vectors) * e.vectors, Mat::identity(n)) < 1e-12);
    CHECK(max_abs_diff(h * e.vectors, e.vectors * diag_from(e.values)) <
          1e-10 * std::max(1.0, max_abs(h)));
    CHECK(std::is_sorted(e.values.begin(), e.values.end()));
    CHECK(e.residual < 1e-10 * std::max(1.0, max_abs(h)));
  }
}

TEST_CASE("eigh handles degenerate and diagonal input") {
  const Mat id = Mat::identity(6);
  const EigH e = eigh(id);
  for (double v : e.values) CHECK(std::abs(v - 1.0) < 1e-14);
  CHECK(e.residual < 1e-14);

  Mat d(3, 3);
  d(0, 0) = 3.0;
  d(1, 1) = -1.0;
  d(2, 2) = 0.5;
  const EigH ed = eigh(d);
  CHECK(std::abs(ed.values[0] + 1.0) < 1e-14);
  CHECK(std::abs(ed.values[1] - 0.5) < 1e-14);
  CHECK(std::abs(ed.values[2] - 3.0) < 1e-14);
}

TEST_CASE("eigh rejects non-Hermitian and non-square input") {
  Mat a(2, 2);
  a(0, 1) = 1.0;  // strictly upper triangular
  CHECK_THROWS_AS(eigh(a), std::invalid_argument);
  CHECK_THROWS_AS(eigh(Mat(2, 3)), std::invalid_argument);
}

TEST_CASE("trace and nuclear norms on known matrices") {
  Mat d(3, 3);
  d(0, 0) = -3.0;
  d(1, 1) = 1.0;
  d(2, 2) = 2.0;
  CHECK(std::abs(trace_norm(d) - 6.0) < 1e-13);
  CHECK(std::abs(nuclear_norm(d) - 6.0) < 1e-12);

  RandomStream rs(13, 0);
  const Mat u = haar_unitary(4, rs);
  CHECK(std::abs(nuclear_norm(u) - 4.0) < 1e-11);

  // nuclear norm is unitarily invariant
  const Mat a = hermitian_random(4, rs);
  CHECK(std::abs(nuclear_norm(u * a) - nuclear_norm(a)) < 1e-10);
  CHECK(std::abs(nuclear_norm(a * u) - nuclear_norm(a)) < 1e-10);
}

TEST_CASE("svd reconstructs the input") {
  RandomStream rs(14, 0);
  for (std::size_t n : {2u, 4u, 6u}) {
    Mat a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) = rs.complex_normal();
    const Svd sv = svd(a);
    CHECK(std::is_sorted(sv.s.rbegin(), sv.s.rend()));
    for (double s : sv.s) CHECK(s >= 0.0);
    CHECK(max_abs_diff(dagger(sv.u) * sv.u, Mat::identity(n)) < 1e-11);
    CHECK(max_abs_diff(dagger(sv.v) * sv.v, Mat::identity(n)) < 1e-11);
    CHECK(max_abs_diff(sv.u * diag_from(sv.s) * dagger(sv.v), a) <
          1e-10 * std::max(1.0, max_abs(a)));
  }
}

TEST_CASE("svd of a rank-deficient matrix pads an orthonormal basis") {
  RandomStream rs(15, 0);
  Vec x(5), y(5);
  for (auto& v : x) v = rs.complex_normal();
  for (auto& v : y) v = rs.complex_normal();
  const Mat a = outer(x, y);  // rank 1
  const Svd sv = svd(a);
  CHECK(sv.s[0] > 0.1);
  for (std::size_t k = 1; k < 5; ++k) CHECK(sv.s[k] < 1e-10);
  CHECK(max_abs_diff(dagger(sv.u) * sv.u, Mat::identity(5)) < 1e-10);
  CHECK(max_abs_diff(sv.u * diag_from(sv.s) * dagger(sv.v), a) < 1e-10);
}

TEST_CASE("exp_ih is unitary and matches the diagonal case") {
  RandomStream rs(16, 0);
  const Mat h = hermitian_random(4, rs);
  const Mat u = exp_ih(h);
  CHECK(max_abs_diff(dagger(u) * u, Mat::identity(4)) < 1e-12);

  Mat d(2, 2);
  d(0, 0) = 0.5;
  d(1, 1) = -1.25;
  const Mat ud = exp_ih(d);
  CHECK(std::abs(ud(0, 0) - std::exp(cplx{0.0, 0.5})) < 1e-14);
  CHECK(std::abs(ud(1, 1) - std::exp(cplx{0.0, -1.25})) < 1e-14);
  CHECK(std::abs(ud(0, 1)) < 1e-14);

  CHECK(max_abs_diff(exp_ih(Mat(3, 3)), Mat::identity(3)) < 1e-14);

  // first-order expansion for small parameters
  const double t = 1e-6;
  const Mat small = exp_ih(h * cplx{t, 0.0});
  const Mat lin = Mat::identity(4) + h * cplx{0.0, t};
  CHECK(max_abs_diff(small, lin) < 1e-11);
}

TEST_CASE("hermitian_spectrum agrees with eigh values") {
  RandomStream rs(17, 0);
  const Mat h = hermitian_random(8, rs);
  const auto spec = hermitian_spectrum(h);
  const EigH e = eigh(h);
  REQUIRE(spec.size() == e.values.size());
  for (std::size_t i = 0; i < spec.size(); ++i) CHECK(std::abs(spec[i] - e.values[i]) < 1e-13);
}
