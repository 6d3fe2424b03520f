#include "qtel/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qtel {
namespace {

double off_diagonal_norm_sq(const Mat& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return s;
}

// One complex Jacobi rotation zeroing a(p,q): A <- G^dagger A G, V <- V G,
// where G is the phase-adjusted plane rotation in the (p,q) plane.
void rotate(Mat& a, Mat& v, std::size_t p, std::size_t q) {
  const cplx apq = a(p, q);
  const double mag = std::abs(apq);
  if (mag == 0.0) return;
  const cplx phase = apq / mag;  // a(p,q) = mag * phase

  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double tau = (aqq - app) / (2.0 * mag);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  const cplx gpp{c, 0.0};
  const cplx gpq{s, 0.0};
  const cplx gqp = -s * std::conj(phase);
  const cplx gqq = c * std::conj(phase);

  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i) {  // columns: A <- A G
    const cplx aip = a(i, p), aiq = a(i, q);
    a(i, p) = aip * gpp + aiq * gqp;
    a(i, q) = aip * gpq + aiq * gqq;
  }
  for (std::size_t j = 0; j < n; ++j) {  // rows: A <- G^dagger A
    const cplx apj = a(p, j), aqj = a(q, j);
    a(p, j) = std::conj(gpp) * apj + std::conj(gqp) * aqj;
    a(q, j) = std::conj(gpq) * apj + std::conj(gqq) * aqj;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const cplx vip = v(i, p), viq = v(i, q);
    v(i, p) = vip * gpp + viq * gqp;
    v(i, q) = vip * gpq + viq * gqq;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
}

}  // namespace

EigH eigh(const Mat& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("eigh: matrix not square");
  const double herm_err = max_abs_diff(h, dagger(h));
  const double scale = std::max(max_abs(h), 1.0);
  if (herm_err > 1e-10 * scale) throw std::invalid_argument("eigh: matrix not Hermitian");

  const std::size_t n = h.rows();
  Mat a = h;
  // Symmetrize exactly so rotations act on Hermitian data.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx m = 0.5 * (a(i, j) + std::conj(a(j, i)));
      a(i, j) = m;
      a(j, i) = std::conj(m);
    }
    a(i, i) = cplx{a(i, i).real(), 0.0};
  }

  Mat v = Mat::identity(n);
  const double target = 1e-30 * scale * scale * static_cast<double>(n * n);
  for (int sweep = 0; sweep < 60 && off_diagonal_norm_sq(a) > target; ++sweep)
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) rotate(a, v, p, q);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

  EigH out;
  out.values.resize(n);
  out.vectors = Mat(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }

  Mat recon(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cplx s = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        s += out.vectors(i, k) * out.values[k] * std::conj(out.vectors(j, k));
      recon(i, j) = s;
    }
  out.residual = max_abs_diff(h, recon);
  return out;
}

std::vector<double> hermitian_spectrum(const Mat& h) { return eigh(h).values; }

double trace_norm(const Mat& h) {
  const auto e = eigh(h);
  double s = 0.0;
  for (double w : e.values) s += std::abs(w);
  return s;
}

double nuclear_norm(const Mat& a) {
  const auto e = eigh(dagger(a) * a);
  double s = 0.0;
  for (double w : e.values) s += std::sqrt(std::max(w, 0.0));
  return s;
}

Svd svd(const Mat& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("svd: square matrices only");
  const std::size_t n = a.rows();
  const auto e = eigh(dagger(a) * a);

  Svd out;
  out.s.resize(n);
  out.u = Mat(n, n);
  out.v = Mat(n, n);
  // eigh returns ascending; singular values go descending
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = n - 1 - k;
    out.s[k] = std::sqrt(std::max(e.values[src], 0.0));
    for (std::size_t i = 0; i < n; ++i) out.v(i, k) = e.vectors(i, src);
  }

  // Left vectors come from re-orthonormalizing the columns of a*V; the
  // Gram-Schmidt norms recover the singular values to full precision, so
  // numerical zeros (sqrt of eigenvalue noise) snap to exact zero.
  const double smax = out.s.empty() ? 0.0 : out.s.front();
  const double cutoff = std::max(smax, 1.0) * 1e-12;
  std::vector<bool> filled(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    Vec vk(n);
    for (std::size_t i = 0; i < n; ++i) vk[i] = out.v(i, k);
    Vec uk = qtel::apply(a, vk);
    for (std::size_t j = 0; j < k; ++j) {
      if (!filled[j]) continue;
      Vec uj(n);
      for (std::size_t i = 0; i < n; ++i) uj[i] = out.u(i, j);
      const cplx proj = inner(uj, uk);
      for (std::size_t i = 0; i < n; ++i) uk[i] -= proj * uj[i];
    }
    const double nk = norm(uk);
    if (nk <= cutoff) {
      out.s[k] = 0.0;
      continue;
    }
    out.s[k] = nk;
    kernels::scal(n, cplx{1.0 / nk, 0.0}, uk.data());
    for (std::size_t i = 0; i < n; ++i) out.u(i, k) = uk[i];
    filled[k] = true;
  }
  // Null-space columns of U: complete to an orthonormal basis.
  for (std::size_t k = 0; k < n; ++k) {
    if (filled[k]) continue;
    Vec cand;
    for (std::size_t basis = 0; basis < n; ++basis) {
      cand.assign(n, cplx{0.0, 0.0});
      cand[basis] = 1.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (!filled[j]) continue;
        Vec uj(n);
        for (std::size_t i = 0; i < n; ++i) uj[i] = out.u(i, j);
        const cplx proj = inner(uj, cand);
        for (std::size_t i = 0; i < n; ++i) cand[i] -= proj * uj[i];
      }
      if (norm(cand) > 0.5) break;
    }
    normalize(cand);
    for (std::size_t i = 0; i < n; ++i) out.u(i, k) = cand[i];
    filled[k] = true;
  }
  return out;
}

Mat exp_ih(const Mat& h) {
  const auto e = eigh(h);
  const std::size_t n = h.rows();
  Mat w(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      w(i, k) = e.vectors(i, k) * std::exp(cplx{0.0, e.values[k]});
  return w * dagger(e.vectors);
}

}  // namespace qtel
