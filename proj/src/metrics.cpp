#include "qtel/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "qtel/eig.hpp"
#include "qtel/optimize.hpp"
#include "qtel/parallel.hpp"
#include "qtel/sampling.hpp"

namespace qtel {
namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kAngleMargin = 1e-9;   // keeps evaluations inside the open square
constexpr double kGridMargin = 0.01;
constexpr int kGridN = 61;

double clamp_angle(double x) {
  return std::clamp(x, -kHalfPi + kAngleMargin, kHalfPi - kAngleMargin);
}

// 8x8 real quadratic form of the overlap objective on the Upsilon support.
struct OverlapForm {
  double q[8][8];

  explicit OverlapForm(const Mat& xi) {
    if (xi.rows() != 16) throw std::invalid_argument("overlap objective: need dim 16");
    for (int j = 0; j < 8; ++j)
      for (int k = 0; k < 8; ++k) q[j][k] = xi(kUpsilonSupport[j], kUpsilonSupport[k]).real();
  }

  double eval(double theta, double phi) const {
    const AnglePair a{clamp_angle(theta), clamp_angle(phi)};
    const auto amp = upsilon00_amplitudes(a);
    double v = 0.0;
    for (int j = 0; j < 8; ++j) {
      double row = 0.0;
      for (int k = 0; k < 8; ++k) row += q[j][k] * amp[k];
      v += amp[j] * row;
    }
    return v;
  }
};

Vec bell_vec(int mu) { return bell(mu); }

// Applies (I_4 tensor u^dagger) to a 16-dim vector on A3A4B1B2.
Vec b_side_apply_dagger(const Mat& u, const Vec& psi) {
  Vec out(16, cplx{0.0, 0.0});
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t bp = 0; bp < 4; ++bp) {
      const cplx amp = psi[a * 4 + bp];
      if (amp == cplx{0.0, 0.0}) continue;
      for (std::size_t b = 0; b < 4; ++b) out[a * 4 + b] += std::conj(u(bp, b)) * amp;
    }
  return out;
}

Mat hermitian_from_params(const double* h, std::size_t dim) {
  Mat m(dim, dim);
  std::size_t k = dim;
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = h[i];
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i + 1; j < dim; ++j) {
      m(i, j) = cplx{h[k], h[k + 1]};
      m(j, i) = cplx{h[k], -h[k + 1]};
      k += 2;
    }
  return m;
}

struct TrackedMax {
  double value = -1.0;
  double theta = 0.0;
  double phi = 0.0;
  Mat unitary;
  long evaluations = 0;
};

void merge_max(TrackedMax& into, const TrackedMax& other) {
  into.evaluations += other.evaluations;
  if (other.value > into.value) {
    into.value = other.value;
    into.theta = other.theta;
    into.phi = other.phi;
    into.unitary = other.unitary;
  }
}

// Joint (angles, unitary) objective for the maximal generalized singlet
// fraction: U = exp(iH) * base, value = <Ups(th,ph)|(I x U) Xi (I x U^dag)|Ups>.
TrackedMax polish_joint(const Mat& xi, const Mat& base, double theta0, double phi0,
                        std::size_t budget) {
  TrackedMax best;
  auto objective = [&](const std::vector<double>& x) {
    const double th = clamp_angle(x[0]);
    const double ph = clamp_angle(x[1]);
    const Mat u = exp_ih(hermitian_from_params(x.data() + 2, 4)) * base;
    Vec ups(16, cplx{0.0, 0.0});
    {
      const auto amp = upsilon00_amplitudes(AnglePair{th, ph});
      for (int j = 0; j < 8; ++j) ups[kUpsilonSupport[j]] = amp[j];
    }
    const Vec v = b_side_apply_dagger(u, ups);
    const double value = quad_form(v, xi, v).real();
    if (value > best.value) {
      best.value = value;
      best.theta = th;
      best.phi = ph;
      best.unitary = u;
    }
    return -value;
  };
  std::vector<double> x0(18, 0.0);
  x0[0] = theta0;
  x0[1] = phi0;
  NmOptions opt;
  opt.max_evals = budget;
  opt.tol_diameter = 1e-9;
  opt.init_step = 0.15;
  const NmResult nm = nelder_mead(objective, x0, opt);
  best.evaluations = static_cast<long>(nm.evaluations);
  return best;
}

}  // namespace

double singlet_fraction(const Mat& chi) {
  if (chi.rows() != 4) throw std::invalid_argument("singlet_fraction: need dim 4");
  const Vec psi0 = bell_vec(0);
  return quad_form(psi0, chi, psi0).real();
}

OptResult max_singlet_fraction(const Mat& chi, int restarts, RandomStream* rs) {
  if (chi.rows() != 4) throw std::invalid_argument("max_singlet_fraction: need dim 4");
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  long evals = 0;
  double best_value = -1.0;
  Mat best_u;

  auto eval_u = [&](const Mat& u) {
    // w = (I x u^dag)|Psi^0>: w[2i+j] = conj(u(i,j))/sqrt(2)
    Vec w(4);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) w[2 * i + j] = std::conj(u(i, j)) * inv_sqrt2;
    ++evals;
    return quad_form(w, chi, w).real();
  };
  auto consider = [&](const Mat& u) {
    const double v = eval_u(u);
    if (v > best_value) {
      best_value = v;
      best_u = u;
    }
  };

  for (int mu = 0; mu < 4; ++mu) consider(pauli(mu));
  const Mat pauli_best = best_u;

  auto polish = [&](const Mat& base, const std::vector<double>& h0) {
    Mat local_u;
    double local_best = -1.0;
    auto objective = [&](const std::vector<double>& x) {
      const Mat u = exp_ih(hermitian_from_params(x.data(), 2)) * base;
      const double v = eval_u(u);
      if (v > local_best) {
        local_best = v;
        local_u = u;
      }
      return -v;
    };
    NmOptions opt;
    opt.max_evals = 250;
    opt.tol_diameter = 1e-10;
    opt.init_step = 0.3;
    nelder_mead(objective, h0, opt);
    if (local_best > best_value) {
      best_value = local_best;
      best_u = local_u;
    }
  };

  polish(pauli_best, std::vector<double>(4, 0.0));
  RandomStream fallback{0x9E3779B97F4A7C15ull, 0};
  RandomStream& stream = rs ? *rs : fallback;
  for (int r = 0; r < restarts; ++r) {
    RandomStream sub = stream.substream(static_cast<std::uint64_t>(r));
    std::vector<double> h0(4);
    for (auto& h : h0) h = 1.2 * sub.gaussian();
    polish(Mat::identity(2), h0);
  }

  OptResult out;
  out.value = best_value;
  out.argmax_unitary = best_u;
  out.certified = false;
  out.evaluations = evals;
  out.fidelity = 1.0 / 3.0 + 2.0 * best_value / 3.0;
  return out;
}

double fidelity_single(const Mat& chi, const RecoverySet2& r) {
  if (chi.rows() != 4) throw std::invalid_argument("fidelity_single: need dim 4");
  const Vec psi0 = bell_vec(0);
  double sum = 0.0;
  for (int mu = 0; mu < 4; ++mu) {
    const Mat b = dagger(pauli(mu)) * r.operators[static_cast<std::size_t>(mu)];
    // term = <Psi^0|(I x b) chi (I x b^dag)|Psi^0>
    Vec w(4, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t jp = 0; jp < 2; ++jp)
          w[2 * i + j] += std::conj(b(jp, j)) * psi0[2 * i + jp];
    sum += quad_form(w, chi, w).real();
  }
  return 1.0 / 3.0 + sum / 6.0;
}

double fidelity_pair(const Mat& xi, const AnglePair& a, const RecoverySet4& r) {
  if (xi.rows() != 16) throw std::invalid_argument("fidelity_pair: need dim 16");
  const Vec ups = upsilon00(a);
  double sum = 0.0;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      const Mat b = dagger(pauli_pair(mu, nu)) * r.at(mu, nu);
      const Vec w = b_side_apply_dagger(b, ups);
      sum += quad_form(w, xi, w).real();
    }
  return 1.0 / 5.0 + sum / 20.0;
}

MeanWithError mc_fidelity_single(const Mat& chi, const RecoverySet2& r, std::size_t samples,
                                 RandomStream& rs) {
  // m[a][b] = <Psi^a|chi|Psi^b>, L[mu][a] = r^mu u^{a dag} u^{mu dag}
  cplx m[4][4];
  Mat left[4][4];
  {
    Vec b[4];
    for (int a = 0; a < 4; ++a) b[a] = bell_vec(a);
    for (int a = 0; a < 4; ++a)
      for (int c = 0; c < 4; ++c) m[a][c] = quad_form(b[a], chi, b[c]);
    for (int mu = 0; mu < 4; ++mu)
      for (int a = 0; a < 4; ++a)
        left[mu][a] = r.operators[static_cast<std::size_t>(mu)] * dagger(pauli(a)) *
                      dagger(pauli(mu));
  }
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const Vec psi = haar_pure(2, rs);
    cplx q[4][4];
    for (int mu = 0; mu < 4; ++mu)
      for (int a = 0; a < 4; ++a) q[mu][a] = quad_form(psi, left[mu][a], psi);
    cplx f = 0.0;
    for (int a = 0; a < 4; ++a)
      for (int c = 0; c < 4; ++c) {
        cplx inner_sum = 0.0;
        for (int mu = 0; mu < 4; ++mu) inner_sum += q[mu][a] * std::conj(q[mu][c]);
        f += m[a][c] * inner_sum;
      }
    const double val = 0.25 * f.real();
    sum += val;
    sumsq += val * val;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, sumsq / n - mean * mean);
  return {mean, std::sqrt(var / std::max(1.0, n - 1.0))};
}

MeanWithError mc_fidelity_pair(const Mat& xi, const AnglePair& a, const RecoverySet4& r,
                               std::size_t samples, RandomStream& rs) {
  const Mat gram = upsilon_gram(xi, a);
  std::vector<Mat> left(256);
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      for (int al = 0; al < 4; ++al)
        for (int be = 0; be < 4; ++be)
          left[static_cast<std::size_t>(16 * (4 * mu + nu) + 4 * al + be)] =
              r.at(mu, nu) * dagger(pauli_pair(al, be)) * dagger(pauli_pair(mu, nu));

  double sum = 0.0, sumsq = 0.0;
  Vec q(16), tmp(16);
  for (std::size_t s = 0; s < samples; ++s) {
    const Vec psi = haar_pure(4, rs);
    cplx f = 0.0;
    for (std::size_t mn = 0; mn < 16; ++mn) {
      for (std::size_t ab = 0; ab < 16; ++ab) q[ab] = quad_form(psi, left[16 * mn + ab], psi);
      // sum_{ab,cd} gram(ab,cd) q[ab] conj(q[cd])
      for (std::size_t ab = 0; ab < 16; ++ab) {
        cplx acc = 0.0;
        for (std::size_t cd = 0; cd < 16; ++cd) acc += gram(ab, cd) * std::conj(q[cd]);
        f += q[ab] * acc;
      }
    }
    const double val = f.real() / 16.0;
    sum += val;
    sumsq += val * val;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, sumsq / n - mean * mean);
  return {mean, std::sqrt(var / std::max(1.0, n - 1.0))};
}

TwoDesignCheck haar_two_design_check(const Mat& a, const Mat& b, std::size_t samples,
                                     RandomStream& rs) {
  if (a.rows() != 4 || b.rows() != 4)
    throw std::invalid_argument("haar_two_design_check: need dim 4 operators");
  TwoDesignCheck out;
  out.analytic = (trace(a) * trace(b) + trace(a * b)) / 20.0;
  cplx sum = 0.0;
  double sumsq_re = 0.0, sumsq_im = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const Vec psi = haar_pure(4, rs);
    const cplx val = quad_form(psi, a, psi) * quad_form(psi, b, psi);
    sum += val;
    sumsq_re += val.real() * val.real();
    sumsq_im += val.imag() * val.imag();
  }
  const double n = static_cast<double>(samples);
  out.empirical = sum / n;
  const double var_re = std::max(0.0, sumsq_re / n - out.empirical.real() * out.empirical.real());
  const double var_im = std::max(0.0, sumsq_im / n - out.empirical.imag() * out.empirical.imag());
  out.std_error = std::sqrt((var_re + var_im) / std::max(1.0, n - 1.0));
  return out;
}

double gsf_objective(const Mat& xi, double theta, double phi) {
  return OverlapForm(xi).eval(theta, phi);
}

OptResult generalized_singlet_fraction(const Mat& xi) {
  const OverlapForm form(xi);
  const double lo = -kHalfPi + kGridMargin;
  const double hi = kHalfPi - kGridMargin;
  const double step = (hi - lo) / (kGridN - 1);

  long evals = 0;
  struct Cell {
    double value, theta, phi;
  };
  std::vector<Cell> cells;
  cells.reserve(kGridN * kGridN);
  for (int i = 0; i < kGridN; ++i)
    for (int j = 0; j < kGridN; ++j) {
      const double th = lo + i * step;
      const double ph = lo + j * step;
      cells.push_back({form.eval(th, ph), th, ph});
      ++evals;
    }
  std::stable_sort(cells.begin(), cells.end(),
                   [](const Cell& a, const Cell& b) { return a.value > b.value; });

  double best_value = cells.front().value;
  double best_th = cells.front().theta;
  double best_ph = cells.front().phi;
  for (int start = 0; start < 3; ++start) {
    auto objective = [&](const std::vector<double>& x) {
      ++evals;
      return -form.eval(x[0], x[1]);
    };
    NmOptions opt;
    opt.max_evals = 400;
    opt.tol_diameter = 1e-9;
    opt.init_step = step;
    const NmResult nm = nelder_mead(
        objective, {cells[static_cast<std::size_t>(start)].theta,
                    cells[static_cast<std::size_t>(start)].phi}, opt);
    const double th = clamp_angle(nm.x[0]);
    const double ph = clamp_angle(nm.x[1]);
    const double v = form.eval(th, ph);
    if (v > best_value) {
      best_value = v;
      best_th = th;
      best_ph = ph;
    }
  }

  // Degenerate direction: flat in phi means any phi attains the max; report
  // the representative with smallest |phi|.
  bool flat = true;
  for (int j = 0; j < 9 && flat; ++j) {
    const double ph = lo + j * (hi - lo) / 8.0;
    ++evals;
    if (std::abs(form.eval(best_th, ph) - best_value) > 1e-10) flat = false;
  }
  if (flat) {
    best_ph = 0.0;
    best_value = form.eval(best_th, best_ph);
  }

  OptResult out;
  out.value = best_value;
  out.argmax_angles = AnglePair{clamp_angle(best_th), clamp_angle(best_ph)};
  out.argmax_unitary = Mat::identity(4);
  out.certified = true;  // trig-polynomial objective; grid brackets every basin
  out.evaluations = evals;
  out.phi_flat = flat;
  out.fidelity = 1.0 / 5.0 + 4.0 * best_value / 5.0;
  return out;
}

OptResult max_generalized_singlet_fraction(const Mat& xi, const GsfMaxOptions& opt,
                                           RandomStream& rs) {
  const OptResult angle_only = generalized_singlet_fraction(xi);
  const double th0 = angle_only.argmax_angles.theta;
  const double ph0 = angle_only.argmax_angles.phi;

  TrackedMax best;
  best.evaluations = angle_only.evaluations;

  Vec ups0(16, cplx{0.0, 0.0});
  {
    const auto amp = upsilon00_amplitudes(AnglePair{th0, ph0});
    for (int j = 0; j < 8; ++j) ups0[kUpsilonSupport[j]] = amp[j];
  }
  auto eval_candidate = [&](const Mat& u) {
    const Vec v = b_side_apply_dagger(u, ups0);
    const double value = quad_form(v, xi, v).real();
    ++best.evaluations;
    if (value > best.value) {
      best.value = value;
      best.theta = th0;
      best.phi = ph0;
      best.unitary = u;
    }
    return value;
  };

  eval_candidate(Mat::identity(4));
  Mat best_pauli = Mat::identity(4);
  double best_pauli_value = -1.0;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      const Mat u = pauli_pair(mu, nu);
      const double value = eval_candidate(u);
      if (value > best_pauli_value) {
        best_pauli_value = value;
        best_pauli = u;
      }
    }

  // Rank-1 seed: optimal unitary for the leading eigenvector at fixed angles.
  Mat svd_seed = Mat::identity(4);
  {
    const auto decomp = eigh(xi);
    Vec top(16);
    for (std::size_t i = 0; i < 16; ++i) top[i] = decomp.vectors(i, 15);
    const Mat c = coefficient_matrix(top);
    const Mat s_rot = rotation_S(th0, ph0);
    const Mat t0 = rotation_T(0.0, 0.0);
    const Svd sv = svd(c * s_rot * transpose(t0));
    // <Ups|(I x u)|top> = tr[u C S T0^T]/2 is maximal at u = V W^dagger.
    svd_seed = sv.v * dagger(sv.u);
    eval_candidate(svd_seed);
  }

  merge_max(best, polish_joint(xi, best_pauli, th0, ph0, opt.polish_evals));
  merge_max(best, polish_joint(xi, svd_seed, th0, ph0, opt.polish_evals));

  if (best.value <= opt.early_exit_above && opt.restarts > 0) {
    std::vector<TrackedMax> slots(static_cast<std::size_t>(opt.restarts));
    parallel_for(static_cast<std::size_t>(opt.restarts), opt.threads, [&](std::size_t r) {
      RandomStream sub = rs.substream(r);
      const Mat base = haar_unitary(4, sub);
      slots[r] = polish_joint(xi, base, th0, ph0, opt.polish_evals);
    });
    for (const auto& s : slots) merge_max(best, s);
  }

  OptResult out;
  out.value = best.value;
  out.argmax_angles = AnglePair{clamp_angle(best.theta), clamp_angle(best.phi)};
  out.argmax_unitary = best.unitary;
  out.certified = false;
  out.evaluations = best.evaluations;
  out.phi_flat = angle_only.phi_flat;
  out.fidelity = 1.0 / 5.0 + 4.0 * best.value / 5.0;
  return out;
}

double negativity(const Mat& rho, const SubsystemMask& cut) {
  return trace_norm(partial_transpose(rho, cut)) - 1.0;
}

FilterValues filter_expectations(const Vec& psi) {
  if (psi.size() != 16) throw std::invalid_argument("filter_expectations: need dim 16");
  Mat sig[4];
  for (int mu = 0; mu < 4; ++mu) sig[mu] = pauli_sigma(mu);

  // Free-index slot pairs for the five E-tensors; sigma^2 fills the rest.
  constexpr std::pair<int, int> kSlots[5] = {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}};
  double e[5][4][4];
  for (int x = 0; x < 5; ++x)
    for (int p = 0; p < 4; ++p)
      for (int q = 0; q < 4; ++q) {
        const Mat* factor[4] = {&sig[2], &sig[2], &sig[2], &sig[2]};
        factor[kSlots[x].first] = &sig[p];
        factor[kSlots[x].second] = &sig[q];
        const Mat op = tensor_product(tensor_product(*factor[0], *factor[1]),
                                      tensor_product(*factor[2], *factor[3]));
        e[x][p][q] = quad_form(psi, op, psi).real();
      }

  constexpr double g[4] = {-1.0, 1.0, 0.0, 1.0};
  double raw1 = 0.0;
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q)
      for (int r = 0; r < 4; ++r)
        raw1 += g[p] * g[q] * e[0][p][q] * g[r] * e[1][p][r] * e[2][q][r];

  double raw2 = 0.0;
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q)
      for (int r = 0; r < 4; ++r)
        for (int s = 0; s < 4; ++s)
          raw2 += g[p] * g[q] * e[0][p][q] * g[r] * e[1][p][r] * g[s] * e[3][q][s] * e[4][r][s];

  auto g_norm = [&](int x) {
    double n = 0.0;
    for (int p = 0; p < 4; ++p)
      for (int q = 0; q < 4; ++q) n += g[p] * g[q] * e[x][p][q] * e[x][p][q];
    return n;
  };

  FilterValues out;
  out.f1 = -raw1;  // sign fixed by the GHZ anchor value +1
  out.f2 = raw2;
  out.f3 = 0.5 * g_norm(0) * g_norm(1) * g_norm(2);
  return out;
}

}  // namespace qtel
