#include "qtel/channels.hpp"

#include <stdexcept>

#include "qtel/eig.hpp"

namespace qtel {
namespace {

Mat sandwich(const Mat& left, const Mat& rho, const Mat& right) { return left * rho * right; }

}  // namespace

RecoverySet2 RecoverySet2::paulis() {
  RecoverySet2 r;
  for (int mu = 0; mu < 4; ++mu) r.operators[static_cast<std::size_t>(mu)] = pauli(mu);
  return r;
}

RecoverySet4 RecoverySet4::paulis() {
  RecoverySet4 r;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) r.at(mu, nu) = pauli_pair(mu, nu);
  return r;
}

RecoverySet4 RecoverySet4::identity() {
  RecoverySet4 r;
  for (auto& op : r.operators) op = Mat::identity(4);
  return r;
}

Mat channel_T0(const Mat& chi, const Mat& rho_in) {
  if (chi.rows() != 4 || rho_in.rows() != 2)
    throw std::invalid_argument("channel_T0: dimension mismatch");
  Mat out(2, 2);
  for (int mu = 0; mu < 4; ++mu) {
    const Vec psi = bell(mu);
    const double w = quad_form(psi, chi, psi).real();
    const Mat u = pauli(mu);
    out = out + sandwich(dagger(u), rho_in, u) * cplx{w, 0.0};
  }
  return out;
}

Mat channel_T1(const Mat& chi, const Mat& rho_in, const RecoverySet2& r) {
  if (chi.rows() != 4 || rho_in.rows() != 2)
    throw std::invalid_argument("channel_T1: dimension mismatch");
  std::array<Vec, 4> bell_basis;
  for (int mu = 0; mu < 4; ++mu) bell_basis[static_cast<std::size_t>(mu)] = bell(mu);

  // left[mu][a] = r^mu u^{a dagger} u^{mu dagger}
  std::array<std::array<Mat, 4>, 4> left;
  for (int mu = 0; mu < 4; ++mu)
    for (int a = 0; a < 4; ++a)
      left[static_cast<std::size_t>(mu)][static_cast<std::size_t>(a)] =
          r.operators[static_cast<std::size_t>(mu)] * dagger(pauli(a)) * dagger(pauli(mu));

  Mat out(2, 2);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      cplx m = 0.0;
      {
        const Vec tmp = apply(chi, bell_basis[static_cast<std::size_t>(b)]);
        m = inner(bell_basis[static_cast<std::size_t>(a)], tmp);
      }
      if (m == cplx{0.0, 0.0}) continue;
      for (int mu = 0; mu < 4; ++mu) {
        const Mat& la = left[static_cast<std::size_t>(mu)][static_cast<std::size_t>(a)];
        const Mat& lb = left[static_cast<std::size_t>(mu)][static_cast<std::size_t>(b)];
        out = out + sandwich(la, rho_in, dagger(lb)) * (0.25 * m);
      }
    }
  return out;
}

Mat upsilon_gram(const Mat& xi, const AnglePair& a) {
  if (xi.rows() != 16) throw std::invalid_argument("upsilon_gram: need dim 16");
  Mat basis(16, 16);  // column 4*mu+nu holds Upsilon^{mu nu}
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      const Vec v = upsilon(a, mu, nu);
      for (std::size_t i = 0; i < 16; ++i)
        basis(i, static_cast<std::size_t>(4 * mu + nu)) = v[i];
    }
  return dagger(basis) * xi * basis;
}

std::array<double, 16> upsilon_weights(const Mat& xi, const AnglePair& a) {
  const Mat gram = upsilon_gram(xi, a);
  std::array<double, 16> w{};
  for (std::size_t i = 0; i < 16; ++i) w[i] = gram(i, i).real();
  return w;
}

Mat bichannel_E0(const Mat& xi, const Mat& rho_in, const AnglePair& a) {
  if (rho_in.rows() != 4) throw std::invalid_argument("bichannel_E0: need dim 4 input");
  const auto w = upsilon_weights(xi, a);
  Mat out(4, 4);
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      const Mat u = pauli_pair(mu, nu);
      out = out + sandwich(dagger(u), rho_in, u) *
                      cplx{w[static_cast<std::size_t>(4 * mu + nu)], 0.0};
    }
  return out;
}

Mat bichannel_E1(const Mat& xi, const Mat& rho_in, const AnglePair& a, const RecoverySet4& r) {
  if (rho_in.rows() != 4) throw std::invalid_argument("bichannel_E1: need dim 4 input");
  const Mat gram = upsilon_gram(xi, a);

  // left[16*(4mu+nu) + (4a+b)] = R^{mu nu} U^{ab dagger} U^{mu nu dagger}
  std::array<Mat, 256> left;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      for (int al = 0; al < 4; ++al)
        for (int be = 0; be < 4; ++be)
          left[static_cast<std::size_t>(16 * (4 * mu + nu) + 4 * al + be)] =
              r.at(mu, nu) * dagger(pauli_pair(al, be)) * dagger(pauli_pair(mu, nu));

  Mat out(4, 4);
  for (std::size_t ab = 0; ab < 16; ++ab)
    for (std::size_t cd = 0; cd < 16; ++cd) {
      const cplx m = gram(ab, cd);
      if (m == cplx{0.0, 0.0}) continue;
      for (std::size_t mn = 0; mn < 16; ++mn) {
        const Mat& la = left[16 * mn + ab];
        const Mat& lc = left[16 * mn + cd];
        out = out + sandwich(la, rho_in, dagger(lc)) * (m / 16.0);
      }
    }
  return out;
}

ProtocolResult protocol_oracle(const Mat& xi, const Vec& psi_in, const AnglePair& a,
                               const RecoverySet4& r) {
  if (xi.rows() != 16 || psi_in.size() != 4)
    throw std::invalid_argument("protocol_oracle: dimension mismatch");

  const auto decomp = eigh(xi);
  std::vector<double> weights;
  std::vector<Vec> vectors;
  for (std::size_t k = 0; k < 16; ++k) {
    if (decomp.values[k] < 1e-12) continue;
    weights.push_back(decomp.values[k]);
    Vec v(16);
    for (std::size_t i = 0; i < 16; ++i) v[i] = decomp.vectors(i, k);
    vectors.push_back(std::move(v));
  }

  std::array<Vec, 16> proj;  // measurement basis
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      proj[static_cast<std::size_t>(4 * mu + nu)] = pi_state(a, mu, nu);

  ProtocolResult result;
  result.average = Mat(4, 4);
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      const std::size_t idx = static_cast<std::size_t>(4 * mu + nu);
      const Vec& pi = proj[idx];
      Mat accum(4, 4);  // sum_lambda p_lambda |amp><amp|, unnormalized
      double prob = 0.0;
      for (std::size_t lam = 0; lam < weights.size(); ++lam) {
        // full six-qubit amplitude: psi_in[a1] * xi_lam[a2*4 + b]
        Vec amp(4, cplx{0.0, 0.0});
        for (std::size_t a1 = 0; a1 < 4; ++a1)
          for (std::size_t a2 = 0; a2 < 4; ++a2) {
            const cplx c = std::conj(pi[a1 * 4 + a2]) * psi_in[a1];
            if (c == cplx{0.0, 0.0}) continue;
            for (std::size_t b = 0; b < 4; ++b) amp[b] += c * vectors[lam][a2 * 4 + b];
          }
        const double n2 = norm(amp) * norm(amp);
        prob += weights[lam] * n2;
        accum = accum + outer(amp, amp) * cplx{weights[lam], 0.0};
      }
      OutcomeRecord& rec = result.outcomes[idx];
      rec.mu = mu;
      rec.nu = nu;
      rec.probability = prob;
      if (prob >= 1e-14) {
        const Mat& rop = r.at(mu, nu);
        Mat cond = sandwich(rop, accum, dagger(rop)) * cplx{1.0 / prob, 0.0};
        rec.conditional_state = cond;
        rec.defined = true;
        result.average = result.average + cond * cplx{prob, 0.0};
      }
    }
  return result;
}

}  // namespace qtel
