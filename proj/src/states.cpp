#include "qtel/states.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qtel {
namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

void check_pauli_index(int mu) {
  if (mu < 0 || mu > 3) throw std::domain_error("pauli index out of {0,1,2,3}");
}

Mat projector(const Vec& psi) { return outer(psi, psi); }

}  // namespace

AnglePair::AnglePair(double theta_, double phi_) : theta(theta_), phi(phi_) {
  if (!(theta > -kHalfPi && theta < kHalfPi && phi > -kHalfPi && phi < kHalfPi))
    throw std::domain_error("angle pair outside open interval (-pi/2, pi/2)");
}

InputAngle::InputAngle(double eps) : epsilon(eps) {
  if (!(epsilon >= 0.0 && epsilon <= kHalfPi))
    throw std::domain_error("input angle outside [0, pi/2]");
}

Mat pauli(int mu) {
  check_pauli_index(mu);
  Mat m(2, 2);
  switch (mu) {
    case 0: m(0, 0) = 1.0; m(1, 1) = 1.0; break;
    case 1: m(0, 1) = 1.0; m(1, 0) = 1.0; break;
    case 2: m(0, 1) = 1.0; m(1, 0) = -1.0; break;   // i sigma^2, real
    default: m(0, 0) = 1.0; m(1, 1) = -1.0; break;
  }
  return m;
}

Mat pauli_sigma(int mu) {
  check_pauli_index(mu);
  if (mu != 2) return pauli(mu);
  Mat m(2, 2);
  m(0, 1) = cplx{0.0, -1.0};
  m(1, 0) = cplx{0.0, 1.0};
  return m;
}

Mat pauli_pair(int mu, int nu) { return tensor_product(pauli(mu), pauli(nu)); }

Vec bell(int mu) {
  check_pauli_index(mu);
  Vec psi0(4, cplx{0.0, 0.0});
  const double r = 1.0 / std::sqrt(2.0);
  psi0[0] = r;
  psi0[3] = r;
  return apply(tensor_product(pauli(mu), pauli(0)), psi0);
}

Mat rotation_S(double theta, double phi) {
  const double ct = std::cos(theta), st = std::sin(theta);
  const double cp = std::cos(phi), sp = std::sin(phi);
  Mat s(4, 4);
  s(0, 0) = ct;  s(0, 3) = -st;
  s(1, 1) = cp;  s(1, 2) = -sp;
  s(2, 1) = sp;  s(2, 2) = cp;
  s(3, 0) = st;  s(3, 3) = ct;
  return s;
}

Mat rotation_T(double theta, double phi) {
  const double ct = std::cos(theta), st = std::sin(theta);
  const double cp = std::cos(phi), sp = std::sin(phi);
  Mat t(4, 4);
  t(0, 0) = ct;  t(0, 3) = -st;
  t(1, 1) = sp;  t(1, 2) = cp;
  t(2, 1) = cp;  t(2, 2) = -sp;
  t(3, 0) = st;  t(3, 3) = ct;
  return t;
}

Vec upsilon00(const AnglePair& a) {
  const Mat s = rotation_S(a.theta, a.phi);
  const Mat t = rotation_T(0.0, 0.0);
  Vec psi(16, cplx{0.0, 0.0});
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t kl = 0; kl < 4; ++kl)
      for (std::size_t mn = 0; mn < 4; ++mn)
        psi[kl * 4 + mn] += 0.5 * s(kl, j) * t(mn, j);
  return psi;
}

Vec upsilon(const AnglePair& a, int mu, int nu) {
  check_pauli_index(mu);
  check_pauli_index(nu);
  Vec psi = upsilon00(a);
  if (mu == 0 && nu == 0) return psi;
  const Mat ud = dagger(pauli_pair(mu, nu));
  Vec out(16, cplx{0.0, 0.0});
  for (std::size_t kl = 0; kl < 4; ++kl)
    for (std::size_t b = 0; b < 4; ++b) {
      cplx acc = 0.0;
      for (std::size_t bp = 0; bp < 4; ++bp) acc += ud(b, bp) * psi[kl * 4 + bp];
      out[kl * 4 + b] = acc;
    }
  return out;
}

std::array<double, 8> upsilon00_amplitudes(const AnglePair& a) {
  const double ct = std::cos(a.theta), st = std::sin(a.theta);
  const double cp = std::cos(a.phi), sp = std::sin(a.phi);
  return {0.5 * ct, -0.5 * st, -0.5 * sp, 0.5 * cp, 0.5 * cp, 0.5 * sp, 0.5 * st, 0.5 * ct};
}

Mat coefficient_matrix(const Vec& xi) {
  if (xi.size() != 16) throw std::invalid_argument("coefficient_matrix: need dim 16");
  Mat c(4, 4);
  for (std::size_t kl = 0; kl < 4; ++kl)
    for (std::size_t mn = 0; mn < 4; ++mn) c(mn, kl) = xi[kl * 4 + mn];
  return c;
}

Vec pi_state(const AnglePair& a, int mu, int nu) {
  check_pauli_index(mu);
  check_pauli_index(nu);
  const Mat s = rotation_S(a.theta, a.phi);
  const Mat t = rotation_T(0.0, 0.0);
  Vec pi00(16, cplx{0.0, 0.0});
  for (std::size_t k = 0; k < 4; ++k)
    for (std::size_t ij = 0; ij < 4; ++ij)
      for (std::size_t kl = 0; kl < 4; ++kl)
        pi00[ij * 4 + kl] += 0.5 * t(ij, k) * s(kl, k);
  if (mu == 0 && nu == 0) return pi00;
  const Mat u = pauli_pair(mu, nu);
  Vec out(16, cplx{0.0, 0.0});
  for (std::size_t ij = 0; ij < 4; ++ij)
    for (std::size_t ijp = 0; ijp < 4; ++ijp)
      if (u(ij, ijp) != cplx{0.0, 0.0})
        for (std::size_t kl = 0; kl < 4; ++kl) out[ij * 4 + kl] += u(ij, ijp) * pi00[ijp * 4 + kl];
  return out;
}

Mat generalized_smolin(const AnglePair& a) {
  Mat rho(16, 16);
  for (int mu = 0; mu < 4; ++mu) {
    // (U^{00} tensor U^{mu mu dagger}) |Upsilon^{00}> = |Upsilon^{mu mu}>
    const Vec psi = upsilon(a, mu, mu);
    rho = rho + projector(psi) * cplx{0.25, 0.0};
  }
  return rho;
}

Vec named_state_vector(NamedState kind) {
  Vec psi(16, cplx{0.0, 0.0});
  switch (kind) {
    case NamedState::GHZ4:
      psi[0b0000] = 1.0 / std::sqrt(2.0);
      psi[0b1111] = 1.0 / std::sqrt(2.0);
      return psi;
    case NamedState::W0:
      psi[0b0001] = 0.5;
      psi[0b0010] = 0.5;
      psi[0b0100] = 0.5;
      psi[0b1000] = 0.5;
      return psi;
    case NamedState::W1: {
      const Vec w0 = named_state_vector(NamedState::W0);
      const Mat op = tensor_product(tensor_product(pauli(1), pauli(0)), pauli_pair(0, 0));
      return apply(op, w0);
    }
    default:
      throw std::invalid_argument("named_state_vector: no pure vector for this state");
  }
}

Mat named_state(NamedState kind) {
  if (kind == NamedState::Smolin) return generalized_smolin(AnglePair{0.0, 0.0});
  return projector(named_state_vector(kind));
}

Vec input_state(const InputAngle& eps) {
  Vec psi(4, cplx{0.0, 0.0});
  psi[0] = std::cos(eps.epsilon);
  psi[3] = std::sin(eps.epsilon);
  return psi;
}

Mat iso_mixture(const AnglePair& ab, double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw std::domain_error("mixture weight q outside [0, 1]");
  Mat rho = projector(upsilon00(ab)) * cplx{q, 0.0};
  const double w = (1.0 - q) / 16.0;
  for (std::size_t i = 0; i < 16; ++i) rho(i, i) += w;
  return rho;
}

Mat gs_mixture(const AnglePair& ab, const AnglePair& gd, double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw std::domain_error("mixture weight q outside [0, 1]");
  return projector(upsilon00(ab)) * cplx{q, 0.0} + generalized_smolin(gd) * cplx{1.0 - q, 0.0};
}

}  // namespace qtel
