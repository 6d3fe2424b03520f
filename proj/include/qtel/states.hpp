#pragma once

#include <array>

#include "qtel/tensor.hpp"

namespace qtel {

// Angle difference pair (theta12, phi12), each strictly inside (-pi/2, pi/2).
struct AnglePair {
  double theta = 0.0;
  double phi = 0.0;
  AnglePair() = default;
  AnglePair(double theta_, double phi_);  // throws std::domain_error out of range
};

// Input-state angle epsilon in [0, pi/2].
struct InputAngle {
  double epsilon = 0.0;
  InputAngle() = default;
  explicit InputAngle(double eps);  // throws std::domain_error out of range
};

// u^0 = I, u^1 = sigma^1, u^2 = i sigma^2 = [[0,1],[-1,0]], u^3 = sigma^3.
// All four are real in this convention; u^2 is the only non-Hermitian one.
Mat pauli(int mu);

// Standard Hermitian Pauli matrices; sigma^2 = [[0,-i],[i,0]].
Mat pauli_sigma(int mu);

// U^{mu nu} = u^mu tensor u^nu.
Mat pauli_pair(int mu, int nu);

// |Psi^mu_Bell> = (u^mu tensor u^0)|Psi^0_Bell>, |Psi^0_Bell> = (|00>+|11>)/sqrt(2).
Vec bell(int mu);

// 4x4 real orthogonal basis rotations.
Mat rotation_S(double theta, double phi);
Mat rotation_T(double theta, double phi);

// |Upsilon^{mu nu}(a)> on registers A3 A4 B1 B2 (dim 16, index 4*(A3A4) + (B1B2)).
// Built as (U^{00} tensor U^{mu nu dagger}) |Upsilon^{00}(a)> with
// |Upsilon^{00}> = (1/2) sum_J S|ij>_{A3A4} tensor T|ij>_{B1B2}, J = 2i + j,
// using theta1 = a.theta, phi1 = a.phi, theta2 = phi2 = 0.
Vec upsilon(const AnglePair& a, int mu, int nu);
Vec upsilon00(const AnglePair& a);

// The 8 basis indices where Upsilon^{00} has support, and its amplitudes there
// (all real): (cos t, -sin t, -sin p, cos p, cos p, sin p, sin t, cos t)/2.
inline constexpr std::array<std::size_t, 8> kUpsilonSupport{0, 3, 5, 6, 9, 10, 12, 15};
std::array<double, 8> upsilon00_amplitudes(const AnglePair& a);

// Coefficient matrix C of a pure 16-dim state on A3A4B1B2:
// xi = sum_{kl,mn} C(mn,kl) |kl>_{A3A4} |mn>_{B1B2}.  A B-side operator M
// maps C to M C; C(Upsilon^{00}) = T S^{-1} / 2.
Mat coefficient_matrix(const Vec& xi);

// Measurement basis |Pi^{mu nu}(a)> on A1 A2 A3 A4 (dim 16):
// (U^{mu nu} tensor U^{00}) |Pi^{00}>, |Pi^{00}> = (1/2) sum_K T|ij>_{A1A2} tensor S|ij>_{A3A4}.
Vec pi_state(const AnglePair& a, int mu, int nu);

// Equal mixture of (U^{00} tensor U^{mu mu dagger})|Upsilon^{00}(a)> over mu.
Mat generalized_smolin(const AnglePair& a);

enum class NamedState { GHZ4, W0, W1, Smolin };

// Pure four-qubit reference states (GHZ4, W0, W1 only).
Vec named_state_vector(NamedState kind);
Mat named_state(NamedState kind);

// cos(eps)|00> + sin(eps)|11>.
Vec input_state(const InputAngle& eps);

// q |Upsilon^{00}(ab)><.| + (1-q) I/16.
Mat iso_mixture(const AnglePair& ab, double q);

// q |Upsilon^{00}(ab)><.| + (1-q) Xi^GS(gd).
Mat gs_mixture(const AnglePair& ab, const AnglePair& gd, double q);

}  // namespace qtel
