#pragma once

#include <array>

#include "qtel/states.hpp"
#include "qtel/tensor.hpp"

namespace qtel {

// Bob's recovery unitaries for single-qubit teleportation, indexed by mu.
struct RecoverySet2 {
  std::array<Mat, 4> operators;
  static RecoverySet2 paulis();  // r^mu = u^mu
};

// Recovery unitaries for two-qubit teleportation, indexed by 4*mu + nu.
struct RecoverySet4 {
  std::array<Mat, 16> operators;
  static RecoverySet4 paulis();    // R^{mu nu} = U^{mu nu}
  static RecoverySet4 identity();  // R^{mu nu} = I_4
  Mat& at(int mu, int nu) { return operators[static_cast<std::size_t>(4 * mu + nu)]; }
  const Mat& at(int mu, int nu) const { return operators[static_cast<std::size_t>(4 * mu + nu)]; }
};

struct OutcomeRecord {
  int mu = 0;
  int nu = 0;
  double probability = 0.0;
  Mat conditional_state;  // dim 4, normalized; empty when !defined
  bool defined = false;   // false when probability < 1e-14
};

struct ProtocolResult {
  std::array<OutcomeRecord, 16> outcomes;
  Mat average;  // sum of probability * conditional_state over defined outcomes
};

// Standard protocol: sum_mu <Psi^mu|chi|Psi^mu> u^{mu dagger} rho u^mu.
Mat channel_T0(const Mat& chi, const Mat& rho_in);

// General recovery r: (1/4) sum_{a,b} <Psi^a|chi|Psi^b>
//   sum_mu (r^mu u^{a dagger} u^{mu dagger}) rho (u^mu u^b r^{mu dagger}).
Mat channel_T1(const Mat& chi, const Mat& rho_in, const RecoverySet2& r);

// Gram matrix M[4a+b][4c+d] = <Upsilon^{ab}(angles)|Xi|Upsilon^{cd}(angles)>.
Mat upsilon_gram(const Mat& xi, const AnglePair& a);

// Diagonal of the Gram matrix: the bichannel weights (sum to 1).
std::array<double, 16> upsilon_weights(const Mat& xi, const AnglePair& a);

// Two-qubit bichannel: sum_{mu nu} w_{mu nu} U^{mu nu dagger} rho U^{mu nu}.
Mat bichannel_E0(const Mat& xi, const Mat& rho_in, const AnglePair& a);

// General recovery: (1/16) sum over two pair indices of the Gram element times
// sum_{mu nu} (R U^{dagger} U^{dagger}) rho (U U R^{dagger}).
Mat bichannel_E1(const Mat& xi, const Mat& rho_in, const AnglePair& a, const RecoverySet4& r);

// Brute-force six-qubit simulation: eigendecompose Xi, project A1A2A3A4 onto
// each |Pi^{mu nu}(a)>, apply R^{mu nu}, record per-outcome probability and
// conditional state.  Eigenvalues below 1e-12 are dropped; outcomes with
// probability below 1e-14 are flagged undefined and excluded from the average.
ProtocolResult protocol_oracle(const Mat& xi, const Vec& psi_in, const AnglePair& a,
                               const RecoverySet4& r);

}  // namespace qtel
