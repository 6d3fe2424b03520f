#pragma once

#include <limits>

#include "qtel/channels.hpp"
#include "qtel/rng.hpp"
#include "qtel/states.hpp"
#include "qtel/tensor.hpp"

namespace qtel {

// Dimensionless thresholds: classical fidelities, the critical generalized
// singlet fraction, and the conjecture boundary.
struct MetricContext {
  static constexpr double classical_fidelity_1q = 2.0 / 3.0;
  static constexpr double classical_fidelity_2q = 3.0 / 5.0;
  static constexpr double g_crit = 0.5;
  static constexpr double conjecture_threshold = 0.25;
};

struct OptResult {
  double value = 0.0;
  AnglePair argmax_angles;   // meaningful for the angle searches
  Mat argmax_unitary;        // identity when the search has no unitary part
  bool certified = false;    // false for every heuristic (unitary-group) search
  long evaluations = 0;
  bool phi_flat = false;     // objective flat in phi at the argmax
  double fidelity = std::numeric_limits<double>::quiet_NaN();  // associated teleportation fidelity
};

struct FilterValues {
  double f1 = 0.0;
  double f2 = 0.0;
  double f3 = 0.0;
};

struct MeanWithError {
  double mean = 0.0;
  double std_error = 0.0;
};

struct TwoDesignCheck {
  cplx analytic;
  cplx empirical;
  double std_error = 0.0;  // combined standard error of the complex mean
};

// <Psi^0_Bell| chi |Psi^0_Bell>.
double singlet_fraction(const Mat& chi);

// Heuristic max over single-qubit u of <Psi^0|(u^0 x u) chi (u^0 x u^dag)|Psi^0>.
// Candidates: the four Paulis, then multistart ascent over u = exp(iH).
OptResult max_singlet_fraction(const Mat& chi, int restarts = 16, RandomStream* rs = nullptr);

// 1/3 + (1/6) sum_mu <Psi^0|(u^0 x u^{mu dag} r^mu) chi (u^0 x r^{mu dag} u^mu)|Psi^0>.
double fidelity_single(const Mat& chi, const RecoverySet2& r);

// 1/5 + (1/20) sum_{mu nu} <Ups^00|(U^00 x U^{mu nu dag} R) Xi (U^00 x R^dag U^{mu nu})|Ups^00>.
double fidelity_pair(const Mat& xi, const AnglePair& a, const RecoverySet4& r);

// Monte Carlo fidelity over Haar-random pure inputs; cross-checks the
// analytic formulas above.
MeanWithError mc_fidelity_single(const Mat& chi, const RecoverySet2& r, std::size_t samples,
                                 RandomStream& rs);
MeanWithError mc_fidelity_pair(const Mat& xi, const AnglePair& a, const RecoverySet4& r,
                               std::size_t samples, RandomStream& rs);

// Haar average of <Psi|A|Psi><Psi|B|Psi> over two-qubit pure states versus the
// two-design value (tr A tr B + tr[AB]) / 20.
TwoDesignCheck haar_two_design_check(const Mat& a, const Mat& b, std::size_t samples,
                                     RandomStream& rs);

// Overlap <Upsilon^00(theta, phi)| Xi |Upsilon^00(theta, phi)>, evaluated on
// the 8-entry support; angles outside the open square are clamped.
double gsf_objective(const Mat& xi, double theta, double phi);

// Max of gsf_objective over the open angle square: 61x61 grid on
// [-pi/2 + 0.01, pi/2 - 0.01]^2 plus simplex refinement from the best three
// cells.  Flat-phi objectives report the argmax with smallest |phi|.
OptResult generalized_singlet_fraction(const Mat& xi);

struct GsfMaxOptions {
  int restarts = 32;               // Haar multistarts beyond the deterministic candidates
  std::size_t polish_evals = 600;  // simplex budget per start
  double early_exit_above = std::numeric_limits<double>::infinity();
  std::size_t threads = 1;
};

// Heuristic joint max over angles and a unitary U on the B1B2 side.
// Deterministic candidates (identity, the 16 Pauli pairs, a rank-1 SVD seed)
// are polished first, then Haar restarts from derived substreams.
OptResult max_generalized_singlet_fraction(const Mat& xi, const GsfMaxOptions& opt,
                                           RandomStream& rs);

// trace_norm(partial_transpose(rho, cut)) - 1.
double negativity(const Mat& rho, const SubsystemMask& cut);

// SLOCC filter expectation values for a normalized four-qubit pure state.
FilterValues filter_expectations(const Vec& psi);

}  // namespace qtel
