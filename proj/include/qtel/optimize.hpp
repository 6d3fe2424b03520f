#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace qtel {

struct NmOptions {
  std::size_t max_evals = 2000;
  double tol_diameter = 1e-9;
  double init_step = 0.1;
};

struct NmResult {
  std::vector<double> x;
  double fmin = 0.0;
  std::size_t evaluations = 0;
  double diameter = 0.0;
};

// Derivative-free simplex minimization (reflection 1, expansion 2,
// contraction 1/2, shrink 1/2).  Deterministic for a given start point.
NmResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                     const std::vector<double>& x0, const NmOptions& opt = {});

// Root of a continuous sign-changing function on [lo, hi] by bisection.
double bisect(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-12);

}  // namespace qtel
