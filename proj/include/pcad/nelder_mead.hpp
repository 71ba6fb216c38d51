#pragma once

#include <functional>
#include <vector>

namespace pcad {

struct NelderMeadResult {
  std::vector<double> x;
  double fx = 0.0;
  long evaluations = 0;
  bool converged = false;
};

// Box-constrained Nelder-Mead: every trial vertex is clamped into
// [lower, upper] before evaluation. Deterministic for a given start point.
// Stops when the simplex function spread falls below f_tol (converged) or
// after max_evals objective evaluations.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& start,
                             const std::vector<double>& lower,
                             const std::vector<double>& upper, long max_evals = 800,
                             double f_tol = 1e-12);

}  // namespace pcad
