#ifndef TMP_OPTIMIZER_HPP
#define TMP_OPTIMIZER_HPP

// Derivative-free search for a close-to-linear TMP design.
//
// Target: an ideal linear ramp F_ideal(dy) = (target_F_max/target_dy_max)*dy.
// Objective: the summed absolute force deviation over a uniform sample grid,
//   e = sum_i |F_TMP(dy_i) - F_ideal(dy_i)|,
// plus a quadratic penalty tying the end point to the target force,
//   objective = e + penalty_weight * (F_TMP(dy_max) - target_F_max)^2.
// The integer cell count N is enumerated exhaustively; the five continuous
// variables (alpha, c, d, l, m) are optimized inside box bounds by
// Nelder-Mead ("simplex") or Powell's direction-set method, from five
// deterministic start points (bounds-box center + four corner-biased).
// Everything is deterministic: no randomness, and multi-start/multi-N
// results merge by (objective, N, start index) so --jobs never changes the
// answer.

#include <functional>
#include <string>
#include <vector>

#include "tmp/stiffness.hpp"

namespace tmp {

struct VarBounds {
  double lo = 0.0;
  double hi = 0.0;
};

struct LinearFitSpec {
  double target_F_max_N = 0.0;   // end-point force of the ideal ramp
  double target_dy_max_m = 0.110;
  int n_samples = 2000;
  int N_lo = 6, N_hi = 10;       // inclusive integer range
  VarBounds alpha_rad{deg2rad(30.0), deg2rad(70.0)};
  VarBounds c_m{0.020, 0.040};
  VarBounds d_m{0.020, 0.040};
  VarBounds l_m{0.020, 0.040};
  VarBounds m_m{0.020, 0.040};
  double kM_hat_N_per_rad = 0.0946;  // stiff main folds
  double kS_hat_N_per_rad = 0.0186;  // soft sub folds
  double thetaM0_rad = deg2rad(60.0);
  double theta1_rad = deg2rad(38.0);
  double theta2_rad = deg2rad(70.0);
  double penalty_weight_per_N = 1e3;  // quadratic end-point penalty weight

  void validate() const;  // throws ConfigError
};

// The ideal ramp sampled at n_samples uniform points.
ForceCurve ideal_linear_target(const LinearFitSpec& spec);

struct FitEval {
  double error_N = 0.0;      // pure summed deviation (no penalty)
  double residual_N = 0.0;   // |F(dy_max) - target_F_max|
  double objective_N = 0.0;  // error + penalty_weight * residual^2
  bool feasible = true;      // design admits the target compression
};

// Evaluates a design against the spec. Infeasible designs (kinematic range
// shorter than target_dy_max) do not throw: they return a large sentinel
// objective (>= 1e12, growing with the feasibility deficit) with
// feasible = false, so optimizers can traverse the region.
FitEval fit_error(const TmpDesign& design, const LinearFitSpec& spec);

struct OptOptions {
  double simplex_diameter_tol = 1e-6;  // scaled-coordinate simplex diameter
  double f_spread_tol = 1e-9;          // function spread across the simplex /
                                       // per-cycle improvement for Powell
  int max_iterations = 5000;
  double line_tol = 1e-8;              // golden-section interval tolerance
};

using Objective = std::function<double(const std::vector<double>&)>;

struct MinimizeResult {
  std::vector<double> x;
  double f = 0.0;
  long iterations = 0;
  long evaluations = 0;
  bool hit_iteration_cap = false;
  std::vector<double> best_history;  // best objective after each iteration
};

// Nelder-Mead with reflection/expansion/contraction/shrink coefficients
// (1, 2, 0.5, 0.5); box bounds enforced by projection; converges when the
// simplex diameter or the function spread drops below tolerance.
MinimizeResult nelder_mead_minimize(const Objective& objective,
                                    const std::vector<double>& lo,
                                    const std::vector<double>& hi,
                                    const std::vector<double>& x0,
                                    const OptOptions& options = {});

// Powell's direction-set method with bracketing + golden-section line
// search; the direction of largest decrease is replaced by the cycle
// displacement per the standard update. Same convergence contract.
MinimizeResult powell_minimize(const Objective& objective,
                               const std::vector<double>& lo,
                               const std::vector<double>& hi,
                               const std::vector<double>& x0,
                               const OptOptions& options = {});

enum class OptAlgorithm { simplex, powell };

const char* algorithm_name(OptAlgorithm algorithm);

struct OptResult {
  TmpDesign best_design;
  double error_N = 0.0;     // pure summed deviation at the best design
  double residual_N = 0.0;  // end-point constraint residual
  long iterations = 0;      // iterations of the winning (N, start) run
  int starts = 0;           // total (N, start) runs merged
  OptAlgorithm algorithm = OptAlgorithm::simplex;
};

// Full search: exhaustive over N, multi-start over the continuous block.
// jobs > 1 parallelizes the independent runs; the deterministic merge keeps
// the result identical. Throws AllInfeasible when no run found a feasible
// design.
OptResult optimize_linear_design(const LinearFitSpec& spec,
                                 OptAlgorithm algorithm,
                                 int jobs = 1,
                                 const OptOptions& options = {});

// JSON object: algorithm, best design (mm/deg), error_N, residual_N,
// iterations, starts.
std::string optresult_to_json(const OptResult& result);

}  // namespace tmp

#endif  // TMP_OPTIMIZER_HPP
