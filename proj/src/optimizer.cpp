#include "tmp/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "tmp/errors.hpp"

namespace tmp {

namespace {

constexpr double kInfeasibleSentinel = 1e12;

double norm2(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

std::vector<double> project(std::vector<double> x,
                            const std::vector<double>& lo,
                            const std::vector<double>& hi) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = std::clamp(x[i], lo[i], hi[i]);
  }
  return x;
}

// Golden-section minimization of f(x + t*d) over the largest t-interval
// keeping x + t*d inside the box. Returns the step t* (0 when the direction
// is blocked) and writes the achieved function value.
double golden_line_min(const Objective& objective,
                       const std::vector<double>& x,
                       const std::vector<double>& d,
                       const std::vector<double>& lo,
                       const std::vector<double>& hi, double interval_tol,
                       long* evaluations, double* f_out) {
  double t_lo = -1e300, t_hi = 1e300;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (d[i] == 0.0) continue;
    const double a = (lo[i] - x[i]) / d[i];
    const double b = (hi[i] - x[i]) / d[i];
    t_lo = std::max(t_lo, std::min(a, b));
    t_hi = std::min(t_hi, std::max(a, b));
  }
  if (!(t_hi > t_lo)) {
    *f_out = objective(x);
    ++*evaluations;
    return 0.0;
  }
  const auto phi = [&](double t) {
    std::vector<double> point(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) point[i] = x[i] + t * d[i];
    ++*evaluations;
    return objective(project(std::move(point), lo, hi));
  };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = t_lo, b = t_hi;
  double c = b - inv_phi * (b - a);
  double e = a + inv_phi * (b - a);
  double fc = phi(c), fe = phi(e);
  while (b - a > interval_tol) {
    if (fc < fe) {
      b = e;
      e = c;
      fe = fc;
      c = b - inv_phi * (b - a);
      fc = phi(c);
    } else {
      a = c;
      c = e;
      fc = fe;
      e = a + inv_phi * (b - a);
      fe = phi(e);
    }
  }
  const double t_star = fc < fe ? c : e;
  *f_out = std::min(fc, fe);
  return t_star;
}

// One (N, start) optimization task and its outcome.
struct RunOutcome {
  int N = 0;
  int start_index = 0;
  MinimizeResult minimize;
  FitEval eval;
  TmpDesign design;
};

TmpDesign design_from_scaled(const LinearFitSpec& spec, int N,
                             const std::vector<double>& x) {
  const auto unscale = [](const VarBounds& bounds, double u) {
    return bounds.lo + (bounds.hi - bounds.lo) * u;
  };
  TmpDesign design;
  design.N = N;
  design.alpha_rad = unscale(spec.alpha_rad, x[0]);
  design.c_m = unscale(spec.c_m, x[1]);
  design.d_m = unscale(spec.d_m, x[2]);
  design.l_m = unscale(spec.l_m, x[3]);
  design.m_m = unscale(spec.m_m, x[4]);
  design.kM_hat_N_per_rad = spec.kM_hat_N_per_rad;
  design.kS_hat_N_per_rad = spec.kS_hat_N_per_rad;
  design.thetaM0_rad = spec.thetaM0_rad;
  return design;
}

std::vector<std::vector<double>> start_points() {
  return {
      {0.50, 0.50, 0.50, 0.50, 0.50},
      {0.15, 0.15, 0.15, 0.15, 0.15},
      {0.85, 0.85, 0.85, 0.85, 0.85},
      {0.15, 0.85, 0.15, 0.85, 0.15},
      {0.85, 0.15, 0.85, 0.15, 0.85},
  };
}

}  // namespace

void LinearFitSpec::validate() const {
  std::ostringstream msg;
  if (!(target_F_max_N > 0.0) || !(target_dy_max_m > 0.0)) {
    msg << "fit target must be positive (F_max=" << target_F_max_N
        << " N, dy_max=" << target_dy_max_m << " m)";
    throw ConfigError(msg.str());
  }
  if (n_samples < 2) {
    msg << "fit needs >= 2 samples, got " << n_samples;
    throw ConfigError(msg.str());
  }
  if (N_lo < 1 || N_lo > N_hi) {
    msg << "cell-count range [" << N_lo << ", " << N_hi << "] is invalid";
    throw ConfigError(msg.str());
  }
  for (const VarBounds* bounds :
       {&alpha_rad, &c_m, &d_m, &l_m, &m_m}) {
    if (!(bounds->lo < bounds->hi)) {
      msg << "variable bounds [" << bounds->lo << ", " << bounds->hi
          << "] are empty";
      throw ConfigError(msg.str());
    }
  }
  if (!(kM_hat_N_per_rad >= 0.0) || !(kS_hat_N_per_rad >= 0.0) ||
      !(penalty_weight_per_N >= 0.0)) {
    msg << "stiffnesses and penalty weight must be >= 0";
    throw ConfigError(msg.str());
  }
}

ForceCurve ideal_linear_target(const LinearFitSpec& spec) {
  spec.validate();
  const double slope = spec.target_F_max_N / spec.target_dy_max_m;
  ForceCurve curve;
  curve.dy_max_m = spec.target_dy_max_m;
  curve.F_max_N = spec.target_F_max_N;
  curve.samples.resize(static_cast<std::size_t>(spec.n_samples));
  for (int i = 0; i < spec.n_samples; ++i) {
    const double dy = spec.target_dy_max_m * i / (spec.n_samples - 1.0);
    curve.samples[static_cast<std::size_t>(i)] = ForceSample{dy, slope * dy};
  }
  return curve;
}

FitEval fit_error(const TmpDesign& design, const LinearFitSpec& spec) {
  design.validate();
  FitEval eval;
  const double dy_full = full_fold_displacement_m(design);
  if (dy_full < spec.target_dy_max_m) {
    // Infeasible: the bellow cannot compress far enough. Grade the sentinel
    // by the deficit so optimizers are pulled back toward feasibility.
    const double deficit = spec.target_dy_max_m - dy_full;
    eval.feasible = false;
    eval.objective_N =
        kInfeasibleSentinel * (1.0 + deficit / spec.target_dy_max_m);
    eval.error_N = eval.objective_N;
    eval.residual_N = eval.objective_N;
    return eval;
  }
  const CreaseProfile profile =
      make_crease_profile(design, spec.theta1_rad, spec.theta2_rad);
  const ForceCurve curve =
      force_curve(design, profile, spec.target_dy_max_m, spec.n_samples);
  const double slope = spec.target_F_max_N / spec.target_dy_max_m;
  double error = 0.0;
  for (const ForceSample& sample : curve.samples) {
    error += std::abs(sample.F_N - slope * sample.dy_m);
  }
  eval.error_N = error;
  eval.residual_N = std::abs(curve.F_max_N - spec.target_F_max_N);
  eval.objective_N =
      error + spec.penalty_weight_per_N * eval.residual_N * eval.residual_N;
  return eval;
}

MinimizeResult nelder_mead_minimize(const Objective& objective,
                                    const std::vector<double>& lo,
                                    const std::vector<double>& hi,
                                    const std::vector<double>& x0,
                                    const OptOptions& options) {
  const std::size_t n = x0.size();
  MinimizeResult result;

  // Initial simplex: the start plus one vertex per coordinate, stepped by
  // 10% of the box width (flipped when that would leave the box).
  std::vector<std::vector<double>> simplex;
  simplex.push_back(project(x0, lo, hi));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> vertex = simplex[0];
    double step = 0.1 * (hi[i] - lo[i]);
    if (vertex[i] + step > hi[i]) step = -step;
    vertex[i] += step;
    simplex.push_back(project(std::move(vertex), lo, hi));
  }
  std::vector<double> f(simplex.size());
  for (std::size_t i = 0; i < simplex.size(); ++i) {
    f[i] = objective(simplex[i]);
    ++result.evaluations;
  }

  const auto order = [&]() {
    std::vector<std::size_t> idx(simplex.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a,
                                                 std::size_t b) {
      return f[a] < f[b];
    });
    std::vector<std::vector<double>> new_simplex(simplex.size());
    std::vector<double> new_f(simplex.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
      new_simplex[i] = std::move(simplex[idx[i]]);
      new_f[i] = f[idx[i]];
    }
    simplex = std::move(new_simplex);
    f = std::move(new_f);
  };
  order();

  for (long iter = 0; iter < options.max_iterations; ++iter) {
    // Convergence: simplex collapsed in space or in function value.
    double diameter = 0.0;
    for (std::size_t i = 1; i < simplex.size(); ++i) {
      diameter = std::max(diameter, norm2(simplex[i], simplex[0]));
    }
    if (diameter < options.simplex_diameter_tol ||
        f.back() - f.front() < options.f_spread_tol) {
      result.iterations = iter;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i + 1 < simplex.size(); ++i) {
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j];
    }
    for (std::size_t j = 0; j < n; ++j) centroid[j] /= static_cast<double>(n);

    const std::vector<double>& worst = simplex.back();
    const auto blend = [&](double coeff) {
      std::vector<double> point(n);
      for (std::size_t j = 0; j < n; ++j) {
        point[j] = centroid[j] + coeff * (centroid[j] - worst[j]);
      }
      return project(std::move(point), lo, hi);
    };

    const std::vector<double> reflected = blend(1.0);
    const double f_reflected = objective(reflected);
    ++result.evaluations;

    if (f_reflected < f.front()) {
      const std::vector<double> expanded = blend(2.0);
      const double f_expanded = objective(expanded);
      ++result.evaluations;
      if (f_expanded < f_reflected) {
        simplex.back() = expanded;
        f.back() = f_expanded;
      } else {
        simplex.back() = reflected;
        f.back() = f_reflected;
      }
    } else if (f_reflected < f[f.size() - 2]) {
      simplex.back() = reflected;
      f.back() = f_reflected;
    } else {
      const bool outside = f_reflected < f.back();
      const std::vector<double> contracted = blend(outside ? 0.5 : -0.5);
      const double f_contracted = objective(contracted);
      ++result.evaluations;
      if (f_contracted < std::min(f_reflected, f.back())) {
        simplex.back() = contracted;
        f.back() = f_contracted;
      } else {
        // Shrink everything toward the best vertex.
        for (std::size_t i = 1; i < simplex.size(); ++i) {
          for (std::size_t j = 0; j < n; ++j) {
            simplex[i][j] =
                simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
          }
          f[i] = objective(simplex[i]);
          ++result.evaluations;
        }
      }
    }
    order();
    result.best_history.push_back(f.front());
    result.iterations = iter + 1;
    if (iter + 1 == options.max_iterations) {
      result.hit_iteration_cap = true;
    }
  }

  result.x = simplex.front();
  result.f = f.front();
  return result;
}

MinimizeResult powell_minimize(const Objective& objective,
                               const std::vector<double>& lo,
                               const std::vector<double>& hi,
                               const std::vector<double>& x0,
                               const OptOptions& options) {
  const std::size_t n = x0.size();
  MinimizeResult result;
  std::vector<double> x = project(x0, lo, hi);
  double f = objective(x);
  ++result.evaluations;

  std::vector<std::vector<double>> directions(n,
                                              std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) directions[i][i] = 1.0;

  for (long cycle = 0; cycle < options.max_iterations; ++cycle) {
    const std::vector<double> x_old = x;
    const double f_old = f;
    double biggest_drop = 0.0;
    std::size_t biggest_index = 0;

    for (std::size_t i = 0; i < n; ++i) {
      double f_line = f;
      const double t = golden_line_min(objective, x, directions[i], lo, hi,
                                       options.line_tol, &result.evaluations,
                                       &f_line);
      if (f - f_line > biggest_drop) {
        biggest_drop = f - f_line;
        biggest_index = i;
      }
      for (std::size_t j = 0; j < n; ++j) x[j] += t * directions[i][j];
      x = project(std::move(x), lo, hi);
      f = f_line;
    }

    result.best_history.push_back(f);
    result.iterations = cycle + 1;

    if (f_old - f < options.f_spread_tol ||
        norm2(x, x_old) < options.simplex_diameter_tol) {
      break;
    }
    if (cycle + 1 == options.max_iterations) {
      result.hit_iteration_cap = true;
      break;
    }

    // Standard direction update: try the overall cycle displacement; if an
    // extrapolated probe keeps descending, adopt it in place of the
    // direction that contributed the largest single drop.
    std::vector<double> displacement(n);
    std::vector<double> extrapolated(n);
    for (std::size_t j = 0; j < n; ++j) {
      displacement[j] = x[j] - x_old[j];
      extrapolated[j] = 2.0 * x[j] - x_old[j];
    }
    extrapolated = project(std::move(extrapolated), lo, hi);
    const double f_extrapolated = objective(extrapolated);
    ++result.evaluations;
    if (f_extrapolated < f_old) {
      const double test =
          2.0 * (f_old - 2.0 * f + f_extrapolated) *
              (f_old - f - biggest_drop) * (f_old - f - biggest_drop) -
          biggest_drop * (f_old - f_extrapolated) * (f_old - f_extrapolated);
      if (test < 0.0) {
        double length = 0.0;
        for (const double component : displacement) {
          length += component * component;
        }
        length = std::sqrt(length);
        if (length > 0.0) {
          for (std::size_t j = 0; j < n; ++j) displacement[j] /= length;
          directions[biggest_index] = directions.back();
          directions.back() = displacement;
          double f_line = f;
          const double t =
              golden_line_min(objective, x, directions.back(), lo, hi,
                              options.line_tol, &result.evaluations, &f_line);
          for (std::size_t j = 0; j < n; ++j) {
            x[j] += t * directions.back()[j];
          }
          x = project(std::move(x), lo, hi);
          f = f_line;
        }
      }
    }
  }

  result.x = x;
  result.f = f;
  return result;
}

const char* algorithm_name(OptAlgorithm algorithm) {
  return algorithm == OptAlgorithm::simplex ? "simplex" : "powell";
}

OptResult optimize_linear_design(const LinearFitSpec& spec,
                                 OptAlgorithm algorithm, int jobs,
                                 const OptOptions& options) {
  spec.validate();
  const std::vector<std::vector<double>> starts = start_points();
  const std::vector<double> lo(5, 0.0);
  const std::vector<double> hi(5, 1.0);

  struct Task {
    int N;
    int start_index;
  };
  std::vector<Task> tasks;
  for (int N = spec.N_lo; N <= spec.N_hi; ++N) {
    for (int s = 0; s < static_cast<int>(starts.size()); ++s) {
      tasks.push_back(Task{N, s});
    }
  }

  std::vector<RunOutcome> outcomes(tasks.size());
  const auto run_task = [&](std::size_t index) {
    const Task& task = tasks[index];
    const Objective objective = [&, N = task.N](
                                    const std::vector<double>& x) {
      return fit_error(design_from_scaled(spec, N, x), spec).objective_N;
    };
    RunOutcome outcome;
    outcome.N = task.N;
    outcome.start_index = task.start_index;
    outcome.minimize =
        algorithm == OptAlgorithm::simplex
            ? nelder_mead_minimize(objective, lo, hi,
                                   starts[static_cast<std::size_t>(
                                       task.start_index)],
                                   options)
            : powell_minimize(objective, lo, hi,
                              starts[static_cast<std::size_t>(
                                  task.start_index)],
                              options);
    outcome.design = design_from_scaled(spec, task.N, outcome.minimize.x);
    outcome.eval = fit_error(outcome.design, spec);
    outcomes[index] = std::move(outcome);
  };

  const int workers =
      std::clamp<int>(jobs, 1, static_cast<int>(tasks.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) run_task(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&]() {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= tasks.size()) return;
          run_task(i);
        }
      });
    }
    for (std::thread& worker : pool) worker.join();
  }

  // Deterministic merge: objective first, then the smaller N, then the
  // earlier start. Identical regardless of how tasks were scheduled.
  const RunOutcome* best = nullptr;
  for (const RunOutcome& outcome : outcomes) {
    if (!outcome.eval.feasible) continue;
    if (best == nullptr ||
        outcome.minimize.f < best->minimize.f ||
        (outcome.minimize.f == best->minimize.f &&
         (outcome.N < best->N ||
          (outcome.N == best->N &&
           outcome.start_index < best->start_index)))) {
      best = &outcome;
    }
  }
  if (best == nullptr) {
    throw AllInfeasible(
        "no start produced a design able to reach the target compression");
  }

  OptResult result;
  result.best_design = best->design;
  result.error_N = best->eval.error_N;
  result.residual_N = best->eval.residual_N;
  result.iterations = best->minimize.iterations;
  result.starts = static_cast<int>(tasks.size());
  result.algorithm = algorithm;
  return result;
}

std::string optresult_to_json(const OptResult& result) {
  nlohmann::json j;
  j["algorithm"] = algorithm_name(result.algorithm);
  j["best_design"] = {
      {"N", result.best_design.N},
      {"alpha_deg", rad2deg(result.best_design.alpha_rad)},
      {"c_mm", result.best_design.c_m * 1e3},
      {"d_mm", result.best_design.d_m * 1e3},
      {"l_mm", result.best_design.l_m * 1e3},
      {"m_mm", result.best_design.m_m * 1e3},
      {"kM_hat_N_per_rad", result.best_design.kM_hat_N_per_rad},
      {"kS_hat_N_per_rad", result.best_design.kS_hat_N_per_rad},
      {"thetaM0_deg", rad2deg(result.best_design.thetaM0_rad)},
  };
  j["error_N"] = result.error_N;
  j["residual_N"] = result.residual_N;
  j["iterations"] = result.iterations;
  j["starts"] = result.starts;
  return j.dump(2) + "\n";
}

}  // namespace tmp
