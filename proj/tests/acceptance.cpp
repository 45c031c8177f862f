// Acceptance runner for the TMP jumper toolkit.
//
// Drives the toolkit end to end against its reference targets and prints one
// PASS/FAIL line per criterion with the measured values inline, so a failing
// run documents exactly how far off it is. Tolerances are pinned here, next
// to the checks. The exit code is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "tmp/dynamics.hpp"
#include "tmp/errors.hpp"
#include "tmp/optimizer.hpp"
#include "tmp/paleo.hpp"
#include "tmp/studies.hpp"

using namespace tmp;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool pass,
            const std::string& detail) {
  if (!pass) ++g_failures;
  std::cout << (pass ? "PASS" : "FAIL") << " criterion " << criterion << " ("
            << name << "): " << detail << std::endl;
}

std::string num(double value, int digits = 4) {
  std::ostringstream os;
  os << std::setprecision(digits) << value;
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

int worker_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// ---------------------------------------------------------------------------
// Reference designs: the strain-softening prototype and the near-linear
// prototype, with their bench masses and efficiencies.

TmpDesign softening_prototype() {
  TmpDesign design;
  design.N = 8;
  design.alpha_rad = deg2rad(30.0);
  design.c_m = 0.0211;
  design.d_m = 0.0342;
  design.l_m = 0.0399;
  design.m_m = 0.0232;
  design.kM_hat_N_per_rad = 0.0186;
  design.kS_hat_N_per_rad = 0.0946;
  return design;
}

TmpDesign near_linear_prototype() {
  TmpDesign design;
  design.N = 8;
  design.alpha_rad = deg2rad(50.0);
  design.c_m = 0.0340;
  design.d_m = 0.0216;
  design.l_m = 0.0317;
  design.m_m = 0.0391;
  design.kM_hat_N_per_rad = 0.0946;
  design.kS_hat_N_per_rad = 0.0186;
  return design;
}

struct PrototypeRun {
  JumpMetrics metrics;
  double wall_s = 0.0;
};

PrototypeRun run_prototype(const TmpDesign& design, double m1_kg,
                           double m2_kg, double eta) {
  JumperConfig config;
  config.design = design;
  config.profile = make_crease_profile(design);
  config.m1_kg = m1_kg;
  config.m2_kg = m2_kg;
  config.dy0_m = 0.110;
  config.eta = eta;
  const auto start = std::chrono::steady_clock::now();
  const JumpResult result = simulate(config);
  return PrototypeRun{result.metrics, seconds_since(start)};
}

bool within(double value, double reference, double rel_tol) {
  return std::abs(value - reference) <= rel_tol * std::abs(reference);
}

// ---------------------------------------------------------------------------
// Criteria 1-3: prototype jumps against the reference metrics.

void criterion_1(const PrototypeRun& soft, const PrototypeRun& linear) {
  // Reference jump metrics: softening 0.495 s / 314.8 mm, near-linear
  // 0.484 s / 293.7 mm; airtime +-5%, clearance +-8%, < 5 s wall each.
  const bool soft_ok = within(soft.metrics.airtime_s, 0.495, 0.05) &&
                       within(soft.metrics.clearance_m, 0.3148, 0.08);
  const bool linear_ok = within(linear.metrics.airtime_s, 0.484, 0.05) &&
                         within(linear.metrics.clearance_m, 0.2937, 0.08);
  const bool fast = soft.wall_s < 5.0 && linear.wall_s < 5.0;
  std::ostringstream detail;
  detail << "softening " << num(soft.metrics.airtime_s) << " s / "
         << num(soft.metrics.clearance_m) << " m (ref 0.495 s +-5%, 0.3148 m"
         << " +-8%), near-linear " << num(linear.metrics.airtime_s) << " s / "
         << num(linear.metrics.clearance_m)
         << " m (ref 0.484 s, 0.2937 m), wall " << num(soft.wall_s, 2)
         << " s and " << num(linear.wall_s, 2) << " s";
  report(1, "prototype jump metrics", soft_ok && linear_ok && fast,
         detail.str());
}

void criterion_2() {
  // Nonlinearity ratios at 110 mm: softening 1.12 +- 0.05, near-linear
  // 1.02 +- 0.05 (absolute bands).
  const auto ratio = [](const TmpDesign& design) {
    return nonlinearity_ratio(
        force_curve(design, make_crease_profile(design), 0.110));
  };
  const double soft = ratio(softening_prototype());
  const double linear = ratio(near_linear_prototype());
  const bool soft_ok = std::abs(soft - 1.12) <= 0.05;
  const bool linear_ok = std::abs(linear - 1.02) <= 0.05;
  std::ostringstream detail;
  detail << "R_n softening " << num(soft) << " (band 1.12+-0.05"
         << (soft_ok ? ", ok" : ", out") << "), near-linear " << num(linear)
         << " (band 1.02+-0.05" << (linear_ok ? ", ok" : ", out") << ")";
  report(2, "nonlinearity ratios", soft_ok && linear_ok, detail.str());
}

void criterion_3(const PrototypeRun& soft, const PrototypeRun& linear) {
  const bool airtime_ok =
      soft.metrics.airtime_s > linear.metrics.airtime_s;
  const bool clearance_ok =
      soft.metrics.clearance_m > linear.metrics.clearance_m;
  std::ostringstream detail;
  detail << "softening vs near-linear: airtime "
         << num(soft.metrics.airtime_s) << " vs "
         << num(linear.metrics.airtime_s) << " s, clearance "
         << num(soft.metrics.clearance_m) << " vs "
         << num(linear.metrics.clearance_m) << " m (softening must win both)";
  report(3, "softening out-jumps near-linear", airtime_ok && clearance_ok,
         detail.str());
}

// ---------------------------------------------------------------------------
// Criterion 4: the linearization search.

void criterion_4() {
  LinearFitSpec spec;  // stiff main / soft sub defaults, 2000 samples
  const TmpDesign reference = softening_prototype();
  spec.target_F_max_N = reaction_force(
      reference, make_crease_profile(reference), spec.target_dy_max_m);

  const auto start = std::chrono::steady_clock::now();
  const OptResult simplex =
      optimize_linear_design(spec, OptAlgorithm::simplex, worker_count());
  const OptResult powell =
      optimize_linear_design(spec, OptAlgorithm::powell, worker_count());
  const double wall = seconds_since(start);

  const OptResult& best =
      simplex.error_N <= powell.error_N ? simplex : powell;
  const double alpha_deg = rad2deg(best.best_design.alpha_rad);
  const bool alpha_at_bound = alpha_deg >= 69.5;
  const bool algorithms_agree =
      std::abs(simplex.error_N - powell.error_N) <=
      0.05 * std::min(simplex.error_N, powell.error_N);
  // Reference best fit error: 205.1 N summed deviation, +-15%.
  const bool magnitude_ok = within(best.error_N, 205.1, 0.15);
  const bool fast = wall < 120.0;

  std::ostringstream detail;
  detail << "best error " << num(best.error_N) << " N (ref 205.1 +-15%"
         << (magnitude_ok ? ", ok" : ", out") << "), simplex "
         << num(simplex.error_N) << " vs powell " << num(powell.error_N)
         << " N (" << (algorithms_agree ? "within" : "beyond")
         << " 5%), alpha* " << num(alpha_deg) << " deg (bound 70"
         << (alpha_at_bound ? ", ok" : ", off") << "), N* "
         << best.best_design.N << ", wall " << num(wall, 3) << " s";
  report(4, "linearization search",
         alpha_at_bound && algorithms_agree && magnitude_ok && fast,
         detail.str());
}

// ---------------------------------------------------------------------------
// Criterion 5: static sweep trends.

void criterion_5() {
  const int jobs = worker_count();

  // (a) R_n strictly increases with alpha.
  SweepSpec alpha_spec;
  alpha_spec.variable = SweepVariable::alpha;
  const SweepResult alpha = static_sweep(alpha_spec, jobs);
  bool alpha_monotone = true;
  for (std::size_t i = 1; i < alpha.points.size(); ++i) {
    if (!(alpha.points[i].R_n > alpha.points[i - 1].R_n)) {
      alpha_monotone = false;
    }
  }

  // (b) the force curve moves by < 5% pointwise across the l, m and c
  // sweeps (those lengths only scale the main-fold coefficient, so the
  // curve barely moves when the main folds are the soft family).
  const TmpDesign base = default_sweep_base();
  const double dy_max = displacement_from_folding_ratio(base, 0.75);
  const ForceCurve base_curve =
      force_curve(base, make_crease_profile(base), dy_max);
  double worst_shift = 0.0;
  for (const SweepVariable variable :
       {SweepVariable::l, SweepVariable::m, SweepVariable::c}) {
    SweepSpec spec;
    spec.variable = variable;
    for (const double value : sweep_grid(spec)) {
      const TmpDesign design = apply_variable(base, variable, value);
      const ForceCurve curve =
          force_curve(design, make_crease_profile(design), dy_max);
      for (std::size_t i = 1; i < curve.samples.size(); ++i) {
        worst_shift = std::max(
            worst_shift, std::abs(curve.samples[i].F_N -
                                  base_curve.samples[i].F_N) /
                             std::abs(base_curve.samples[i].F_N));
      }
    }
  }
  const bool lengths_ok = worst_shift < 0.05;

  // (c) R_n independent of N to +-1e-6.
  SweepSpec n_spec;
  n_spec.variable = SweepVariable::N;
  const SweepResult n_sweep = static_sweep(n_spec, jobs);
  double n_spread = 0.0;
  for (const SweepPoint& point : n_sweep.points) {
    n_spread = std::max(n_spread,
                        std::abs(point.R_n - n_sweep.points.front().R_n));
  }
  const bool n_constant = n_spread <= 1e-6;

  std::ostringstream detail;
  detail << "R_n(alpha) " << (alpha_monotone ? "monotone" : "NOT monotone")
         << " over " << num(rad2deg(alpha.points.front().variable_value), 3)
         << ".." << num(rad2deg(alpha.points.back().variable_value), 3)
         << " deg; l/m/c pointwise force shift " << num(worst_shift * 100, 3)
         << "% (< 5%" << (lengths_ok ? ", ok" : ", out")
         << "); R_n(N) spread " << num(n_spread, 3) << " (<= 1e-6"
         << (n_constant ? ", ok" : ", out") << ")";
  report(5, "static sweep trends",
         alpha_monotone && lengths_ok && n_constant, detail.str());
}

// ---------------------------------------------------------------------------
// Criterion 6: dynamic sweep trends.

void criterion_6() {
  const int jobs = worker_count();
  const auto sweep_of = [&](SweepVariable variable) {
    SweepSpec spec;
    spec.variable = variable;
    return dynamic_sweep(spec, jobs);
  };

  const auto all_ok = [](const SweepResult& result) {
    for (const SweepPoint& point : result.points) {
      if (!point.ok) return false;
    }
    return true;
  };
  const auto increasing = [](const SweepResult& result, auto field) {
    for (std::size_t i = 1; i < result.points.size(); ++i) {
      if (!(field(result.points[i]) > field(result.points[i - 1]))) {
        return false;
      }
    }
    return true;
  };
  const auto airtime = [](const SweepPoint& p) { return p.airtime_s; };
  const auto clearance = [](const SweepPoint& p) { return p.clearance_m; };
  const auto airtime_ratio = [](const SweepPoint& p) {
    return p.airtime_ratio;
  };
  const auto clearance_ratio = [](const SweepPoint& p) {
    return p.clearance_ratio;
  };

  const SweepResult n_sweep = sweep_of(SweepVariable::N);
  const SweepResult d_sweep = sweep_of(SweepVariable::d);
  const SweepResult a_sweep = sweep_of(SweepVariable::alpha);

  const bool points_ok =
      all_ok(n_sweep) && all_ok(d_sweep) && all_ok(a_sweep);
  const bool n_up =
      increasing(n_sweep, airtime) && increasing(n_sweep, clearance);
  const bool d_up =
      increasing(d_sweep, airtime) && increasing(d_sweep, clearance);
  bool alpha_absolute_down = true;
  bool ratios_above_one = true;
  for (std::size_t i = 0; i < a_sweep.points.size(); ++i) {
    const SweepPoint& p = a_sweep.points[i];
    if (!(p.airtime_ratio > 1.0) || !(p.clearance_ratio > 1.0)) {
      ratios_above_one = false;
    }
    if (i > 0) {
      const SweepPoint& q = a_sweep.points[i - 1];
      if (!(p.airtime_s < q.airtime_s) || !(p.clearance_m < q.clearance_m)) {
        alpha_absolute_down = false;
      }
    }
  }
  const bool ratios_up = increasing(a_sweep, airtime_ratio) &&
                         increasing(a_sweep, clearance_ratio);

  std::ostringstream detail;
  detail << "airtime/clearance up with N ("
         << (n_up ? "ok" : "NOT monotone") << ") and d ("
         << (d_up ? "ok" : "NOT monotone") << "); vs alpha: absolute down ("
         << (alpha_absolute_down ? "ok" : "NOT monotone")
         << "), ratios > 1 everywhere ("
         << (ratios_above_one ? "ok" : "violated") << "), ratios up ("
         << (ratios_up ? "ok" : "NOT monotone") << ")";
  report(6, "dynamic sweep trends",
         points_ok && n_up && d_up && alpha_absolute_down &&
             ratios_above_one && ratios_up,
         detail.str());
}

// ---------------------------------------------------------------------------
// Criterion 7: internal consistency properties.

struct PropertyCheck {
  char label = '?';
  bool pass = false;
  std::string measured;
};

PropertyCheck property_energy_conservation() {
  // (a) with eta = 1 (no damper) the total mechanical energy is conserved
  // through launch, flight and landing to 1e-4 relative.
  JumperConfig config;
  config.design = softening_prototype();
  config.profile = make_crease_profile(config.design);
  config.m1_kg = 0.0177;
  config.m2_kg = 0.0176;
  config.dy0_m = 0.110;
  config.eta = 1.0;
  const JumpResult result = simulate(config);
  const TmpSpringLaw law(config.design, config.profile);
  const double l0 = resting_height_m(config.design);
  const auto total = [&](const TracePoint& p) {
    const double dy = l0 - (p.y2_m - p.y1_m);
    return 0.5 * config.m1_kg * p.v1_mps * p.v1_mps +
           0.5 * config.m2_kg * p.v2_mps * p.v2_mps +
           config.g_mps2 * (config.m1_kg * p.y1_m + config.m2_kg * p.y2_m) +
           law_energy_J(law, dy);
  };
  const double reference = total(result.trace.points.front());
  double drift = 0.0;
  for (std::size_t i = 0; i < result.trace.points.size(); i += 10) {
    drift = std::max(drift, std::abs(total(result.trace.points[i]) -
                                     reference));
  }
  const double rel = drift / std::abs(reference);
  return PropertyCheck{'a', rel < 1e-4, "energy drift " + num(rel, 3)};
}

PropertyCheck property_flight_cg_acceleration() {
  // (b) in flight with no damper the center of gravity is a free body: a
  // quadratic fit of its trajectory must recover -g to 0.1%.
  JumperConfig config;
  config.design = softening_prototype();
  config.profile = make_crease_profile(config.design);
  config.m1_kg = 0.0177;
  config.m2_kg = 0.0176;
  config.dy0_m = 0.110;
  config.eta = 1.0;
  const JumpResult result = simulate(config);

  // Least squares y = a*t^2 + b*t + c over the flight span via the normal
  // equations (3x3, solved by Gaussian elimination).
  double S[5] = {0, 0, 0, 0, 0};
  double Sy[3] = {0, 0, 0};
  const double total_mass = config.m1_kg + config.m2_kg;
  for (const TracePoint& p : result.trace.points) {
    if (p.t_s < result.metrics.t_takeoff_s) continue;
    const double t = p.t_s - result.metrics.t_takeoff_s;
    const double y =
        (config.m1_kg * p.y1_m + config.m2_kg * p.y2_m) / total_mass;
    double power = 1.0;
    for (int k = 0; k < 5; ++k) {
      S[k] += power;
      if (k < 3) Sy[k] += power * y;
      power *= t;
    }
  }
  double A[3][4] = {{S[0], S[1], S[2], Sy[0]},
                    {S[1], S[2], S[3], Sy[1]},
                    {S[2], S[3], S[4], Sy[2]}};
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int row = col + 1; row < 3; ++row) {
      if (std::abs(A[row][col]) > std::abs(A[pivot][col])) pivot = row;
    }
    std::swap(A[col], A[pivot]);
    for (int row = 0; row < 3; ++row) {
      if (row == col) continue;
      const double factor = A[row][col] / A[col][col];
      for (int k = col; k < 4; ++k) A[row][k] -= factor * A[col][k];
    }
  }
  const double accel = 2.0 * A[2][3] / A[2][2];
  const double rel = std::abs(accel + config.g_mps2) / config.g_mps2;
  return PropertyCheck{'b', rel < 1e-3,
                       "flight cg accel " + num(accel, 6) + " m/s^2, off by " +
                           num(rel * 100, 3) + "%"};
}

PropertyCheck property_strain_energy_gradient() {
  // (c) on the stiffness plateau the force law equals the derivative of the
  // crease strain energy
  //   U(dy) = 16*(N-1)*kM0*(thetaM-thetaM0)^2 + 16*N*kS0*(thetaS-thetaS0)^2
  // checked by central finite difference.
  const TmpDesign design;  // defaults sit well inside the plateau
  const CreaseProfile profile = make_crease_profile(design);
  const FoldState rest = resting_state(design);
  const auto energy = [&](double dy) {
    const FoldState state = fold_state_from_displacement(design, dy);
    const double dM = state.thetaM_rad - rest.thetaM_rad;
    const double dS = state.thetaS_rad - rest.thetaS_rad;
    return 16.0 * (design.N - 1) * profile.kM0_Nm_per_rad * dM * dM +
           16.0 * design.N * profile.kS0_Nm_per_rad * dS * dS;
  };
  // The sub-fold angle leaves the plateau near dy = 0.036 for the default
  // design, so stay below that.
  const double h = 1e-6;
  double worst = 0.0;
  for (const double dy : {0.005, 0.015, 0.025, 0.034}) {
    const double fd = (energy(dy + h) - energy(dy - h)) / (2.0 * h);
    const double direct = reaction_force(design, profile, dy);
    worst = std::max(worst, std::abs(fd - direct) / std::abs(direct));
  }
  return PropertyCheck{'c', worst < 1e-4,
                       "strain-energy gradient off by " + num(worst, 3)};
}

PropertyCheck property_kinematic_round_trips() {
  // (d) displacement -> angle -> folding ratio -> displacement -> angle
  // round trips to < 1e-10 rad.
  const TmpDesign design;
  const double dy_full = full_fold_displacement_m(design);
  double worst = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double dy = dy_full * 0.999 * i / 200.0;
    const double theta = fold_state_from_displacement(design, dy).thetaM_rad;
    const double dy_back = displacement_from_folding_ratio(
        design, folding_ratio_from_angle(theta));
    const double theta_back =
        fold_state_from_displacement(design, dy_back).thetaM_rad;
    worst = std::max(worst, std::abs(theta_back - theta));
  }
  return PropertyCheck{'d', worst < 1e-10,
                       "round-trip error " + num(worst, 3) + " rad"};
}

PropertyCheck property_quadrature_refinement() {
  // (e) halving the quadrature step moves R_n by < 1e-6 relative.
  const TmpDesign design = softening_prototype();
  const CreaseProfile profile = make_crease_profile(design);
  const double coarse =
      nonlinearity_ratio(force_curve(design, profile, 0.110, 1001));
  const double fine =
      nonlinearity_ratio(force_curve(design, profile, 0.110, 2001));
  const double rel = std::abs(coarse - fine) / fine;
  return PropertyCheck{'e', rel < 1e-6, "R_n refinement shift " + num(rel, 3)};
}

PropertyCheck property_optimizer_determinism() {
  // (f) repeated searches, serial or parallel, give byte-identical results.
  LinearFitSpec spec;
  const TmpDesign reference = softening_prototype();
  spec.target_F_max_N = reaction_force(
      reference, make_crease_profile(reference), spec.target_dy_max_m);
  spec.n_samples = 500;
  spec.N_lo = 8;
  spec.N_hi = 8;
  const std::string first =
      optresult_to_json(optimize_linear_design(spec, OptAlgorithm::simplex, 1));
  const std::string repeat =
      optresult_to_json(optimize_linear_design(spec, OptAlgorithm::simplex, 1));
  const std::string parallel =
      optresult_to_json(optimize_linear_design(spec, OptAlgorithm::simplex, 4));
  const bool identical = first == repeat && first == parallel;
  return PropertyCheck{'f', identical,
                       identical ? std::string("byte-identical")
                                 : std::string("results differ")};
}

void criterion_7() {
  const std::vector<PropertyCheck> checks = {
      property_energy_conservation(),   property_flight_cg_acceleration(),
      property_strain_energy_gradient(), property_kinematic_round_trips(),
      property_quadrature_refinement(),  property_optimizer_determinism(),
  };
  bool pass = true;
  std::ostringstream detail;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    if (!checks[i].pass) pass = false;
    if (i > 0) detail << "; ";
    detail << checks[i].label << ": " << checks[i].measured
           << (checks[i].pass ? "" : " [FAILED]");
  }
  report(7, "internal consistency", pass, detail.str());
}

// ---------------------------------------------------------------------------
// Criterion 8: crease stiffness reduction round trip.

void criterion_8() {
  // The two bench specimens: torsional stiffness over specimen length must
  // land within 1% of the per-unit-length values used by the force model.
  const double soft = per_unit_length_N_per_rad(0.0011, 0.0591);
  const double stiff = per_unit_length_N_per_rad(0.0057, 0.0603);
  const double soft_err = std::abs(soft - 0.0186) / 0.0186;
  const double stiff_err = std::abs(stiff - 0.0946) / 0.0946;
  const bool pass = soft_err < 0.01 && stiff_err < 0.01;
  std::ostringstream detail;
  detail << "0.0011 N*m/rad over 59.1 mm -> " << num(soft, 5)
         << " N/rad (ref 0.0186, off " << num(soft_err * 100, 2)
         << "%); 0.0057 over 60.3 mm -> " << num(stiff, 5)
         << " N/rad (ref 0.0946, off " << num(stiff_err * 100, 2) << "%)";
  report(8, "crease stiffness round trip", pass, detail.str());
}

}  // namespace

int main() {
  std::cout << "acceptance: " << worker_count() << " workers\n";

  const PrototypeRun soft =
      run_prototype(softening_prototype(), 0.0177, 0.0176, 0.89);
  const PrototypeRun linear =
      run_prototype(near_linear_prototype(), 0.0179, 0.0179, 0.85);

  criterion_1(soft, linear);
  criterion_2();
  criterion_3(soft, linear);
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();

  if (g_failures == 0) {
    std::cout << "all 8 criteria passed\n";
  } else {
    std::cout << g_failures << " of 8 criteria failed\n";
  }
  return g_failures;
}
