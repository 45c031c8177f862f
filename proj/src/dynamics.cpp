#include "tmp/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

#include "tmp/errors.hpp"
#include "tmp/io_util.hpp"

namespace tmp {

namespace {

constexpr double kRtol = 1e-9;
constexpr double kAtol = 1e-12;
constexpr double kStepMax = 0.01;        // s
constexpr double kStepInit = 1e-6;       // s
constexpr double kEventTimeTol = 1e-8;   // s, event bisection width
constexpr double kTakeoffForceTol = 1e-7;  // N, extra polish on take-off
constexpr double kFlightBudget = 60.0;   // s past take-off before giving up

// State vector: {y1, v1, y2, v2}.
using State = std::array<double, 4>;

// Flags and peak tension accumulated across every spring evaluation.
struct SpringFlags {
  bool capped = false;
  bool out_of_range = false;
  double peak_tension_N = 0.0;
};

// Spring evaluation wrapper that folds SpringEval flags into SpringFlags.
struct SpringProbe {
  const SpringLaw* law = nullptr;
  SpringFlags* flags = nullptr;

  double operator()(double dy_m) const {
    const SpringEval eval = law->force(dy_m);
    if (eval.capped) flags->capped = true;
    if (eval.out_of_range) flags->out_of_range = true;
    if (-eval.F_N > flags->peak_tension_N) {
      flags->peak_tension_N = -eval.F_N;
    }
    return eval.F_N;
  }
};

// The two-mass system in both phases. While grounded, y1 is pinned (its
// derivatives are exactly zero) and the damper reacts against the ground.
struct TwoMassSystem {
  SpringProbe spring;
  double m1 = 0.0;
  double m2 = 0.0;
  double g = 9.81;
  double C = 0.0;
  double l0 = 0.0;
  bool grounded = true;

  State deriv(const State& y) const {
    const double dy = l0 - (y[2] - (grounded ? 0.0 : y[0]));
    const double F = spring(dy);
    if (grounded) {
      return State{0.0, 0.0, y[3], (F - m2 * g - C * y[3]) / m2};
    }
    const double v_rel = y[3] - y[1];
    return State{y[1], (-F - m1 * g + C * v_rel) / m1,  //
                 y[3], (F - m2 * g - C * v_rel) / m2};
  }
};

// Dormand-Prince 4(5) tableau. The last error weight belongs to the trailing
// derivative evaluation at the 5th-order solution.
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0,
                 kA53 = 64448.0 / 6561.0, kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0,
                 kA63 = 46732.0 / 5247.0, kA64 = 49.0 / 176.0,
                 kA65 = -5103.0 / 18656.0;
constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0,
                 kB4 = 125.0 / 192.0, kB5 = -2187.0 / 6784.0,
                 kB6 = 11.0 / 84.0;
constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0,
                 kE4 = 71.0 / 1920.0, kE5 = -17253.0 / 339200.0,
                 kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;

State axpy(const State& y, double h, const State& k) {
  State out;
  for (int i = 0; i < 4; ++i) out[i] = y[i] + h * k[i];
  return out;
}

// One trial step of size h; returns the 5th-order solution and writes the
// scaled error norm.
State dp45_trial(const TwoMassSystem& sys, const State& y, double h,
                 double* err_norm) {
  const State k1 = sys.deriv(y);
  const State k2 = sys.deriv(axpy(y, h * kA21, k1));
  State stage;
  for (int i = 0; i < 4; ++i) stage[i] = y[i] + h * (kA31 * k1[i] + kA32 * k2[i]);
  const State k3 = sys.deriv(stage);
  for (int i = 0; i < 4; ++i) {
    stage[i] = y[i] + h * (kA41 * k1[i] + kA42 * k2[i] + kA43 * k3[i]);
  }
  const State k4 = sys.deriv(stage);
  for (int i = 0; i < 4; ++i) {
    stage[i] = y[i] + h * (kA51 * k1[i] + kA52 * k2[i] + kA53 * k3[i] +
                           kA54 * k4[i]);
  }
  const State k5 = sys.deriv(stage);
  for (int i = 0; i < 4; ++i) {
    stage[i] = y[i] + h * (kA61 * k1[i] + kA62 * k2[i] + kA63 * k3[i] +
                           kA64 * k4[i] + kA65 * k5[i]);
  }
  const State k6 = sys.deriv(stage);
  State y_new;
  for (int i = 0; i < 4; ++i) {
    y_new[i] = y[i] + h * (kB1 * k1[i] + kB3 * k3[i] + kB4 * k4[i] +
                           kB5 * k5[i] + kB6 * k6[i]);
  }
  const State k7 = sys.deriv(y_new);
  double sum_sq = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double err_i = h * (kE1 * k1[i] + kE3 * k3[i] + kE4 * k4[i] +
                              kE5 * k5[i] + kE6 * k6[i] + kE7 * k7[i]);
    const double scale =
        kAtol + kRtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
    sum_sq += (err_i / scale) * (err_i / scale);
  }
  *err_norm = std::sqrt(sum_sq / 4.0);
  return y_new;
}

// Takes one accepted adaptive step, never stepping past t_limit. Updates
// (t, y) and the working step size h.
void rk45_step(const TwoMassSystem& sys, double* t, State* y, double* h,
               double t_limit) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    bool hits_limit = false;
    double h_eff = *h;
    if (*t + h_eff >= t_limit) {
      h_eff = t_limit - *t;
      hits_limit = true;
    }
    if (*t + h_eff == *t) {
      throw ComputationError("integrator step size underflowed");
    }
    double err = 0.0;
    const State y_new = dp45_trial(sys, *y, h_eff, &err);
    const double factor =
        err == 0.0 ? 5.0
                   : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    if (err <= 1.0) {
      *t = hits_limit ? t_limit : *t + h_eff;
      *y = y_new;
      *h = std::min(h_eff * factor, kStepMax);
      return;
    }
    *h = h_eff * std::min(factor, 0.9);
  }
  throw ComputationError("integrator could not find an acceptable step size");
}

// Integrates from (t_from, y) exactly to t_to and returns the final state.
State integrate_to(const TwoMassSystem& sys, double t_from, State y,
                   double t_to) {
  double t = t_from;
  double h = std::min(kStepInit, t_to - t_from);
  while (t < t_to) {
    rk45_step(sys, &t, &y, &h, t_to);
  }
  return y;
}

struct EventPoint {
  double t = 0.0;
  State y{};
};

// Bisects an event bracketed by g(y_lo) < 0 <= g(y_hi) down to
// kEventTimeTol; when g_polish_tol > 0 it also drives |g| at the returned
// point below that bound (take-off needs the force balance tight).
EventPoint refine_event(const TwoMassSystem& sys, double t_lo, State y_lo,
                        double t_hi, State y_hi,
                        const std::function<double(const State&)>& g,
                        double g_polish_tol) {
  double g_hi = g(y_hi);
  while (t_hi - t_lo > 1e-13 &&
         (t_hi - t_lo > kEventTimeTol ||
          (g_polish_tol > 0.0 && std::abs(g_hi) > g_polish_tol))) {
    const double t_mid = 0.5 * (t_lo + t_hi);
    State y_mid = integrate_to(sys, t_lo, y_lo, t_mid);
    const double g_mid = g(y_mid);
    if (g_mid >= 0.0) {
      t_hi = t_mid;
      y_hi = y_mid;
      g_hi = g_mid;
    } else {
      t_lo = t_mid;
      y_lo = y_mid;
    }
  }
  return EventPoint{t_hi, y_hi};
}

void append_point(JumpTrace* trace, const TwoMassSystem& sys, double t,
                  const State& y) {
  const double dy = sys.l0 - (y[2] - y[0]);
  const TracePoint point{t, y[0], y[2], y[1], y[3], sys.spring(dy)};
  if (!trace->points.empty() && !(t > trace->points.back().t_s)) {
    trace->points.back() = point;
    return;
  }
  trace->points.push_back(point);
}

}  // namespace

void JumperConfig::validate() const {
  design.validate();
  profile.validate();
  std::ostringstream msg;
  if (!(m1_kg > 0.0) || !(m2_kg > 0.0)) {
    msg << "masses must be > 0 (m1=" << m1_kg << ", m2=" << m2_kg << " kg)";
    throw ConfigError(msg.str());
  }
  const double dy_full = full_fold_displacement_m(design);
  if (!(dy0_m >= 0.0) || !(dy0_m <= dy_full)) {
    msg << "initial compression dy0 = " << dy0_m << " m outside [0, "
        << dy_full << "] m";
    throw ConfigError(msg.str());
  }
  if (!(eta > 0.0) || !(eta <= 1.0)) {
    msg << "efficiency ratio eta = " << eta << " outside (0, 1]";
    throw ConfigError(msg.str());
  }
  if (!(g_mps2 > 0.0) || !(t_max_s > 0.0) || !(F_cap_N > 0.0)) {
    msg << "g, t_max and F_cap must be > 0 (g=" << g_mps2
        << " m/s^2, t_max=" << t_max_s << " s, F_cap=" << F_cap_N << " N)";
    throw ConfigError(msg.str());
  }
}

DampingParams equivalent_damping(const JumperConfig& config,
                                 double k_eq_N_per_m) {
  if (!(k_eq_N_per_m >= 0.0)) {
    std::ostringstream msg;
    msg << "equivalent stiffness must be >= 0, got " << k_eq_N_per_m
        << " N/m";
    throw ComputationError(msg.str());
  }
  DampingParams params;
  params.zeta_eq = 0.25 * (1.0 - config.eta) / kPi;
  params.omega_n_rad_per_s =
      std::sqrt(k_eq_N_per_m * (config.m1_kg + config.m2_kg) /
                (config.m1_kg * config.m2_kg));
  params.C_Ns_per_m =
      2.0 * (config.m1_kg + config.m2_kg) * params.zeta_eq *
      params.omega_n_rad_per_s;
  return params;
}

JumpResult simulate(const JumperConfig& config) {
  config.validate();
  const TmpSpringLaw law(config.design, config.profile, config.F_cap_N,
                         config.clamp_tension_at_flat_limit);
  const double k_eq =
      config.dy0_m > 0.0 ? law.force(config.dy0_m).F_N / config.dy0_m : 0.0;
  return simulate(config, law, k_eq);
}

JumpResult simulate(const JumperConfig& config, const SpringLaw& law,
                    double k_eq_for_damping_N_per_m) {
  config.validate();
  const DampingParams damping =
      equivalent_damping(config, k_eq_for_damping_N_per_m);
  const double l0 = resting_height_m(config.design);
  const double g_grav = config.g_mps2;

  SpringFlags flags;
  TwoMassSystem sys;
  sys.spring = SpringProbe{&law, &flags};
  sys.m1 = config.m1_kg;
  sys.m2 = config.m2_kg;
  sys.g = g_grav;
  sys.C = damping.C_Ns_per_m;
  sys.l0 = l0;
  sys.grounded = true;

  JumpResult result;
  JumpTrace& trace = result.trace;

  State y{0.0, 0.0, l0 - config.dy0_m, 0.0};
  double t = 0.0;
  double h = kStepInit;
  append_point(&trace, sys, t, y);

  // Pre-jump: m1 stays pinned until the spring pulls up harder than its
  // weight.
  const auto takeoff_gap = [&](const State& s) {
    return -sys.spring(l0 - s[2]) - sys.m1 * g_grav;
  };
  double gap_prev = takeoff_gap(y);
  bool took_off = false;
  while (t < config.t_max_s) {
    const double t_before = t;
    const State y_before = y;
    rk45_step(sys, &t, &y, &h, config.t_max_s);
    const double gap_now = takeoff_gap(y);
    if (gap_prev < 0.0 && gap_now >= 0.0) {
      const EventPoint event = refine_event(sys, t_before, y_before, t, y,
                                            takeoff_gap, kTakeoffForceTol);
      t = event.t;
      y = event.y;
      took_off = true;
      append_point(&trace, sys, t, y);
      break;
    }
    gap_prev = gap_now;
    append_point(&trace, sys, t, y);
  }
  if (!took_off) {
    std::ostringstream msg;
    msg << "take-off condition not met within " << config.t_max_s
        << " s (peak spring tension " << flags.peak_tension_N
        << " N vs required > " << config.m1_kg * g_grav << " N)";
    throw NoTakeoff(msg.str(), flags.peak_tension_N);
  }

  trace.t_takeoff_s = t;
  const double dy_takeoff = l0 - y[2];
  result.metrics.t_takeoff_s = t;
  result.metrics.takeoff_velocity_cg_mps =
      (config.m1_kg * y[1] + config.m2_kg * y[3]) /
      (config.m1_kg + config.m2_kg);
  result.metrics.energy_released_J =
      law_energy_J(law, config.dy0_m) - law_energy_J(law, dy_takeoff);

  // Flight: both masses free, coupled through the spring and damper.
  sys.grounded = false;
  const double t_flight_limit = t + kFlightBudget;
  double clearance = 0.0;
  double v1_prev = y[1];
  h = kStepInit;
  bool landed = false;
  while (!landed) {
    if (t >= t_flight_limit) {
      throw ComputationError(
          "flight phase did not return to the ground within its budget");
    }
    const double t_before = t;
    const State y_before = y;
    rk45_step(sys, &t, &y, &h, t_flight_limit);

    // Apex of the lower mass: v1 sign change, refined so the reported
    // clearance is the true maximum rather than a step endpoint.
    if (v1_prev > 0.0 && y[1] <= 0.0) {
      const EventPoint apex =
          refine_event(sys, t_before, y_before, t, y,
                       [](const State& s) { return -s[1]; }, -1.0);
      clearance = std::max(clearance, apex.y[0]);
      append_point(&trace, sys, apex.t, apex.y);
    }

    // Landing: y1 returns to the ground from above.
    if (y_before[0] >= 0.0 && y[0] < 0.0) {
      const EventPoint touch =
          refine_event(sys, t_before, y_before, t, y,
                       [](const State& s) { return -s[0]; }, -1.0);
      t = touch.t;
      y = touch.y;
      landed = true;
    }

    clearance = std::max(clearance, y[0]);
    v1_prev = y[1];
    append_point(&trace, sys, t, y);
  }

  trace.t_land_s = t;
  trace.kinematic_range_exceeded = flags.out_of_range;
  trace.force_capped = flags.capped;
  result.metrics.t_land_s = t;
  result.metrics.airtime_s = t - trace.t_takeoff_s;
  result.metrics.clearance_m = clearance;
  return result;
}

std::vector<std::pair<double, double>> cg_trajectory(
    const JumpTrace& trace, const JumperConfig& config) {
  std::vector<std::pair<double, double>> cg;
  cg.reserve(trace.points.size());
  const double total = config.m1_kg + config.m2_kg;
  for (const TracePoint& p : trace.points) {
    cg.emplace_back(p.t_s,
                    (config.m1_kg * p.y1_m + config.m2_kg * p.y2_m) / total);
  }
  return cg;
}

void write_trace_csv(const JumpTrace& trace, std::ostream& os) {
  os << "t_s,y1_m,y2_m,v1_mps,v2_mps,F_N\n";
  for (const TracePoint& p : trace.points) {
    os << format_sig15(p.t_s) << ',' << format_sig15(p.y1_m) << ','
       << format_sig15(p.y2_m) << ',' << format_sig15(p.v1_mps) << ','
       << format_sig15(p.v2_mps) << ',' << format_sig15(p.F_N) << '\n';
  }
}

}  // namespace tmp
