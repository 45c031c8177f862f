#ifndef TMP_DYNAMICS_HPP
#define TMP_DYNAMICS_HPP

// Two-mass jump dynamics.
//
// The jumper is a payload mass m2 on top of the TMP spring and a base mass
// m1 underneath. Compressed by dy0 and released at t = 0:
//
//   Pre-jump  (m1 pinned to the ground):
//       m2 * y2'' = F(l0 - y2) - m2*g - C*y2'
//   Take-off when the spring force turns tensile with magnitude > m1*g.
//   Flight (coupled pair, relative-displacement spring + damper):
//       m1 * y1'' = -F(dy) - m1*g + C*(y2' - y1')
//       m2 * y2'' =  F(dy) - m2*g - C*(y2' - y1')
//   with dy = l0 - (y2 - y1), l0 = N*d*sin(thetaM0).
//   Landing when y1 returns to 0 from above.
//
// The damper coefficient C models measured hysteresis via the efficiency
// ratio eta: zeta_eq = 0.25*(1-eta)/pi, omega_n = sqrt(k_eq*(m1+m2)/(m1*m2)),
// C = 2*(m1+m2)*zeta_eq*omega_n, with k_eq the equivalent linear coefficient
// at the initial compression.
//
// Integration: adaptive embedded Runge-Kutta 4(5) (Dormand-Prince pair),
// rtol 1e-9 / atol 1e-12; events are localized by bisection to |dt| < 1e-8 s.

#include <iosfwd>
#include <utility>
#include <vector>

#include "tmp/stiffness.hpp"

namespace tmp {

struct JumperConfig {
  TmpDesign design;
  CreaseProfile profile;
  double m1_kg = 0.0177;  // lower (base) mass
  double m2_kg = 0.0176;  // upper (payload) mass
  double dy0_m = 0.110;   // initial compression
  double eta = 1.0;       // efficiency ratio feeding the damping model
  double g_mps2 = 9.81;
  double t_max_s = 5.0;   // pre-jump budget before declaring NoTakeoff
  double F_cap_N = 1e6;   // force clamp outside/near the kinematic limits
  bool clamp_tension_at_flat_limit = true;

  // Throws InvalidDesign/ConfigError on nonpositive masses, dy0 outside the
  // design's compression range, or eta outside (0, 1].
  void validate() const;
};

struct DampingParams {
  double zeta_eq = 0.0;             // equivalent damping ratio
  double omega_n_rad_per_s = 0.0;   // equivalent natural frequency
  double C_Ns_per_m = 0.0;          // damper coefficient
};

// Damping parameters for a given equivalent linear coefficient k_eq.
DampingParams equivalent_damping(const JumperConfig& config,
                                 double k_eq_N_per_m);

struct TracePoint {
  double t_s = 0.0;
  double y1_m = 0.0;
  double y2_m = 0.0;
  double v1_mps = 0.0;
  double v2_mps = 0.0;
  double F_N = 0.0;  // spring force at this instant
};

struct JumpTrace {
  std::vector<TracePoint> points;  // strictly increasing in t
  double t_takeoff_s = 0.0;
  double t_land_s = 0.0;
  bool kinematic_range_exceeded = false;  // relative displacement left the
                                          // valid fold range during flight
  bool force_capped = false;              // any force evaluation hit F_cap
};

struct JumpMetrics {
  double airtime_s = 0.0;        // t_land - t_takeoff
  double clearance_m = 0.0;      // max height of the lower mass
  double takeoff_velocity_cg_mps = 0.0;
  double energy_released_J = 0.0;  // spring energy released up to take-off
  double t_takeoff_s = 0.0;
  double t_land_s = 0.0;
};

struct JumpResult {
  JumpTrace trace;
  JumpMetrics metrics;
};

// Simulates with the TMP spring law built from config.design/profile.
// Throws NoTakeoff when the take-off condition is not met within t_max_s.
JumpResult simulate(const JumperConfig& config);

// Same, but with an explicit spring law (e.g. LinearSpringLaw for the
// equivalent-linear comparison). k_eq_for_damping_N_per_m fixes the damper
// coefficient so that law substitutions keep C identical.
JumpResult simulate(const JumperConfig& config, const SpringLaw& law,
                    double k_eq_for_damping_N_per_m);

// Center-of-gravity height series: y_cg = (m1*y1 + m2*y2) / (m1+m2).
std::vector<std::pair<double, double>> cg_trajectory(
    const JumpTrace& trace, const JumperConfig& config);

// CSV with header `t_s,y1_m,y2_m,v1_mps,v2_mps,F_N`.
void write_trace_csv(const JumpTrace& trace, std::ostream& os);

}  // namespace tmp

#endif  // TMP_DYNAMICS_HPP
