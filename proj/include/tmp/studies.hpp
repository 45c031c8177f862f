#ifndef TMP_STUDIES_HPP
#define TMP_STUDIES_HPP

// One-at-a-time parametric sweeps over the TMP design variables.
//
// Each sweep varies a single design variable over its study range while the
// others stay at the study base design (N=8, c=d=l=m=30 mm, alpha=50 deg,
// soft main folds / stiff sub folds). For every grid point the maximum
// compression is tied to a folding-ratio target (default RF = 0.75), the
// static force curve is sampled, and -- for dynamic sweeps -- a jump with
// the TMP spring and a jump with its equivalent linear spring are simulated
// so airtime/clearance ratios isolate the effect of the stiffness shape.

#include <iosfwd>
#include <string>
#include <vector>

#include "tmp/dynamics.hpp"

namespace tmp {

enum class SweepVariable { N, d, l, m, c, alpha };

const char* variable_name(SweepVariable variable);
SweepVariable variable_from_name(const std::string& name);  // ConfigError

struct SweepRange {
  double lo = 0.0;
  double hi = 0.0;
};

// Study base design: soft main folds, stiff sub folds.
TmpDesign default_sweep_base();

// Default study range of one variable: N in [6, 10], lengths in [20, 40] mm,
// alpha in [30, 70] deg.
SweepRange default_range(SweepVariable variable);

struct SweepSpec {
  TmpDesign base_design = default_sweep_base();
  double theta1_rad = deg2rad(38.0);
  double theta2_rad = deg2rad(70.0);
  SweepVariable variable = SweepVariable::alpha;
  SweepRange range;        // defaults to default_range(variable) when lo==hi
  int count = 9;           // grid points for continuous variables
  double RF_target = 0.75;
  int n_samples = 2001;    // force-curve resolution
  // Dynamic-sweep inputs (ignored by static sweeps):
  double m1_kg = 0.0177;
  double m2_kg = 0.0176;
  double eta = 1.0;
  double g_mps2 = 9.81;

  // Throws ConfigError on an empty/invalid grid or RF_target outside (0, 1).
  void validate() const;
};

// The grid a spec expands to: `count` uniform points for continuous
// variables, every integer in the range for N.
std::vector<double> sweep_grid(const SweepSpec& spec);

// The base design with one variable replaced (N values are rounded).
TmpDesign apply_variable(const TmpDesign& base, SweepVariable variable,
                         double value);

struct SweepPoint {
  double variable_value = 0.0;
  double dy_max_m = 0.0;
  double F_max_N = 0.0;
  double R_n = 0.0;
  // Dynamic-sweep fields (NaN in static sweeps and on per-point failure):
  double airtime_s = 0.0;
  double clearance_m = 0.0;
  double airtime_ratio = 0.0;
  double clearance_ratio = 0.0;
  bool ok = true;
  std::string error;  // error kind when !ok; the sweep itself continues
};

struct SweepResult {
  SweepVariable variable = SweepVariable::alpha;
  bool dynamic = false;
  std::vector<SweepPoint> points;  // one per grid point, in grid order
};

// Static sweep: force curve + energy metrics per grid point. Per-point
// errors are recorded in the point and the sweep continues. jobs > 1 runs
// grid points in parallel; results are assembled in grid order so output is
// identical regardless of jobs.
SweepResult static_sweep(const SweepSpec& spec, int jobs = 1);

// Dynamic sweep (variable must be N, d or alpha): additionally simulates
// the jump at the RF-target compression for the TMP spring and for the
// equivalent linear spring (same k_eq, same damper C), recording
// airtime/clearance and their TMP/linear ratios.
SweepResult dynamic_sweep(const SweepSpec& spec, int jobs = 1);

// CSV, one row per grid point. Static sweeps write
//   variable_value,dy_max_m,F_max_N,R_n
// and dynamic sweeps append
//   airtime_s,clearance_m,airtime_ratio,clearance_ratio
// Failed points carry `nan` metric cells.
void write_sweep_csv(const SweepResult& result, std::ostream& os);

}  // namespace tmp

#endif  // TMP_STUDIES_HPP
