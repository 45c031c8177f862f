#include "tmp/studies.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "tmp/errors.hpp"
#include "tmp/io_util.hpp"

namespace tmp {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Fills the static metrics of one grid point; shared by both sweep flavors.
// Returns the curve's equivalent linear coefficient for the dynamic stage.
double fill_static_point(const SweepSpec& spec, const TmpDesign& design,
                         SweepPoint* point) {
  design.validate();
  const CreaseProfile profile =
      make_crease_profile(design, spec.theta1_rad, spec.theta2_rad);
  const double dy_max = displacement_from_folding_ratio(design,
                                                        spec.RF_target);
  const ForceCurve curve =
      force_curve(design, profile, dy_max, spec.n_samples);
  point->dy_max_m = dy_max;
  point->F_max_N = curve.F_max_N;
  point->R_n = nonlinearity_ratio(curve);
  return equivalent_linear_coefficient(curve);
}

void fill_dynamic_point(const SweepSpec& spec, const TmpDesign& design,
                        double k_eq, SweepPoint* point) {
  JumperConfig config;
  config.design = design;
  config.profile = make_crease_profile(design, spec.theta1_rad,
                                       spec.theta2_rad);
  config.m1_kg = spec.m1_kg;
  config.m2_kg = spec.m2_kg;
  config.dy0_m = point->dy_max_m;
  config.eta = spec.eta;
  config.g_mps2 = spec.g_mps2;

  const JumpResult jump = simulate(config);
  const LinearSpringLaw linear(k_eq);
  const JumpResult linear_jump = simulate(config, linear, k_eq);

  point->airtime_s = jump.metrics.airtime_s;
  point->clearance_m = jump.metrics.clearance_m;
  point->airtime_ratio =
      jump.metrics.airtime_s / linear_jump.metrics.airtime_s;
  point->clearance_ratio =
      jump.metrics.clearance_m / linear_jump.metrics.clearance_m;
}

SweepPoint run_point(const SweepSpec& spec, double value, bool dynamic) {
  SweepPoint point;
  point.variable_value = value;
  point.dy_max_m = kNan;
  point.F_max_N = kNan;
  point.R_n = kNan;
  point.airtime_s = kNan;
  point.clearance_m = kNan;
  point.airtime_ratio = kNan;
  point.clearance_ratio = kNan;
  try {
    const TmpDesign design =
        apply_variable(spec.base_design, spec.variable, value);
    const double k_eq = fill_static_point(spec, design, &point);
    if (dynamic) {
      fill_dynamic_point(spec, design, k_eq, &point);
    }
  } catch (const Error& err) {
    point.ok = false;
    point.error = err.kind();
  }
  return point;
}

SweepRange effective_range(const SweepSpec& spec) {
  if (spec.range.lo == spec.range.hi) {
    return default_range(spec.variable);
  }
  return spec.range;
}

SweepResult run_sweep(const SweepSpec& spec, int jobs, bool dynamic) {
  spec.validate();
  if (dynamic && spec.variable != SweepVariable::N &&
      spec.variable != SweepVariable::d &&
      spec.variable != SweepVariable::alpha) {
    std::ostringstream msg;
    msg << "dynamic sweeps support variables N, d and alpha, not "
        << variable_name(spec.variable);
    throw ConfigError(msg.str());
  }

  const std::vector<double> grid = sweep_grid(spec);
  SweepResult result;
  result.variable = spec.variable;
  result.dynamic = dynamic;
  result.points.resize(grid.size());

  const int workers = std::clamp<int>(jobs, 1,
                                      static_cast<int>(grid.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      result.points[i] = run_point(spec, grid[i], dynamic);
    }
    return result;
  }

  // Work-stealing over grid indices; every point lands in its own slot, so
  // the assembled result (and any CSV of it) is identical for any jobs
  // value.
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= grid.size()) return;
        result.points[i] = run_point(spec, grid[i], dynamic);
      }
    });
  }
  for (std::thread& worker : pool) {
    worker.join();
  }
  return result;
}

void write_cell(std::ostream& os, double value) {
  os << ',' << format_sig15(value);
}

}  // namespace

const char* variable_name(SweepVariable variable) {
  switch (variable) {
    case SweepVariable::N: return "N";
    case SweepVariable::d: return "d";
    case SweepVariable::l: return "l";
    case SweepVariable::m: return "m";
    case SweepVariable::c: return "c";
    case SweepVariable::alpha: return "alpha";
  }
  return "?";
}

SweepVariable variable_from_name(const std::string& name) {
  if (name == "N") return SweepVariable::N;
  if (name == "d") return SweepVariable::d;
  if (name == "l") return SweepVariable::l;
  if (name == "m") return SweepVariable::m;
  if (name == "c") return SweepVariable::c;
  if (name == "alpha") return SweepVariable::alpha;
  throw ConfigError("unknown sweep variable: " + name);
}

TmpDesign default_sweep_base() {
  TmpDesign design;
  design.N = 8;
  design.alpha_rad = deg2rad(50.0);
  design.c_m = 0.030;
  design.d_m = 0.030;
  design.l_m = 0.030;
  design.m_m = 0.030;
  design.kM_hat_N_per_rad = 0.0186;  // soft main folds
  design.kS_hat_N_per_rad = 0.0946;  // stiff sub folds
  design.thetaM0_rad = deg2rad(60.0);
  return design;
}

SweepRange default_range(SweepVariable variable) {
  switch (variable) {
    case SweepVariable::N:
      return SweepRange{6.0, 10.0};
    case SweepVariable::alpha:
      return SweepRange{deg2rad(30.0), deg2rad(70.0)};
    default:
      return SweepRange{0.020, 0.040};
  }
}

void SweepSpec::validate() const {
  base_design.validate();
  std::ostringstream msg;
  if (count < 2) {
    msg << "sweep needs >= 2 grid points, got " << count;
    throw ConfigError(msg.str());
  }
  if (!(RF_target > 0.0) || !(RF_target < 1.0)) {
    msg << "RF target " << RF_target << " outside (0, 1)";
    throw ConfigError(msg.str());
  }
  if (n_samples < 2) {
    msg << "force-curve resolution must be >= 2, got " << n_samples;
    throw ConfigError(msg.str());
  }
  const SweepRange r = range.lo == range.hi ? SweepRange{0.0, 1.0} : range;
  if (!(r.lo < r.hi)) {
    msg << "sweep range [" << range.lo << ", " << range.hi << "] is empty";
    throw ConfigError(msg.str());
  }
}

std::vector<double> sweep_grid(const SweepSpec& spec) {
  const SweepRange range = effective_range(spec);
  std::vector<double> grid;
  if (spec.variable == SweepVariable::N) {
    // Every integer cell count in the range.
    const int lo = static_cast<int>(std::ceil(range.lo - 1e-9));
    const int hi = static_cast<int>(std::floor(range.hi + 1e-9));
    if (lo > hi) {
      std::ostringstream msg;
      msg << "N range [" << range.lo << ", " << range.hi
          << "] contains no integers";
      throw ConfigError(msg.str());
    }
    for (int n = lo; n <= hi; ++n) {
      grid.push_back(static_cast<double>(n));
    }
    return grid;
  }
  grid.reserve(static_cast<std::size_t>(spec.count));
  for (int i = 0; i < spec.count; ++i) {
    grid.push_back(range.lo +
                   (range.hi - range.lo) * i / (spec.count - 1.0));
  }
  return grid;
}

TmpDesign apply_variable(const TmpDesign& base, SweepVariable variable,
                         double value) {
  TmpDesign design = base;
  switch (variable) {
    case SweepVariable::N:
      design.N = static_cast<int>(std::lround(value));
      break;
    case SweepVariable::d:
      design.d_m = value;
      break;
    case SweepVariable::l:
      design.l_m = value;
      break;
    case SweepVariable::m:
      design.m_m = value;
      break;
    case SweepVariable::c:
      design.c_m = value;
      break;
    case SweepVariable::alpha:
      design.alpha_rad = value;
      break;
  }
  return design;
}

SweepResult static_sweep(const SweepSpec& spec, int jobs) {
  return run_sweep(spec, jobs, /*dynamic=*/false);
}

SweepResult dynamic_sweep(const SweepSpec& spec, int jobs) {
  return run_sweep(spec, jobs, /*dynamic=*/true);
}

void write_sweep_csv(const SweepResult& result, std::ostream& os) {
  os << "variable_value,dy_max_m,F_max_N,R_n";
  if (result.dynamic) {
    os << ",airtime_s,clearance_m,airtime_ratio,clearance_ratio";
  }
  os << '\n';
  for (const SweepPoint& point : result.points) {
    os << format_sig15(point.variable_value);
    write_cell(os, point.dy_max_m);
    write_cell(os, point.F_max_N);
    write_cell(os, point.R_n);
    if (result.dynamic) {
      write_cell(os, point.airtime_s);
      write_cell(os, point.clearance_m);
      write_cell(os, point.airtime_ratio);
      write_cell(os, point.clearance_ratio);
    }
    os << '\n';
  }
}

}  // namespace tmp
