#include "tmp/stiffness.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "tmp/errors.hpp"
#include "tmp/io_util.hpp"

namespace tmp {

namespace {

constexpr double kCosSingularTol = 1e-9;  // |cos thetaM| below this: singular
constexpr double kThetaSLimitTol = 1e-7;  // thetaS below this: use the limit

// Force law evaluated at a precomputed fold state, given the resting state.
// Both states must belong to `design`; no range checks here.
double force_at_state(const TmpDesign& design, const CreaseProfile& profile,
                      const FoldState& state, const FoldState& rest) {
  const double kM = effective_stiffness(profile, state.thetaM_rad,
                                        CreaseKind::main);
  const double kS = effective_stiffness(profile, state.thetaS_rad,
                                        CreaseKind::sub);
  const double g = sub_fold_rate(design, state);
  const double main_term = kM * (design.N - 1.0) / design.N *
                           (state.thetaM_rad - rest.thetaM_rad);
  const double sub_term = kS * g * (state.thetaS_rad - rest.thetaS_rad);
  return -32.0 / (design.d_m * std::cos(state.thetaM_rad)) *
         (main_term + sub_term);
}

}  // namespace

void CreaseProfile::validate() const {
  const bool ok = theta1_rad > 0.0 && theta1_rad < theta2_rad &&
                  theta2_rad < kPi / 2.0 && kM0_Nm_per_rad >= 0.0 &&
                  kS0_Nm_per_rad >= 0.0;
  if (!ok) {
    std::ostringstream msg;
    msg << "crease profile requires 0 < theta1 < theta2 < pi/2 and "
           "nonnegative base coefficients (theta1="
        << theta1_rad << ", theta2=" << theta2_rad << " rad, kM0="
        << kM0_Nm_per_rad << ", kS0=" << kS0_Nm_per_rad << " N*m/rad)";
    throw InvalidDesign(msg.str());
  }
}

CreaseProfile make_crease_profile(const TmpDesign& design, double theta1_rad,
                                  double theta2_rad) {
  const CreaseLengths lengths = crease_lengths(design);
  CreaseProfile profile;
  profile.theta1_rad = theta1_rad;
  profile.theta2_rad = theta2_rad;
  profile.kM0_Nm_per_rad = design.kM_hat_N_per_rad * lengths.main_m;
  profile.kS0_Nm_per_rad = design.kS_hat_N_per_rad * lengths.sub_m;
  profile.validate();
  return profile;
}

double fold_limit_factor(double theta_rad, double theta1_rad,
                         double theta2_rad) {
  if (!(theta_rad >= 0.0) || !(theta_rad < kPi)) {
    std::ostringstream msg;
    msg << "fold angle " << theta_rad << " rad outside [0, pi)";
    throw ThetaOutOfRange(msg.str());
  }
  if (theta_rad < theta1_rad) {
    const double sec = 1.0 / std::cos(kPi * (theta_rad - theta1_rad) /
                                      (3.5 * theta1_rad));
    return sec * sec;
  }
  if (theta_rad > theta2_rad) {
    const double sec = 1.0 / std::cos(kPi * (theta_rad - theta2_rad) /
                                      (2.0 * kPi - 3.5 * theta2_rad));
    return sec * sec;
  }
  return 1.0;
}

double effective_stiffness(const CreaseProfile& profile, double theta_rad,
                           CreaseKind which) {
  const double base = which == CreaseKind::main ? profile.kM0_Nm_per_rad
                                                : profile.kS0_Nm_per_rad;
  return base *
         fold_limit_factor(theta_rad, profile.theta1_rad, profile.theta2_rad);
}

double sub_fold_rate(const TmpDesign& design, const FoldState& state) {
  // g = cos^3(thetaG/2) * sin(thetaM) / (cos(alpha) * sin(thetaS)) equals
  // d(thetaS)/d(thetaM); at full folding both sin factors vanish and the
  // ratio tends to cos(alpha).
  if (state.thetaS_rad < kThetaSLimitTol) {
    return std::cos(design.alpha_rad);
  }
  const double cos_half_g = std::cos(state.thetaG_rad / 2.0);
  return cos_half_g * cos_half_g * cos_half_g * std::sin(state.thetaM_rad) /
         (std::cos(design.alpha_rad) * std::sin(state.thetaS_rad));
}

double reaction_force(const TmpDesign& design, const CreaseProfile& profile,
                      double dy_m) {
  profile.validate();
  const FoldState state = fold_state_from_displacement(design, dy_m);
  if (std::abs(std::cos(state.thetaM_rad)) < kCosSingularTol) {
    std::ostringstream msg;
    msg << "force is singular at thetaM = " << state.thetaM_rad
        << " rad (cos thetaM ~ 0)";
    throw SingularConfiguration(msg.str());
  }
  return force_at_state(design, profile, state, resting_state(design));
}

TmpSpringLaw::TmpSpringLaw(const TmpDesign& design,
                           const CreaseProfile& profile, double F_cap_N,
                           bool clamp_tension)
    : design_(design),
      profile_(profile),
      F_cap_N_(F_cap_N),
      clamp_tension_(clamp_tension) {
  design_.validate();
  profile_.validate();
  if (!(F_cap_N_ > 0.0)) {
    std::ostringstream msg;
    msg << "force cap must be > 0, got " << F_cap_N_ << " N";
    throw InvalidDesign(msg.str());
  }
  dy_full_m_ = full_fold_displacement_m(design_);
  dy_flat_m_ = flat_extension_displacement_m(design_);
  rest_ = fold_state_unchecked(design_, 0.0);
}

SpringEval TmpSpringLaw::force(double dy_m) const {
  SpringEval eval;
  if (dy_m > dy_full_m_) {
    // Past full folding: the bellow is a solid block; push back at the cap.
    eval.F_N = F_cap_N_;
    eval.capped = true;
    eval.out_of_range = true;
    return eval;
  }
  if (dy_m <= dy_flat_m_) {
    // At/past flat extension the kinematics ceases to exist.
    eval.out_of_range = true;
    eval.capped = clamp_tension_;
    eval.F_N = clamp_tension_ ? -F_cap_N_ : 0.0;
    return eval;
  }
  const FoldState state = fold_state_unchecked(design_, dy_m);
  if (std::abs(std::cos(state.thetaM_rad)) < kCosSingularTol) {
    eval.F_N = dy_m >= 0.0 ? F_cap_N_ : -F_cap_N_;
    eval.capped = true;
    return eval;
  }
  eval.F_N = force_at_state(design_, profile_, state, rest_);
  if (eval.F_N > F_cap_N_) {
    eval.F_N = F_cap_N_;
    eval.capped = true;
  } else if (eval.F_N < -F_cap_N_) {
    eval.F_N = -F_cap_N_;
    eval.capped = true;
  }
  return eval;
}

ForceCurve force_curve(const TmpDesign& design, const CreaseProfile& profile,
                       double dy_max_m, int n_samples) {
  design.validate();
  profile.validate();
  if (n_samples < 2) {
    std::ostringstream msg;
    msg << "force curve needs >= 2 samples, got " << n_samples;
    throw ConfigError(msg.str());
  }
  const double dy_full = full_fold_displacement_m(design);
  if (!(dy_max_m >= 0.0) || !(dy_max_m <= dy_full)) {
    std::ostringstream msg;
    msg << "dy_max = " << dy_max_m << " m outside [0, " << dy_full << "] m";
    throw DisplacementOutOfRange(msg.str());
  }
  const FoldState rest = fold_state_unchecked(design, 0.0);
  ForceCurve curve;
  curve.samples.resize(static_cast<std::size_t>(n_samples));
  curve.dy_max_m = dy_max_m;
  for (int i = 0; i < n_samples; ++i) {
    const double dy = dy_max_m * i / (n_samples - 1.0);
    const FoldState state = fold_state_unchecked(design, dy);
    if (std::abs(std::cos(state.thetaM_rad)) < kCosSingularTol) {
      std::ostringstream msg;
      msg << "force is singular at dy = " << dy << " m (cos thetaM ~ 0)";
      throw SingularConfiguration(msg.str());
    }
    curve.samples[static_cast<std::size_t>(i)] =
        ForceSample{dy, force_at_state(design, profile, state, rest)};
  }
  curve.F_max_N = curve.samples.back().F_N;
  return curve;
}

double stored_energy_J(const ForceCurve& curve) {
  double energy = 0.0;
  for (std::size_t i = 1; i < curve.samples.size(); ++i) {
    const ForceSample& a = curve.samples[i - 1];
    const ForceSample& b = curve.samples[i];
    energy += 0.5 * (a.F_N + b.F_N) * (b.dy_m - a.dy_m);
  }
  return energy;
}

double nonlinearity_ratio(const ForceCurve& curve) {
  if (!(curve.F_max_N > 0.0) || !(curve.dy_max_m > 0.0)) {
    std::ostringstream msg;
    msg << "nonlinearity ratio undefined: F_max = " << curve.F_max_N
        << " N, dy_max = " << curve.dy_max_m << " m";
    throw DegenerateCurve(msg.str());
  }
  return stored_energy_J(curve) / (0.5 * curve.F_max_N * curve.dy_max_m);
}

double efficiency_ratio(const ForceCurve& compress,
                        const ForceCurve& release) {
  if (compress.samples.size() != release.samples.size() ||
      compress.dy_max_m != release.dy_max_m) {
    std::ostringstream msg;
    msg << "compression and release curves must share dy_max and sample "
           "count (got dy_max "
        << compress.dy_max_m << " vs " << release.dy_max_m << " m, "
        << compress.samples.size() << " vs " << release.samples.size()
        << " samples)";
    throw MismatchedCurves(msg.str());
  }
  const double stored = stored_energy_J(compress);
  if (stored == 0.0) {
    throw DegenerateCurve("compression curve stores no energy");
  }
  return stored_energy_J(release) / stored;
}

double equivalent_linear_coefficient(const ForceCurve& curve) {
  if (!(curve.dy_max_m > 0.0)) {
    std::ostringstream msg;
    msg << "equivalent stiffness undefined at dy_max = " << curve.dy_max_m
        << " m";
    throw DegenerateCurve(msg.str());
  }
  return curve.F_max_N / curve.dy_max_m;
}

double law_energy_J(const SpringLaw& law, double dy_m, int n_samples) {
  if (n_samples < 2) {
    std::ostringstream msg;
    msg << "energy integral needs >= 2 samples, got " << n_samples;
    throw ConfigError(msg.str());
  }
  // Trapezoid from 0 to dy; for dy < 0 the integration runs leftward and the
  // negated step keeps stretch energy positive.
  const double h = dy_m / (n_samples - 1.0);
  double energy = 0.0;
  double F_prev = law.force(0.0).F_N;
  for (int i = 1; i < n_samples; ++i) {
    const double F_here = law.force(dy_m * i / (n_samples - 1.0)).F_N;
    energy += 0.5 * (F_prev + F_here) * h;
    F_prev = F_here;
  }
  return energy;
}

void write_force_curve_csv(const ForceCurve& curve, std::ostream& os) {
  os << "dy_m,F_N\n";
  for (const ForceSample& sample : curve.samples) {
    os << format_sig15(sample.dy_m) << ',' << format_sig15(sample.F_N)
       << '\n';
  }
}

}  // namespace tmp
