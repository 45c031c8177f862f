#ifndef TMP_STIFFNESS_HPP
#define TMP_STIFFNESS_HPP

// Nonlinear reaction force of a TMP bellow and derived energy metrics.
//
// The reaction force against compression dy combines the restoring torques
// of the main and sub folds mapped through the fold kinematics:
//
//   F = -32 / (d * cos thetaM) * [ kM * (N-1)/N * (thetaM - thetaM0)
//                                 + kS * g * (thetaS - thetaS0) ]
//
// with g = cos^3(thetaG/2) * sin(thetaM) / (cos(alpha) * sin(thetaS)), which
// equals d(thetaS)/d(thetaM). Near the fold limits theta1/theta2 the crease
// stiffnesses stiffen by a sec^2 penalty (effective_stiffness below), which
// models panel interference at deep folding and near-flat states.
//
// Sign convention: F >= 0 resists compression (dy >= 0); on the tension
// branch (dy < 0) the same law yields F <= 0.

#include <iosfwd>
#include <vector>

#include "tmp/kinematics.hpp"

namespace tmp {

// Fold-limit bounds plus the base (plateau) torsional coefficients of one
// design, as consumed by the force law.
struct CreaseProfile {
  double theta1_rad = deg2rad(38.0);  // lower fold-limit bound
  double theta2_rad = deg2rad(70.0);  // upper fold-limit bound
  double kM0_Nm_per_rad = 0.0;        // base main-fold torsional coefficient
  double kS0_Nm_per_rad = 0.0;        // base sub-fold torsional coefficient

  // Throws InvalidDesign unless 0 < theta1 < theta2 < pi/2 and both base
  // coefficients are >= 0.
  void validate() const;
};

enum class CreaseKind { main, sub };

// Builds the profile for a design: kM0/kS0 from crease_lengths and the given
// fold-limit bounds.
CreaseProfile make_crease_profile(const TmpDesign& design,
                                  double theta1_rad = deg2rad(38.0),
                                  double theta2_rad = deg2rad(70.0));

// Dimensionless fold-limit stiffening factor (continuous, >= 1, exactly 1 on
// [theta1, theta2]):
//   theta <  theta1 : sec^2( pi*(theta - theta1) / (3.5*theta1) )
//   theta >  theta2 : sec^2( pi*(theta - theta2) / (2*pi - 3.5*theta2) )
// Accepts theta in [0, pi); throws ThetaOutOfRange otherwise (theta = 0 is
// legal because the fold state reaches it at full folding).
double fold_limit_factor(double theta_rad, double theta1_rad,
                         double theta2_rad);

// Effective torsional coefficient of one crease family at fold angle theta:
// base coefficient times fold_limit_factor.
double effective_stiffness(const CreaseProfile& profile, double theta_rad,
                           CreaseKind which);

// The geometric factor g = d(thetaS)/d(thetaM) evaluated at a fold state;
// tends to cos(alpha) at full folding (thetaS -> 0).
double sub_fold_rate(const TmpDesign& design, const FoldState& state);

// Reaction force at compression dy in [0, full_fold_displacement_m].
// Throws SingularConfiguration when |cos thetaM| < 1e-9 (flat-extension
// singularity) and propagates kinematics range errors.
double reaction_force(const TmpDesign& design, const CreaseProfile& profile,
                      double dy_m);

// A single force evaluation on the extended (tension-capable) domain.
struct SpringEval {
  double F_N = 0.0;
  bool capped = false;        // |F| hit the cap (or the singular guard)
  bool out_of_range = false;  // dy was outside the valid fold range
};

// Abstract spring law used by the dynamics and study modules: force as a
// function of compression dy (same sign convention as reaction_force).
class SpringLaw {
 public:
  virtual ~SpringLaw() = default;
  virtual SpringEval force(double dy_m) const = 0;
};

// The TMP law on the extended domain. Inside (dy_flat, dy_full] it follows
// the fold kinematics (tension included), soft-clamped to |F| <= F_cap; at
// the flat-extension singularity and beyond dy_full it clamps to -/+F_cap
// with flags set, so dynamic simulations remain defined. clamp_tension
// selects what happens past the flat-extension limit: true (default) keeps
// pulling at -F_cap (a rigid tether), false releases the spring (F = 0, as
// if the bellow tore free) -- the choice only matters for violent jumps
// that overstretch the bellow in flight.
class TmpSpringLaw : public SpringLaw {
 public:
  TmpSpringLaw(const TmpDesign& design, const CreaseProfile& profile,
               double F_cap_N = 1e6, bool clamp_tension = true);
  SpringEval force(double dy_m) const override;

 private:
  TmpDesign design_;
  CreaseProfile profile_;
  double F_cap_N_;
  bool clamp_tension_;
  double dy_full_m_;
  double dy_flat_m_;
  FoldState rest_;
};

// Ideal linear spring F = k * dy (the comparison baseline for jumps).
class LinearSpringLaw : public SpringLaw {
 public:
  explicit LinearSpringLaw(double k_N_per_m) : k_N_per_m_(k_N_per_m) {}
  SpringEval force(double dy_m) const override {
    return SpringEval{k_N_per_m_ * dy_m, false, false};
  }

 private:
  double k_N_per_m_;
};

struct ForceSample {
  double dy_m = 0.0;
  double F_N = 0.0;
};

// Uniformly sampled force-displacement curve on [0, dy_max].
struct ForceCurve {
  std::vector<ForceSample> samples;
  double dy_max_m = 0.0;
  double F_max_N = 0.0;  // force at dy_max
};

// Samples the reaction force at n_samples uniform points on [0, dy_max]
// (n_samples >= 2; endpoints included). Propagates reaction_force errors.
ForceCurve force_curve(const TmpDesign& design, const CreaseProfile& profile,
                       double dy_max_m, int n_samples = 2001);

// Trapezoid integral of F over dy along the sampled curve.
double stored_energy_J(const ForceCurve& curve);

// Stored energy relative to the equivalent linear spring:
//   R_n = stored / (1/2 * F_max * dy_max).
// R_n > 1 means strain-softening (the curve lies above its chord). Throws
// DegenerateCurve when F_max <= 0.
double nonlinearity_ratio(const ForceCurve& curve);

// Ratio of released to stored energy across a compression/release pair of
// curves sharing dy_max (a measured hysteresis input; the model law itself
// is hysteresis-free). Throws MismatchedCurves when the curves do not share
// dy_max and sample count.
double efficiency_ratio(const ForceCurve& compress, const ForceCurve& release);

// Stiffness of the linear spring matching the curve's end point:
// k_eq = F_max / dy_max. Throws DegenerateCurve when dy_max <= 0.
double equivalent_linear_coefficient(const ForceCurve& curve);

// Strain energy U(dy) = integral of the law's force from 0 to dy, by
// trapezoid over n_samples uniform points; dy may be negative (tension),
// in which case the stretch energy comes out positive as expected.
double law_energy_J(const SpringLaw& law, double dy_m, int n_samples = 2001);

// CSV with header `dy_m,F_N`, 15-significant-digit decimal, LF endings.
void write_force_curve_csv(const ForceCurve& curve, std::ostream& os);

}  // namespace tmp

#endif  // TMP_STIFFNESS_HPP
