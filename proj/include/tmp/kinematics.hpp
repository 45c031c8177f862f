#ifndef TMP_KINEMATICS_HPP
#define TMP_KINEMATICS_HPP

// Rigid-folding kinematics of a Tachi-Miura Polyhedron (TMP) bellow.
//
// A TMP column of N unit cells compresses by rotating its main folds (half
// dihedral angle thetaM, horizontal creases) and sub folds (half angle
// thetaS, creases inclined at alpha). The three fold angles are kinematically
// coupled, so one scalar -- the vertical compression dy -- fixes the whole
// state.
//
// Conventions (used across the whole library):
//   * SI units internally: meters, newtons, kilograms, radians.
//   * dy >= 0 means compression from the resting height h0 = N*d*sin(thetaM0);
//     dy < 0 is extension (used by the dynamics tension branch).
//   * thetaM = thetaM0 at rest, decreases to 0 when fully folded and grows
//     toward pi/2 at the flat-extension limit.

namespace tmp {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

// Crease-pattern geometry and per-unit-length crease stiffnesses of one TMP
// design. Lengths c, d, l, m follow the usual TMP pattern labels: d is the
// unit-cell height parameter, l and m the main-fold panel widths, c the
// connecting width.
struct TmpDesign {
  int N = 8;                           // number of unit cells
  double alpha_rad = deg2rad(40.0);    // sub-fold inclination angle
  double c_m = 0.030;                  // crease-pattern length c
  double d_m = 0.030;                  // unit-cell height parameter d
  double l_m = 0.030;                  // main-fold panel width l
  double m_m = 0.030;                  // main-fold panel width m
  double kM_hat_N_per_rad = 0.005;     // main-fold stiffness per unit length
  double kS_hat_N_per_rad = 0.005;     // sub-fold stiffness per unit length
  double thetaM0_rad = deg2rad(60.0);  // resting main-fold half angle

  // Throws InvalidDesign unless N >= 1, all lengths > 0, 0 < alpha < pi/2,
  // 0 < thetaM0 < pi/2 and both stiffnesses are >= 0.
  void validate() const;
};

// One kinematic configuration: the three coupled fold angles at a given
// compression. thetaG is the in-plane angle of the main-fold zigzag.
struct FoldState {
  double thetaM_rad = 0.0;
  double thetaG_rad = 0.0;
  double thetaS_rad = 0.0;
  double dy_m = 0.0;
};

// Total crease lengths entering the torsional stiffness coefficients.
struct CreaseLengths {
  double main_m = 0.0;  // l + m + c
  double sub_m = 0.0;   // d / sin(alpha)
};

// Resting height h0 = N * d * sin(thetaM0).
double resting_height_m(const TmpDesign& design);

// Largest admissible compression: dy at thetaM = 0 (fully folded),
// equal to N * d * sin(thetaM0).
double full_fold_displacement_m(const TmpDesign& design);

// Most negative admissible displacement: dy at thetaM = pi/2 (flat
// extension), equal to N * d * (sin(thetaM0) - 1) < 0. The force law is
// singular exactly at this limit.
double flat_extension_displacement_m(const TmpDesign& design);

// Fold state at rest (dy = 0, thetaM = thetaM0).
FoldState resting_state(const TmpDesign& design);

// Fold state without design validation or range checks; the caller must
// guarantee a valid design and dy inside the extended displacement range.
// Exists because spring-law hot loops evaluate this millions of times.
FoldState fold_state_unchecked(const TmpDesign& design, double dy_m);

// Fold state at a given compression dy in [0, full_fold_displacement_m].
// Throws DisplacementOutOfRange outside that interval.
FoldState fold_state_from_displacement(const TmpDesign& design, double dy_m);

// Same mapping extended to the tension branch: accepts dy in
// (flat_extension_displacement_m, full_fold_displacement_m]. Used by the
// dynamics spring law, which must evaluate tensile states.
FoldState fold_state_extended(const TmpDesign& design, double dy_m);

// Compression realizing a folding ratio RF in [0, 1], where the target final
// main-fold angle is thetaM_f = (1 - RF) * 90 deg:
//   dy = N * d * (sin(thetaM0) - sin(thetaM_f)).
// Throws FoldingRatioOutOfRange for RF outside [0, 1] and InfeasibleRatio
// when thetaM_f > thetaM0 (the ratio would require extension, not
// compression).
double displacement_from_folding_ratio(const TmpDesign& design, double RF);

// Folding ratio of a final main-fold angle: (90 deg - thetaM_f) / 90 deg.
double folding_ratio_from_angle(double thetaMf_rad);

// Total main-fold and sub-fold crease lengths (per half sheet); multiplied
// by the per-unit-length stiffnesses they give the base torsional
// coefficients kM0 = kM_hat * (l+m+c) and kS0 = kS_hat * d / sin(alpha).
CreaseLengths crease_lengths(const TmpDesign& design);

}  // namespace tmp

#endif  // TMP_KINEMATICS_HPP
