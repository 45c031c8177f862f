#include "tmp/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tmp/errors.hpp"

namespace tmp {

namespace {

std::string invalid_design_message(const TmpDesign& d) {
  std::ostringstream msg;
  if (d.N < 1) {
    msg << "N must be >= 1, got " << d.N;
  } else if (!(d.c_m > 0.0) || !(d.d_m > 0.0) || !(d.l_m > 0.0) ||
             !(d.m_m > 0.0)) {
    msg << "all crease lengths must be > 0 (c=" << d.c_m << ", d=" << d.d_m
        << ", l=" << d.l_m << ", m=" << d.m_m << " m)";
  } else if (!(d.alpha_rad > 0.0) || !(d.alpha_rad < kPi / 2.0)) {
    msg << "alpha must lie in (0, pi/2), got " << d.alpha_rad << " rad";
  } else if (!(d.thetaM0_rad > 0.0) || !(d.thetaM0_rad < kPi / 2.0)) {
    msg << "thetaM0 must lie in (0, pi/2), got " << d.thetaM0_rad << " rad";
  } else {
    msg << "crease stiffnesses must be >= 0 (kM_hat=" << d.kM_hat_N_per_rad
        << ", kS_hat=" << d.kS_hat_N_per_rad << " N/rad)";
  }
  return msg.str();
}

}  // namespace

void TmpDesign::validate() const {
  // Keep the happy path allocation-free: this runs inside force-evaluation
  // loops.
  const bool ok = N >= 1 && c_m > 0.0 && d_m > 0.0 && l_m > 0.0 && m_m > 0.0 &&
                  alpha_rad > 0.0 && alpha_rad < kPi / 2.0 &&
                  thetaM0_rad > 0.0 && thetaM0_rad < kPi / 2.0 &&
                  kM_hat_N_per_rad >= 0.0 && kS_hat_N_per_rad >= 0.0;
  if (!ok) {
    throw InvalidDesign(invalid_design_message(*this));
  }
}

double resting_height_m(const TmpDesign& design) {
  return design.N * design.d_m * std::sin(design.thetaM0_rad);
}

double full_fold_displacement_m(const TmpDesign& design) {
  return design.N * design.d_m * std::sin(design.thetaM0_rad);
}

double flat_extension_displacement_m(const TmpDesign& design) {
  return design.N * design.d_m * (std::sin(design.thetaM0_rad) - 1.0);
}

FoldState fold_state_unchecked(const TmpDesign& design, double dy_m) {
  // asin/acos arguments are within [-1, 1] whenever dy is in the extended
  // displacement range; the clamps only absorb last-ulp rounding at the
  // interval endpoints.
  const double asin_arg =
      std::sin(design.thetaM0_rad) - dy_m / (design.N * design.d_m);
  FoldState state;
  state.thetaM_rad = std::asin(std::clamp(asin_arg, -1.0, 1.0));
  state.thetaG_rad =
      2.0 * std::atan(std::tan(design.alpha_rad) * std::cos(state.thetaM_rad));
  const double acos_arg =
      std::sin(state.thetaG_rad / 2.0) / std::sin(design.alpha_rad);
  state.thetaS_rad = std::acos(std::clamp(acos_arg, -1.0, 1.0));
  state.dy_m = dy_m;
  return state;
}

FoldState resting_state(const TmpDesign& design) {
  design.validate();
  return fold_state_unchecked(design, 0.0);
}

FoldState fold_state_from_displacement(const TmpDesign& design, double dy_m) {
  design.validate();
  const double dy_full = full_fold_displacement_m(design);
  if (!(dy_m >= 0.0) || !(dy_m <= dy_full)) {
    std::ostringstream msg;
    msg << "dy = " << dy_m << " m outside [0, " << dy_full << "] m";
    throw DisplacementOutOfRange(msg.str());
  }
  return fold_state_unchecked(design, dy_m);
}

FoldState fold_state_extended(const TmpDesign& design, double dy_m) {
  design.validate();
  const double dy_full = full_fold_displacement_m(design);
  const double dy_flat = flat_extension_displacement_m(design);
  if (!(dy_m > dy_flat) || !(dy_m <= dy_full)) {
    std::ostringstream msg;
    msg << "dy = " << dy_m << " m outside (" << dy_flat << ", " << dy_full
        << "] m";
    throw DisplacementOutOfRange(msg.str());
  }
  return fold_state_unchecked(design, dy_m);
}

double displacement_from_folding_ratio(const TmpDesign& design, double RF) {
  design.validate();
  if (!(RF >= 0.0) || !(RF <= 1.0)) {
    std::ostringstream msg;
    msg << "folding ratio " << RF << " outside [0, 1]";
    throw FoldingRatioOutOfRange(msg.str());
  }
  const double thetaMf = (1.0 - RF) * kPi / 2.0;
  // The boundary ratio hitting thetaM0 exactly is legal (zero compression),
  // but its round trip through (1 - RF) * pi/2 can overshoot the resting
  // angle by a few ulp; absorb that before declaring the ratio infeasible.
  if (thetaMf > design.thetaM0_rad + 1e-9) {
    std::ostringstream msg;
    msg << "folding ratio " << RF << " targets thetaM = " << thetaMf
        << " rad above the resting angle " << design.thetaM0_rad
        << " rad (would require extension)";
    throw InfeasibleRatio(msg.str());
  }
  if (thetaMf >= design.thetaM0_rad) {
    return 0.0;
  }
  return design.N * design.d_m *
         (std::sin(design.thetaM0_rad) - std::sin(thetaMf));
}

double folding_ratio_from_angle(double thetaMf_rad) {
  return (kPi / 2.0 - thetaMf_rad) / (kPi / 2.0);
}

CreaseLengths crease_lengths(const TmpDesign& design) {
  design.validate();
  CreaseLengths lengths;
  lengths.main_m = design.l_m + design.m_m + design.c_m;
  lengths.sub_m = design.d_m / std::sin(design.alpha_rad);
  return lengths;
}

}  // namespace tmp
