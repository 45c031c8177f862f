#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tmp/errors.hpp"
#include "tmp/kinematics.hpp"

using namespace tmp;

namespace {

// Baseline design used across the regression values: N=8, alpha=40 deg,
// c=d=l=m=30 mm, thetaM0=60 deg.
TmpDesign baseline() { return TmpDesign{}; }

}  // namespace

TEST_CASE("resting height and displacement limits") {
  const TmpDesign design = baseline();
  const double h0 = resting_height_m(design);
  CHECK(h0 == doctest::Approx(0.20784609690826525).epsilon(1e-13));
  CHECK(full_fold_displacement_m(design) == h0);
  // Flat extension sits exactly N*d below full folding.
  CHECK(full_fold_displacement_m(design) -
            flat_extension_displacement_m(design) ==
        doctest::Approx(design.N * design.d_m).epsilon(1e-13));
  CHECK(flat_extension_displacement_m(design) < 0.0);
}

TEST_CASE("fold state at rest") {
  const TmpDesign design = baseline();
  const FoldState rest = resting_state(design);
  CHECK(rest.dy_m == 0.0);
  CHECK(rest.thetaM_rad == doctest::Approx(design.thetaM0_rad).epsilon(1e-14));
  CHECK(rest.thetaG_rad ==
        doctest::Approx(0.7944905006282267).epsilon(1e-13));
  CHECK(rest.thetaS_rad ==
        doctest::Approx(0.924945929079281).epsilon(1e-13));
}

TEST_CASE("fold state at a compressed displacement") {
  const TmpDesign design = baseline();
  const FoldState state = fold_state_from_displacement(design, 0.110);
  CHECK(state.thetaM_rad ==
        doctest::Approx(0.4199251097433806).epsilon(1e-13));
  CHECK(state.dy_m == 0.110);

  // Sub-fold angle at the displacement that puts thetaM at 50 deg.
  const double dy50 = design.N * design.d_m *
                      (std::sin(design.thetaM0_rad) - std::sin(deg2rad(50)));
  const FoldState at50 = fold_state_from_displacement(design, dy50);
  CHECK(at50.thetaM_rad == doctest::Approx(deg2rad(50)).epsilon(1e-13));
  CHECK(at50.thetaS_rad ==
        doctest::Approx(0.7399163848566686).epsilon(1e-13));
}

TEST_CASE("angle coupling identities hold along the fold path") {
  const TmpDesign design = baseline();
  const double dy_full = full_fold_displacement_m(design);
  for (int i = 0; i <= 100; ++i) {
    const double dy = dy_full * i / 100.0;
    const FoldState state = fold_state_from_displacement(design, dy);
    CHECK(std::tan(state.thetaG_rad / 2.0) ==
          doctest::Approx(std::tan(design.alpha_rad) *
                          std::cos(state.thetaM_rad))
              .epsilon(1e-12));
    CHECK(std::sin(state.thetaG_rad / 2.0) ==
          doctest::Approx(std::sin(design.alpha_rad) *
                          std::cos(state.thetaS_rad))
              .epsilon(1e-12));
  }
}

TEST_CASE("angles are monotone in the compression") {
  const TmpDesign design = baseline();
  const double dy_full = full_fold_displacement_m(design);
  FoldState prev = fold_state_from_displacement(design, 0.0);
  for (int i = 1; i <= 100; ++i) {
    const FoldState state =
        fold_state_from_displacement(design, dy_full * i / 100.0);
    CHECK(state.thetaM_rad < prev.thetaM_rad);
    CHECK(state.thetaS_rad < prev.thetaS_rad);
    CHECK(state.thetaG_rad > prev.thetaG_rad);
    prev = state;
  }
}

TEST_CASE("displacement round trips through the fold angles") {
  const TmpDesign design = baseline();
  const double dy_full = full_fold_displacement_m(design);
  for (int i = 0; i <= 50; ++i) {
    const double dy = dy_full * i / 50.0;
    const FoldState state = fold_state_from_displacement(design, dy);
    const double dy_back =
        design.N * design.d_m *
        (std::sin(design.thetaM0_rad) - std::sin(state.thetaM_rad));
    CHECK(std::abs(dy - dy_back) < 1e-12);
  }
}

TEST_CASE("folding ratio maps to displacement and back") {
  const TmpDesign design = baseline();
  CHECK(displacement_from_folding_ratio(design, 0.75) ==
        doctest::Approx(0.11600207314064372).epsilon(1e-13));
  CHECK(displacement_from_folding_ratio(design, 1.0) ==
        doctest::Approx(full_fold_displacement_m(design)).epsilon(1e-14));
  // The resting angle 60 deg corresponds to RF = 1/3; below that the target
  // angle exceeds the resting angle.
  CHECK(displacement_from_folding_ratio(design, 1.0 / 3.0) ==
        doctest::Approx(0.0).epsilon(1e-12));

  for (int i = 0; i <= 40; ++i) {
    const double RF = 1.0 / 3.0 + (1.0 - 1.0 / 3.0) * i / 40.0;
    const double dy = displacement_from_folding_ratio(design, RF);
    const FoldState state = fold_state_from_displacement(design, dy);
    CHECK(std::abs(folding_ratio_from_angle(state.thetaM_rad) - RF) < 1e-10);
  }
}

TEST_CASE("folding ratio range errors") {
  const TmpDesign design = baseline();
  CHECK_THROWS_AS(displacement_from_folding_ratio(design, -0.01),
                  FoldingRatioOutOfRange);
  CHECK_THROWS_AS(displacement_from_folding_ratio(design, 1.01),
                  FoldingRatioOutOfRange);
  // Ratios below 1/3 ask for extension past the 60 deg resting angle.
  CHECK_THROWS_AS(displacement_from_folding_ratio(design, 0.2),
                  InfeasibleRatio);
  CHECK_THROWS_AS(displacement_from_folding_ratio(design, 0.0),
                  InfeasibleRatio);
}

TEST_CASE("displacement range errors") {
  const TmpDesign design = baseline();
  const double dy_full = full_fold_displacement_m(design);
  const double dy_flat = flat_extension_displacement_m(design);
  CHECK_THROWS_AS(fold_state_from_displacement(design, -1e-9),
                  DisplacementOutOfRange);
  CHECK_THROWS_AS(fold_state_from_displacement(design, dy_full + 1e-9),
                  DisplacementOutOfRange);
  // The extended mapping reaches into tension but stops at flat extension.
  CHECK(fold_state_extended(design, -0.02).thetaM_rad > design.thetaM0_rad);
  CHECK_THROWS_AS(fold_state_extended(design, dy_flat),
                  DisplacementOutOfRange);
  CHECK_THROWS_AS(fold_state_extended(design, dy_flat - 1e-9),
                  DisplacementOutOfRange);
  CHECK_THROWS_AS(fold_state_extended(design, dy_full + 1e-9),
                  DisplacementOutOfRange);
}

TEST_CASE("extended and compression-only mappings agree where both exist") {
  const TmpDesign design = baseline();
  const double dy_full = full_fold_displacement_m(design);
  for (int i = 0; i <= 20; ++i) {
    const double dy = dy_full * i / 20.0;
    const FoldState a = fold_state_from_displacement(design, dy);
    const FoldState b = fold_state_extended(design, dy);
    CHECK(a.thetaM_rad == b.thetaM_rad);
    CHECK(a.thetaS_rad == b.thetaS_rad);
  }
}

TEST_CASE("design validation") {
  TmpDesign design = baseline();
  design.N = 0;
  CHECK_THROWS_AS(design.validate(), InvalidDesign);
  design = baseline();
  design.d_m = 0.0;
  CHECK_THROWS_AS(design.validate(), InvalidDesign);
  design = baseline();
  design.alpha_rad = 0.0;
  CHECK_THROWS_AS(design.validate(), InvalidDesign);
  design = baseline();
  design.alpha_rad = kPi / 2.0;
  CHECK_THROWS_AS(design.validate(), InvalidDesign);
  design = baseline();
  design.thetaM0_rad = deg2rad(95.0);
  CHECK_THROWS_AS(design.validate(), InvalidDesign);
  design = baseline();
  design.kM_hat_N_per_rad = -1e-9;
  CHECK_THROWS_AS(design.validate(), InvalidDesign);
  CHECK_NOTHROW(baseline().validate());
}

TEST_CASE("crease lengths") {
  const TmpDesign design = baseline();
  const CreaseLengths lengths = crease_lengths(design);
  CHECK(lengths.main_m ==
        doctest::Approx(design.l_m + design.m_m + design.c_m)
            .epsilon(1e-15));
  CHECK(lengths.sub_m ==
        doctest::Approx(design.d_m / std::sin(design.alpha_rad))
            .epsilon(1e-15));
  CHECK(lengths.main_m == doctest::Approx(0.090).epsilon(1e-13));
}
