#ifndef TMP_PALEO_HPP
#define TMP_PALEO_HPP

// Reduction of PALEO crease bending measurements to torsional stiffness.
//
// A PALEO specimen (plastically annealed lamina emergent origami crease) is
// loaded at the free facet's endpoint; from the perpendicular force
// component, the perpendicular moment arm and the angular deflection the
// torsional stiffness follows as
//   k_theta = F_perp * d_perp / (theta0 - theta_l)
// and normalizing by the crease length gives the per-unit-length stiffness
//   k_hat = k_theta / sample_length
// that the TMP force model consumes.

#include <iosfwd>
#include <string>
#include <vector>

namespace tmp {

struct CreaseMeasurement {
  double F_perp_N = 0.0;         // perpendicular load component
  double d_perp_m = 0.0;         // perpendicular moment arm
  double theta0_rad = 0.0;       // resting crease angle (90 deg nominal)
  double theta_l_rad = 0.0;      // loaded crease angle (< theta0)
  double sample_length_m = 0.0;  // crease length of the specimen

  void validate() const;  // throws ConfigError
};

// k_theta = F_perp * d_perp / (theta0 - theta_l).
// Throws DegenerateDeflection when the deflection is <= 1e-6 rad.
double torsional_stiffness_Nm_per_rad(const CreaseMeasurement& measurement);

// k_hat = k_theta / sample_length. Throws ConfigError for lengths <= 0.
double per_unit_length_N_per_rad(double k_theta_Nm_per_rad,
                                 double sample_length_m);

enum class StiffnessTrend { flat, stiffening, softening, mixed };

const char* trend_name(StiffnessTrend trend);

struct AngleStiffnessRecord {
  double theta_l_rad = 0.0;
  double k_theta_Nm_per_rad = 0.0;
  double k_hat_N_per_rad = 0.0;
};

struct StiffnessReport {
  std::vector<AngleStiffnessRecord> records;  // sorted by loaded angle
  StiffnessTrend trend = StiffnessTrend::flat;
};

// Per-measurement stiffness records sorted by loaded angle, plus a trend
// flag: "stiffening" when k_theta grows as the angle decreases (the typical
// fold-limit behavior), "softening" for the opposite, "flat" when constant.
// Requires >= 2 measurements (ConfigError otherwise).
StiffnessReport stiffness_vs_angle_report(
    const std::vector<CreaseMeasurement>& measurements);

// CSV input with header `F_perp_N,d_perp_m,theta0_deg,theta_l_deg,length_m`
// (degrees at this boundary only; radians everywhere else).
std::vector<CreaseMeasurement> read_measurements_csv(std::istream& is);

// JSON report: array of {theta_l_deg, k_theta_Nm_per_rad, k_hat_N_per_rad}
// plus the trend flag.
std::string report_to_json(const StiffnessReport& report);

}  // namespace tmp

#endif  // TMP_PALEO_HPP
