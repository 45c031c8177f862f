#include "tmp/paleo.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>

#include <json.hpp>

#include "tmp/errors.hpp"
#include "tmp/kinematics.hpp"

namespace tmp {

namespace {

constexpr double kMinDeflection = 1e-6;  // rad

// Relative comparison tolerance for the trend classification; measured
// stiffness is never resolved better than this anyway.
constexpr double kTrendTol = 1e-9;

int compare_with_tol(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  if (a - b > kTrendTol * scale) return 1;
  if (b - a > kTrendTol * scale) return -1;
  return 0;
}

}  // namespace

void CreaseMeasurement::validate() const {
  std::ostringstream msg;
  if (!(F_perp_N > 0.0) || !(d_perp_m > 0.0)) {
    msg << "load and moment arm must be > 0 (F_perp=" << F_perp_N
        << " N, d_perp=" << d_perp_m << " m)";
    throw ConfigError(msg.str());
  }
  if (!(theta0_rad > 0.0) || !(theta0_rad < kPi) || !(theta_l_rad >= 0.0) ||
      !(theta_l_rad < kPi)) {
    msg << "crease angles must lie in (0, pi) (theta0=" << theta0_rad
        << ", theta_l=" << theta_l_rad << " rad)";
    throw ConfigError(msg.str());
  }
  if (!(sample_length_m > 0.0)) {
    msg << "sample length must be > 0, got " << sample_length_m << " m";
    throw ConfigError(msg.str());
  }
}

double torsional_stiffness_Nm_per_rad(const CreaseMeasurement& measurement) {
  measurement.validate();
  const double deflection = measurement.theta0_rad - measurement.theta_l_rad;
  if (!(deflection > kMinDeflection)) {
    std::ostringstream msg;
    msg << "angular deflection " << deflection
        << " rad is too small to divide by (theta0=" << measurement.theta0_rad
        << ", theta_l=" << measurement.theta_l_rad << " rad)";
    throw DegenerateDeflection(msg.str());
  }
  return measurement.F_perp_N * measurement.d_perp_m / deflection;
}

double per_unit_length_N_per_rad(double k_theta_Nm_per_rad,
                                 double sample_length_m) {
  if (!(sample_length_m > 0.0)) {
    std::ostringstream msg;
    msg << "sample length must be > 0, got " << sample_length_m << " m";
    throw ConfigError(msg.str());
  }
  return k_theta_Nm_per_rad / sample_length_m;
}

const char* trend_name(StiffnessTrend trend) {
  switch (trend) {
    case StiffnessTrend::flat: return "flat";
    case StiffnessTrend::stiffening: return "stiffening";
    case StiffnessTrend::softening: return "softening";
    case StiffnessTrend::mixed: return "mixed";
  }
  return "?";
}

StiffnessReport stiffness_vs_angle_report(
    const std::vector<CreaseMeasurement>& measurements) {
  if (measurements.size() < 2) {
    std::ostringstream msg;
    msg << "trend analysis needs >= 2 measurements, got "
        << measurements.size();
    throw ConfigError(msg.str());
  }
  StiffnessReport report;
  report.records.reserve(measurements.size());
  for (const CreaseMeasurement& measurement : measurements) {
    const double k_theta = torsional_stiffness_Nm_per_rad(measurement);
    report.records.push_back(AngleStiffnessRecord{
        measurement.theta_l_rad, k_theta,
        per_unit_length_N_per_rad(k_theta, measurement.sample_length_m)});
  }
  std::stable_sort(report.records.begin(), report.records.end(),
                   [](const AngleStiffnessRecord& a,
                      const AngleStiffnessRecord& b) {
                     return a.theta_l_rad < b.theta_l_rad;
                   });

  // In increasing-angle order: stiffening means k falls as the angle grows
  // (i.e. grows toward deep folds), softening the opposite.
  bool some_up = false, some_down = false;
  for (std::size_t i = 1; i < report.records.size(); ++i) {
    const int cmp = compare_with_tol(report.records[i].k_theta_Nm_per_rad,
                                     report.records[i - 1].k_theta_Nm_per_rad);
    if (cmp > 0) some_up = true;
    if (cmp < 0) some_down = true;
  }
  if (some_up && some_down) {
    report.trend = StiffnessTrend::mixed;
  } else if (some_down) {
    report.trend = StiffnessTrend::stiffening;
  } else if (some_up) {
    report.trend = StiffnessTrend::softening;
  } else {
    report.trend = StiffnessTrend::flat;
  }
  return report;
}

std::vector<CreaseMeasurement> read_measurements_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) {
    throw ConfigError("measurement CSV is empty");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "F_perp_N,d_perp_m,theta0_deg,theta_l_deg,length_m") {
    throw ConfigError(
        "measurement CSV must start with header "
        "`F_perp_N,d_perp_m,theta0_deg,theta_l_deg,length_m`, got `" +
        line + "`");
  }
  std::vector<CreaseMeasurement> measurements;
  int row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream cells(line);
    std::string cell;
    std::vector<double> values;
    while (std::getline(cells, cell, ',')) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        std::ostringstream msg;
        msg << "measurement CSV row " << row << ": bad number `" << cell
            << "`";
        throw ConfigError(msg.str());
      }
    }
    if (values.size() != 5) {
      std::ostringstream msg;
      msg << "measurement CSV row " << row << ": expected 5 columns, got "
          << values.size();
      throw ConfigError(msg.str());
    }
    CreaseMeasurement measurement;
    measurement.F_perp_N = values[0];
    measurement.d_perp_m = values[1];
    measurement.theta0_rad = deg2rad(values[2]);
    measurement.theta_l_rad = deg2rad(values[3]);
    measurement.sample_length_m = values[4];
    measurement.validate();
    measurements.push_back(measurement);
  }
  return measurements;
}

std::string report_to_json(const StiffnessReport& report) {
  nlohmann::json j;
  j["trend"] = trend_name(report.trend);
  j["records"] = nlohmann::json::array();
  for (const AngleStiffnessRecord& record : report.records) {
    j["records"].push_back({
        {"theta_l_deg", rad2deg(record.theta_l_rad)},
        {"k_theta_Nm_per_rad", record.k_theta_Nm_per_rad},
        {"k_hat_N_per_rad", record.k_hat_N_per_rad},
    });
  }
  return j.dump(2) + "\n";
}

}  // namespace tmp
