// tmpjump: command-line front end for the TMP jumping-mechanism toolkit.
//
//   tmpjump <command> --config <file.json> --out <dir> [--jobs N]
//
// Commands: force-curve, jump, sweep-static, sweep-dynamic, optimize-linear,
// paleo. Configs are JSON with display units at the boundary (mm, deg, g);
// everything internal is SI. Every run writes a manifest.json with the
// config fingerprint; all other outputs are byte-deterministic for a given
// config, independent of --jobs.
//
// Exit codes: 0 success, 2 config/usage error, 3 computation error,
// 4 no take-off.

#include <chrono>
#include <exception>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tmp/dynamics.hpp"
#include "tmp/errors.hpp"
#include "tmp/io_util.hpp"
#include "tmp/optimizer.hpp"
#include "tmp/paleo.hpp"
#include "tmp/studies.hpp"

namespace {

using nlohmann::json;

constexpr const char* kVersion = "1.0.0";

// ---------------------------------------------------------------------------
// Config parsing helpers (display units -> SI happens here, once).

const json& require_key(const json& j, const std::string& key,
                        const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw tmp::ConfigError("missing key `" + key + "` in " + where);
  }
  return *it;
}

double require_number(const json& j, const std::string& key,
                      const std::string& where) {
  const json& value = require_key(j, key, where);
  if (!value.is_number()) {
    throw tmp::ConfigError("key `" + key + "` in " + where +
                           " must be a number");
  }
  return value.get<double>();
}

double number_or(const json& j, const std::string& key, double fallback) {
  const auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number()) {
    throw tmp::ConfigError("key `" + key + "` must be a number");
  }
  return it->get<double>();
}

int int_or(const json& j, const std::string& key, int fallback) {
  const auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number_integer()) {
    throw tmp::ConfigError("key `" + key + "` must be an integer");
  }
  return it->get<int>();
}

tmp::TmpDesign parse_design(const json& block, const std::string& where) {
  if (!block.is_object()) {
    throw tmp::ConfigError(where + " must be a JSON object");
  }
  tmp::TmpDesign design;
  const json& n = require_key(block, "N", where);
  if (!n.is_number_integer()) {
    throw tmp::ConfigError("key `N` in " + where + " must be an integer");
  }
  design.N = n.get<int>();
  design.alpha_rad = tmp::deg2rad(require_number(block, "alpha_deg", where));
  design.c_m = require_number(block, "c_mm", where) * 1e-3;
  design.d_m = require_number(block, "d_mm", where) * 1e-3;
  design.l_m = require_number(block, "l_mm", where) * 1e-3;
  design.m_m = require_number(block, "m_mm", where) * 1e-3;
  design.kM_hat_N_per_rad =
      require_number(block, "kM_hat_N_per_rad", where);
  design.kS_hat_N_per_rad =
      require_number(block, "kS_hat_N_per_rad", where);
  design.thetaM0_rad = tmp::deg2rad(number_or(block, "thetaM0_deg", 60.0));
  design.validate();
  return design;
}

// Optional partial design block: absent keys keep the base values.
tmp::TmpDesign parse_design_over(const json& block, tmp::TmpDesign base,
                                 const std::string& where) {
  if (!block.is_object()) {
    throw tmp::ConfigError(where + " must be a JSON object");
  }
  if (block.contains("N")) base.N = int_or(block, "N", base.N);
  base.alpha_rad = tmp::deg2rad(
      number_or(block, "alpha_deg", tmp::rad2deg(base.alpha_rad)));
  base.c_m = number_or(block, "c_mm", base.c_m * 1e3) * 1e-3;
  base.d_m = number_or(block, "d_mm", base.d_m * 1e3) * 1e-3;
  base.l_m = number_or(block, "l_mm", base.l_m * 1e3) * 1e-3;
  base.m_m = number_or(block, "m_mm", base.m_m * 1e3) * 1e-3;
  base.kM_hat_N_per_rad =
      number_or(block, "kM_hat_N_per_rad", base.kM_hat_N_per_rad);
  base.kS_hat_N_per_rad =
      number_or(block, "kS_hat_N_per_rad", base.kS_hat_N_per_rad);
  base.thetaM0_rad = tmp::deg2rad(
      number_or(block, "thetaM0_deg", tmp::rad2deg(base.thetaM0_rad)));
  base.validate();
  return base;
}

struct ProfileAngles {
  double theta1_rad = tmp::deg2rad(38.0);
  double theta2_rad = tmp::deg2rad(70.0);
};

ProfileAngles parse_profile_angles(const json& config) {
  ProfileAngles angles;
  if (config.contains("profile")) {
    const json& block = config["profile"];
    angles.theta1_rad = tmp::deg2rad(number_or(block, "theta1_deg", 38.0));
    angles.theta2_rad = tmp::deg2rad(number_or(block, "theta2_deg", 70.0));
  }
  return angles;
}

// dy from either an explicit millimeter value or a folding-ratio target.
double parse_compression(const json& config, const tmp::TmpDesign& design,
                         const std::string& mm_key) {
  const bool has_mm = config.contains(mm_key);
  const bool has_rf = config.contains("RF_target");
  if (has_mm == has_rf) {
    throw tmp::ConfigError("config must set exactly one of `" + mm_key +
                           "` and `RF_target`");
  }
  if (has_mm) {
    return require_number(config, mm_key, "config") * 1e-3;
  }
  return tmp::displacement_from_folding_ratio(
      design, require_number(config, "RF_target", "config"));
}

// ---------------------------------------------------------------------------
// Output helpers.

struct RunContext {
  std::string command;
  std::string config_path;
  std::string config_text;
  json config;
  std::filesystem::path out_dir;
  int jobs = 1;
  std::vector<std::string> warnings;
  std::chrono::steady_clock::time_point started =
      std::chrono::steady_clock::now();
};

void write_output(const RunContext& ctx, const std::string& name,
                  std::string_view content) {
  tmp::write_text_file((ctx.out_dir / name).string(), content);
}

void write_manifest(const RunContext& ctx) {
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                    ctx.started)
          .count();
  json manifest;
  manifest["command"] = ctx.command;
  manifest["config_path"] = ctx.config_path;
  manifest["config_hash_fnv1a64"] = tmp::hex64(tmp::fnv1a64(ctx.config_text));
  manifest["version"] = kVersion;
  manifest["wall_time_s"] = wall;
  manifest["jobs"] = ctx.jobs;
  manifest["warnings"] = ctx.warnings;
  write_output(ctx, "manifest.json", manifest.dump(2) + "\n");
}

void collect_sweep_warnings(RunContext* ctx, const tmp::SweepResult& result) {
  for (const tmp::SweepPoint& point : result.points) {
    if (!point.ok) {
      std::ostringstream msg;
      msg << "sweep " << tmp::variable_name(result.variable) << " at value "
          << tmp::format_sig15(point.variable_value) << ": " << point.error;
      ctx->warnings.push_back(msg.str());
    }
  }
}

// ---------------------------------------------------------------------------
// Commands.

void run_force_curve(RunContext* ctx) {
  const tmp::TmpDesign design =
      parse_design(require_key(ctx->config, "design", "config"), "design");
  const ProfileAngles angles = parse_profile_angles(ctx->config);
  const tmp::CreaseProfile profile = tmp::make_crease_profile(
      design, angles.theta1_rad, angles.theta2_rad);
  const double dy_max = parse_compression(ctx->config, design, "dy_max_mm");
  const int n_samples = int_or(ctx->config, "n_samples", 2001);

  const tmp::ForceCurve curve =
      tmp::force_curve(design, profile, dy_max, n_samples);
  std::ostringstream csv;
  tmp::write_force_curve_csv(curve, csv);
  write_output(*ctx, "force_curve.csv", csv.str());

  json metrics;
  metrics["dy_max_m"] = curve.dy_max_m;
  metrics["F_max_N"] = curve.F_max_N;
  metrics["stored_energy_J"] = tmp::stored_energy_J(curve);
  metrics["R_n"] = tmp::nonlinearity_ratio(curve);
  metrics["k_eq_N_per_m"] = tmp::equivalent_linear_coefficient(curve);
  write_output(*ctx, "metrics.json", metrics.dump(2) + "\n");
}

void run_jump(RunContext* ctx) {
  const tmp::TmpDesign design =
      parse_design(require_key(ctx->config, "design", "config"), "design");
  const ProfileAngles angles = parse_profile_angles(ctx->config);

  tmp::JumperConfig config;
  config.design = design;
  config.profile = tmp::make_crease_profile(design, angles.theta1_rad,
                                            angles.theta2_rad);
  config.m1_kg = require_number(ctx->config, "m1_g", "config") * 1e-3;
  config.m2_kg = require_number(ctx->config, "m2_g", "config") * 1e-3;
  config.dy0_m = parse_compression(ctx->config, design, "dy0_mm");
  config.eta = number_or(ctx->config, "eta", 1.0);
  config.g_mps2 = number_or(ctx->config, "g_mps2", 9.81);
  config.t_max_s = number_or(ctx->config, "t_max_s", 5.0);
  config.F_cap_N = number_or(ctx->config, "F_cap_N", 1e6);

  const tmp::JumpResult result = tmp::simulate(config);
  std::ostringstream csv;
  tmp::write_trace_csv(result.trace, csv);
  write_output(*ctx, "trace.csv", csv.str());

  json metrics;
  metrics["airtime_s"] = result.metrics.airtime_s;
  metrics["clearance_m"] = result.metrics.clearance_m;
  metrics["t_takeoff_s"] = result.metrics.t_takeoff_s;
  metrics["t_land_s"] = result.metrics.t_land_s;
  metrics["takeoff_velocity_cg_mps"] =
      result.metrics.takeoff_velocity_cg_mps;
  metrics["energy_released_J"] = result.metrics.energy_released_J;
  metrics["kinematic_range_exceeded"] = result.trace.kinematic_range_exceeded;
  metrics["force_capped"] = result.trace.force_capped;
  write_output(*ctx, "metrics.json", metrics.dump(2) + "\n");
}

tmp::SweepSpec parse_sweep_spec(const RunContext& ctx,
                                tmp::SweepVariable variable) {
  tmp::SweepSpec spec;
  spec.variable = variable;
  if (ctx.config.contains("base_design")) {
    spec.base_design = parse_design_over(ctx.config["base_design"],
                                         tmp::default_sweep_base(),
                                         "base_design");
  }
  const ProfileAngles angles = parse_profile_angles(ctx.config);
  spec.theta1_rad = angles.theta1_rad;
  spec.theta2_rad = angles.theta2_rad;
  spec.count = int_or(ctx.config, "count", 9);
  spec.RF_target = number_or(ctx.config, "RF_target", 0.75);
  spec.n_samples = int_or(ctx.config, "n_samples", 2001);
  spec.m1_kg = number_or(ctx.config, "m1_g", 17.7) * 1e-3;
  spec.m2_kg = number_or(ctx.config, "m2_g", 17.6) * 1e-3;
  spec.eta = number_or(ctx.config, "eta", 1.0);
  spec.g_mps2 = number_or(ctx.config, "g_mps2", 9.81);

  if (ctx.config.contains("ranges")) {
    const json& ranges = ctx.config["ranges"];
    const char* name = tmp::variable_name(variable);
    std::string key;
    double to_si = 1.0;
    if (variable == tmp::SweepVariable::N) {
      key = "N";
    } else if (variable == tmp::SweepVariable::alpha) {
      key = "alpha_deg";
      to_si = tmp::kPi / 180.0;
    } else {
      key = std::string(name) + "_mm";
      to_si = 1e-3;
    }
    if (ranges.contains(key)) {
      const json& pair = ranges[key];
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
          !pair[1].is_number()) {
        throw tmp::ConfigError("range `" + key +
                               "` must be a two-number array");
      }
      spec.range.lo = pair[0].get<double>() * to_si;
      spec.range.hi = pair[1].get<double>() * to_si;
    }
  }
  return spec;
}

std::vector<tmp::SweepVariable> parse_sweep_variables(const json& config) {
  const json& list = require_key(config, "variables", "config");
  if (!list.is_array() || list.empty()) {
    throw tmp::ConfigError("`variables` must be a non-empty array of names");
  }
  std::vector<tmp::SweepVariable> variables;
  for (const json& entry : list) {
    if (!entry.is_string()) {
      throw tmp::ConfigError("`variables` entries must be strings");
    }
    variables.push_back(
        tmp::variable_from_name(entry.get<std::string>()));
  }
  return variables;
}

void run_sweep(RunContext* ctx, bool dynamic) {
  const std::vector<tmp::SweepVariable> variables =
      parse_sweep_variables(ctx->config);
  for (const tmp::SweepVariable variable : variables) {
    const tmp::SweepSpec spec = parse_sweep_spec(*ctx, variable);
    const tmp::SweepResult result = dynamic
                                        ? tmp::dynamic_sweep(spec, ctx->jobs)
                                        : tmp::static_sweep(spec, ctx->jobs);
    collect_sweep_warnings(ctx, result);
    std::ostringstream csv;
    tmp::write_sweep_csv(result, csv);
    const std::string name =
        std::string(dynamic ? "sweep_dynamic_" : "sweep_static_") +
        tmp::variable_name(variable) + ".csv";
    write_output(*ctx, name, csv.str());
  }
}

void run_optimize_linear(RunContext* ctx) {
  tmp::LinearFitSpec spec;
  spec.target_dy_max_m =
      number_or(ctx->config, "target_dy_max_mm", 110.0) * 1e-3;
  spec.n_samples = int_or(ctx->config, "n_samples", 2000);
  spec.penalty_weight_per_N =
      number_or(ctx->config, "penalty_weight_per_N", 1e3);
  if (ctx->config.contains("N_range")) {
    const json& pair = ctx->config["N_range"];
    if (!pair.is_array() || pair.size() != 2) {
      throw tmp::ConfigError("`N_range` must be a two-integer array");
    }
    spec.N_lo = pair[0].get<int>();
    spec.N_hi = pair[1].get<int>();
  }
  spec.kM_hat_N_per_rad =
      number_or(ctx->config, "kM_hat_N_per_rad", spec.kM_hat_N_per_rad);
  spec.kS_hat_N_per_rad =
      number_or(ctx->config, "kS_hat_N_per_rad", spec.kS_hat_N_per_rad);

  // The ramp's end force comes either from a reference design evaluated at
  // the target compression, or from an explicit value.
  const bool has_ref = ctx->config.contains("reference_design");
  const bool has_target = ctx->config.contains("target_F_max_N");
  if (has_ref == has_target) {
    throw tmp::ConfigError(
        "config must set exactly one of `reference_design` and "
        "`target_F_max_N`");
  }
  if (has_ref) {
    const tmp::TmpDesign reference =
        parse_design(ctx->config["reference_design"], "reference_design");
    const ProfileAngles angles = parse_profile_angles(ctx->config);
    spec.target_F_max_N = tmp::reaction_force(
        reference,
        tmp::make_crease_profile(reference, angles.theta1_rad,
                                 angles.theta2_rad),
        spec.target_dy_max_m);
  } else {
    spec.target_F_max_N =
        require_number(ctx->config, "target_F_max_N", "config");
  }

  const std::string algorithm =
      ctx->config.value("algorithm", std::string("both"));
  std::vector<tmp::OptAlgorithm> algorithms;
  if (algorithm == "simplex") {
    algorithms = {tmp::OptAlgorithm::simplex};
  } else if (algorithm == "powell") {
    algorithms = {tmp::OptAlgorithm::powell};
  } else if (algorithm == "both") {
    algorithms = {tmp::OptAlgorithm::simplex, tmp::OptAlgorithm::powell};
  } else {
    throw tmp::ConfigError("`algorithm` must be simplex, powell or both");
  }

  for (const tmp::OptAlgorithm alg : algorithms) {
    const tmp::OptResult result =
        tmp::optimize_linear_design(spec, alg, ctx->jobs);
    write_output(*ctx,
                 std::string("optresult_") + tmp::algorithm_name(alg) +
                     ".json",
                 tmp::optresult_to_json(result));
  }
}

void run_paleo(RunContext* ctx) {
  std::vector<tmp::CreaseMeasurement> measurements;
  const bool has_csv = ctx->config.contains("measurements_csv");
  const bool has_inline = ctx->config.contains("measurements");
  if (has_csv == has_inline) {
    throw tmp::ConfigError(
        "config must set exactly one of `measurements_csv` and "
        "`measurements`");
  }
  if (has_csv) {
    // CSV paths resolve relative to the config file's directory.
    std::filesystem::path csv_path =
        ctx->config["measurements_csv"].get<std::string>();
    if (csv_path.is_relative()) {
      csv_path = std::filesystem::path(ctx->config_path).parent_path() /
                 csv_path;
    }
    std::istringstream csv(tmp::read_text_file(csv_path.string()));
    measurements = tmp::read_measurements_csv(csv);
  } else {
    for (const json& entry : ctx->config["measurements"]) {
      tmp::CreaseMeasurement measurement;
      measurement.F_perp_N = require_number(entry, "F_perp_N", "measurement");
      measurement.d_perp_m =
          require_number(entry, "d_perp_mm", "measurement") * 1e-3;
      measurement.theta0_rad =
          tmp::deg2rad(require_number(entry, "theta0_deg", "measurement"));
      measurement.theta_l_rad =
          tmp::deg2rad(require_number(entry, "theta_l_deg", "measurement"));
      measurement.sample_length_m =
          require_number(entry, "length_mm", "measurement") * 1e-3;
      measurements.push_back(measurement);
    }
  }
  const tmp::StiffnessReport report =
      tmp::stiffness_vs_angle_report(measurements);
  write_output(*ctx, "paleo_report.json", tmp::report_to_json(report));
}

// ---------------------------------------------------------------------------

int run(const std::string& command, RunContext* ctx) {
  try {
    ctx->config = json::parse(ctx->config_text);
  } catch (const json::exception& err) {
    throw tmp::ConfigError(std::string("config is not valid JSON: ") +
                           err.what());
  }
  if (!ctx->config.is_object()) {
    throw tmp::ConfigError("config root must be a JSON object");
  }

  std::error_code ec;
  std::filesystem::create_directories(ctx->out_dir, ec);
  if (ec) {
    throw tmp::ComputationError("cannot create output directory `" +
                                ctx->out_dir.string() + "`: " + ec.message());
  }

  if (command == "force-curve") {
    run_force_curve(ctx);
  } else if (command == "jump") {
    run_jump(ctx);
  } else if (command == "sweep-static") {
    run_sweep(ctx, /*dynamic=*/false);
  } else if (command == "sweep-dynamic") {
    run_sweep(ctx, /*dynamic=*/true);
  } else if (command == "optimize-linear") {
    run_optimize_linear(ctx);
  } else if (command == "paleo") {
    run_paleo(ctx);
  }
  write_manifest(*ctx);
  return 0;
}

void print_error(const std::string& type, const std::string& message) {
  json err;
  err["error"] = {{"type", type}, {"message", message}};
  std::cerr << err.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TMP origami jumper design toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int jobs = 1;

  const std::vector<std::string> commands = {
      "force-curve",    "jump",  "sweep-static",
      "sweep-dynamic",  "optimize-linear", "paleo"};
  const std::vector<std::string> descriptions = {
      "Sample the static force-displacement curve and its energy metrics",
      "Simulate a two-mass jump and write the trajectory trace",
      "One-at-a-time static sweeps over design variables",
      "One-at-a-time dynamic sweeps (jump vs equivalent linear spring)",
      "Search for the most linear design against an ideal ramp",
      "Reduce crease bending measurements to torsional stiffness"};
  for (std::size_t i = 0; i < commands.size(); ++i) {
    CLI::App* sub = app.add_subcommand(commands[i], descriptions[i]);
    sub->add_option("--config", config_path, "JSON config file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (created if absent)")
        ->required();
    sub->add_option("--jobs", jobs,
                    "worker threads (never changes the results)")
        ->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  RunContext ctx;
  ctx.command = app.get_subcommands().front()->get_name();
  ctx.config_path = config_path;
  ctx.out_dir = out_dir;
  ctx.jobs = jobs;

  try {
    ctx.config_text = tmp::read_text_file(config_path);
    return run(ctx.command, &ctx);
  } catch (const tmp::NoTakeoff& err) {
    print_error(err.kind(), err.what());
    return 4;
  } catch (const tmp::ConfigError& err) {
    print_error(err.kind(), err.what());
    return 2;
  } catch (const tmp::Error& err) {
    print_error(err.kind(), err.what());
    return 3;
  } catch (const std::exception& err) {
    print_error("ComputationError", err.what());
    return 3;
  }
}
