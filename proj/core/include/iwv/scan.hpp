#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iwv/params.hpp"

namespace iwv {

enum class Subcommand { fisher_scan, noise_scan, jitter_scan, mc_estimate, frequency };

std::string_view subcommand_name(Subcommand s);

enum class SweepSpacing { linear, log };

struct SweepSpec {
  std::string parameter;  ///< exactly one swept parameter per scan
  double min = 0.0;
  double max = 0.0;
  int points = 0;  ///< >= 2
  SweepSpacing spacing = SweepSpacing::linear;

  std::vector<double> values() const;
};

enum class FrequencySchemeKind { prism, group_delay };

/// Parsed, validated scan configuration. Flat key=value text; '#' starts a
/// comment; unknown and duplicate keys are errors.
struct ScanConfig {
  Subcommand subcommand = Subcommand::fisher_scan;
  InterferometerParams params;
  NoiseParams noise;
  bool j_is_ratio = false;  ///< J given as a fraction of the current sigma
  bool q_is_ratio = false;  ///< Q given as a multiple of the current k
  double j_value = 0.0;
  double q_value = 0.0;
  SweepSpec sweep;
  bool hold_ksigma = false;  ///< rescale k as sigma sweeps, keeping k*sigma
  std::string output_path;   ///< empty = stdout
  std::uint64_t seed = 0;
  int q_nodes = 41;
  int threads = 1;

  // mc-estimate
  std::uint64_t nu_input = 1000000;
  std::size_t trials = 200;
  double mle_halfwidth_factor = 20.0;

  // frequency
  FrequencySchemeKind scheme = FrequencySchemeKind::prism;
  double power_W = 1e-3;
  double wavelength_cm = 780e-7;
  double integration_time_s = 1.0;
  double vg_over_c = 1e-3;
  double cell_length_cm = 1.0;
  std::optional<double> dtheta_domega;  ///< overrides the toy vg mapping
  double prism_apex_rad = 1.0;
};

/// Parses config text for `sub`. Errors name the offending key or line.
ScanConfig parse_config(std::string_view text, Subcommand sub);

/// Runs the scan and writes the CSV artifact (metadata comment rows with the
/// full config and artifact version, a header row, one row per sweep
/// point). Data columns are deterministic for a fixed config and seed; the
/// trailing runtime_ms diagnostics column is exempt. Numeric failures throw;
/// the CLI maps them to exit code 3 with the failing sweep point named.
void run_scan(const ScanConfig& config, std::ostream& out);

/// run_scan writing to config.output_path (stdout when empty).
void run_scan_to_path(const ScanConfig& config);

}  // namespace iwv
