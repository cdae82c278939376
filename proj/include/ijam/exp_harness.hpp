#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ijam/analytic_model.hpp"
#include "ijam/channel_link.hpp"
#include "ijam/frame_layout.hpp"
#include "ijam/jam_scheduler.hpp"
#include "ijam/phy_waveform.hpp"

namespace ijam {

/// Everything a sweep needs. Loaded from a JSON document (see README for the
/// schema) and then overridden by command-line flags.
struct ExperimentConfig {
  /// Input file; a seeded synthetic payload is used when empty.
  std::optional<std::filesystem::path> payload_path;
  std::uint64_t payload_seed = 7;
  /// Frames per message. The payload is truncated to frames * MSDU bytes, and
  /// the synthetic payload fills exactly that many frames.
  std::size_t frames = 20;
  /// Synthetic payload size; zero fills `frames` MSDUs exactly.
  std::size_t synthetic_bytes = 0;
  std::vector<Scheme> schemes{std::begin(kAllSchemes), std::end(kAllSchemes)};
  std::vector<double> e_j_grid{150.0, 300.0, 600.0, 1000.0};
  std::vector<double> rho_grid{0.05, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
  /// Pulse counts tried for RepJDT.
  std::vector<int> rep_pulses{2, 4, 8};
  std::vector<std::uint64_t> seeds{1, 2, 3};
  ChannelSpec channel;
  PhyConfig phy;
  AnalyticParams analytic;
  double corruption_factor = 10.0;
  /// Proportion used by the payload demo for the rho-dependent schemes.
  double demo_rho = 0.2;
  /// Abort with ConstraintViolation when Bob sees any error.
  bool audit_bob = true;
  std::filesystem::path out_dir = "out";
  unsigned workers = 1;

  /// Throws std::invalid_argument on empty grids, duplicate seeds and the like.
  void validate() const;
};

/// 96 frames of a 219600-byte synthetic payload.
void apply_full_scale(ExperimentConfig& cfg);

/// Unknown keys are rejected so typos do not silently fall back to defaults.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig config_from_json(const std::string& text);
/// The resolved configuration (worker count excluded); parses back with
/// config_from_json.
std::string config_json(const ExperimentConfig& cfg);
/// Run metadata: configuration echo plus seeds and library versions.
std::string run_metadata_json(const ExperimentConfig& cfg);

/// Payload bytes the experiment transmits.
Bytes experiment_payload(const ExperimentConfig& cfg);

enum class RowKind { kMonteCarlo, kAnalytic };

struct MetricsRow {
  RowKind kind = RowKind::kMonteCarlo;
  Scheme scheme = Scheme::kCJS;
  double e_j = 0.0;
  /// Requested proportion; for fixed-shape schemes the realized one.
  double rho = 0.0;
  int n_pulse = 1;
  std::optional<std::uint64_t> seed;  // empty on analytic rows
  bool feasible = true;
  std::string note;
  double je = 0.0;
  double jp = 0.0;
  std::optional<double> jsr;
  std::optional<double> ser_eve;
  std::optional<double> constellation_ser;
  std::optional<double> seree;
  std::size_t bob_errors = 0;
  std::size_t frames_discarded = 0;
  std::optional<double> ser_analytic;
  std::optional<double> n_error_analytic;
  std::optional<int> w;
};

struct MetricsReport {
  std::vector<MetricsRow> rows;

  std::string csv() const;
};

/// Full factorial sweep over scheme x energy x rho x pulse count x seed plus
/// one analytic row per (scheme, energy, rho, pulse count). Rows are in grid
/// order whatever the worker count. Infeasible cells become flagged rows.
/// Throws ConstraintViolation when the Bob audit fails.
MetricsReport run_sweep(const ExperimentConfig& cfg);

struct ComparisonRow {
  Scheme scheme = Scheme::kCJS;
  double e_j = 0.0;
  /// Largest seed-averaged SER over the proportion and pulse grids.
  double best_ser = 0.0;
  double rho = 0.0;
  int n_pulse = 1;
  std::size_t n_seeds = 0;
};

/// Best seed-averaged SER per (scheme, energy) from the Monte-Carlo rows.
/// Schemes without any feasible cell at an energy are omitted.
std::vector<ComparisonRow> best_ser_table(const MetricsReport& report);
std::string comparison_csv(const std::vector<ComparisonRow>& rows);
/// Requires at least two schemes.
std::vector<ComparisonRow> run_comparison(const ExperimentConfig& cfg);

struct DemoRow {
  std::string label;  // scheme name, or "none" for the unjammed reference
  double e_j = 0.0;
  double byte_diff_fraction = 0.0;  // mean over seeds
  std::size_t n_seeds = 0;
  std::filesystem::path file;       // Eve's recovered bytes for the first seed
};

/// Writes Eve's recovered payload per scheme and energy under
/// out_dir/demo and returns the byte-difference statistics.
std::vector<DemoRow> corrupt_payload_demo(const ExperimentConfig& cfg);
std::string demo_csv(const std::vector<DemoRow>& rows);

/// Fraction of positions where the two byte strings differ; length
/// mismatches count as differences.
double byte_diff_fraction(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

/// True when values strictly rise to a single interior maximum and then
/// strictly fall; ties anywhere reject the shape.
bool is_unimodal(std::span<const double> values);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace ijam
