#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "ijam/channel_link.hpp"
#include "ijam/frame_layout.hpp"
#include "ijam/jam_scheduler.hpp"

namespace ijam {

struct AnalyticParams {
  /// Multiplying-effect parameter.
  double lambda = 1.0;
  /// Mean legitimate DATA power, used for E_b and the critical-window test.
  double signal_power = 1.0;
  /// w = 1 additionally requires the jamming power on the critical HT-LTF
  /// window to reach this multiple of the signal power. Zero reduces the
  /// weight rule to the pure coverage indicator.
  double critical_jsr_threshold = 1.0;

  void validate() const;
};

double q_function(double x);

/// Closed-form symbol error probability at Eve:
///   Pr = 1 - [1 - 3/4 Q(sqrt(2/7 |h_ae|^2 E_b / (|h_je|^2 P_j)))]^2
/// P_j = 0 (or h_je = 0) means no jamming-induced errors and gives 0.
double ser_closed_form(double e_b, double p_j, cd h_ae, cd h_je);

/// E_b = samples_per_symbol * signal_power / L_DBPS.
double analytic_bit_energy(const AnalyticParams& params, const PhyConfig& cfg);

/// N_frame * N_sym * N_sym_coded.
double total_data_symbols(const MessagePlan& plan, const FrameLayout& layout, const PhyConfig& cfg);

/// min{lambda * sum(beta) / samples_per_symbol * N_sym_coded * Pr, N_sym_total}.
double error_count(const JamSchedule& schedule, double pr, const AnalyticParams& params,
                   const MessagePlan& plan, const FrameLayout& layout, const PhyConfig& cfg);

/// Weight rule: 1 only if every frame's critical HT-LTF window is fully jammed
/// (and, with a positive threshold, jammed at sufficient power).
int critical_weight(const JamSchedule& schedule, const FrameLayout& layout,
                    const AnalyticParams& params);

/// w * N_sym_total + (1 - w) * n_error.
double overall_errors(const JamSchedule& schedule, double n_error, const AnalyticParams& params,
                      const MessagePlan& plan, const FrameLayout& layout, const PhyConfig& cfg);

struct SereeReport {
  double pr = 0.0;
  double n_error = 0.0;
  double n_error_overall = 0.0;
  double n_sym_total = 0.0;
  int w = 0;
  double e_j = 0.0;
  /// Empty when E_J = 0 (objective undefined).
  std::optional<double> seree;
  bool bob_error_free = false;   // N_error_overall(h_ab, h_jb) = 0
  bool within_budget = false;    // E_J <= E_J^avail
  bool beta_binary = false;      // beta(k) in {0, 1}
  bool feasible = false;
};

/// `e_j_avail` is the budget the constraint is checked against; the schedule's
/// own e_j_avail is what it spends.
SereeReport seree(const JamSchedule& schedule, double e_j_avail, const AnalyticParams& params,
                  const MessagePlan& plan, const FrameLayout& layout, const ChannelSpec& chan,
                  const PhyConfig& cfg);

/// Candidate grid. Expansion order is scheme, rho, n_pulse, offset,
/// energy fraction, with the later axes varying fastest. CJS and PerJPT
/// ignore rho, n_pulse and offset; only RepJDT uses n_pulse; only PerJDT and
/// RepJDT use offset.
struct GridSpec {
  std::vector<Scheme> schemes;
  std::vector<double> rhos{1.0};
  std::vector<int> pulses{1};
  std::vector<double> offsets_us{-1.0};
  std::vector<double> energy_fractions{1.0};
  std::uint64_t seed = 1;
};

std::vector<ScheduleSpec> expand_grid(const GridSpec& grid);

struct GridPoint {
  ScheduleSpec spec;
  std::optional<SereeReport> report;  // empty when the schedule could not be built
  std::string error;
};

struct OptimizerResult {
  std::vector<GridPoint> evaluated;
  /// Index into `evaluated`; empty when no feasible point exists.
  std::optional<std::size_t> best;
};

/// Exhaustive evaluation of the grid (restricted to `family`, all schemes when
/// empty). Argmax of seree over feasible points; ties keep the earliest point.
OptimizerResult optimize_schedule(double e_j_avail, const AnalyticParams& params,
                                  const MessagePlan& plan, const FrameLayout& layout,
                                  const ChannelSpec& chan, const PhyConfig& cfg,
                                  const std::vector<Scheme>& family, const GridSpec& grid,
                                  unsigned workers = 1);

/// JSON document with the winning schedule and every evaluated point.
std::string optimizer_json(const OptimizerResult& result, double e_j_avail);

}  // namespace ijam
