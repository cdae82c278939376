#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "ijam/frame_layout.hpp"
#include "ijam/phy_waveform.hpp"

namespace ijam {

enum class Scheme { kCJS, kPerJPT, kPerJDT, kRepJDT, kRanJDT, kRanJFT };

inline constexpr Scheme kAllSchemes[] = {Scheme::kCJS,    Scheme::kPerJPT, Scheme::kPerJDT,
                                         Scheme::kRepJDT, Scheme::kRanJDT, Scheme::kRanJFT};

std::string_view to_string(Scheme s);
/// Case-insensitive; throws std::invalid_argument on unknown names.
Scheme scheme_from_string(std::string_view name);
/// Data-targeted schemes never touch preamble samples.
bool is_data_targeted(Scheme s);

enum class RandomPosition { kDT, kFT };

/// beta(k) over the whole transmission together with the (uniform) jamming
/// amplitude. All-in allocation: amplitude^2 * sum(beta) == e_j_avail.
struct JamSchedule {
  Scheme scheme = Scheme::kCJS;
  std::vector<std::uint8_t> beta;
  double amplitude = 0.0;
  double e_j_avail = 0.0;
  std::uint64_t seed = 0;
  std::size_t n_frame = 0;
  std::size_t n_samples_frame = 0;

  std::size_t jammed_samples() const;
  /// Per-sample jamming power e_j_avail / sum(beta).
  double power() const { return amplitude * amplitude; }
  double amplitude_at(std::size_t k) const { return beta[k] ? amplitude : 0.0; }
};

struct JamBudget {
  double e_j_avail = 0.0;
  double e_j_spent = 0.0;
  /// Empty for an all-zero schedule, where power and JSR are undefined.
  std::optional<double> p_j;
  double rho = 0.0;
  std::optional<double> jsr;
};

JamSchedule make_cjs(const MessagePlan& plan, double e_j_avail);

/// One pulse of t_d_us per frame starting start_offset_us into the frame.
/// Pulses inside the DATA field are labelled PerJDT, others PerJPT.
JamSchedule make_perj(const MessagePlan& plan, const FrameLayout& layout, const PhyConfig& cfg,
                      double t_d_us, double start_offset_us, double e_j_avail);

/// Preamble-targeted pulse covering exactly the critical HT-LTF repetition.
JamSchedule make_perjpt(const MessagePlan& plan, const FrameLayout& layout, double e_j_avail);

/// n_pulse equally spaced pulses per frame over [start_offset, frame end);
/// each pulse is duty * span / n_pulse wide. Offsets inside the preamble
/// are rejected.
JamSchedule make_repj(const MessagePlan& plan, const FrameLayout& layout, const PhyConfig& cfg,
                      int n_pulse, double duty, double start_offset_us, double e_j_avail);

/// Each eligible sample (DATA only for DT, whole frame for FT) is jammed
/// independently with probability rho_target. Throws EmptySchedule when no
/// sample is drawn.
JamSchedule make_ranj(const MessagePlan& plan, const FrameLayout& layout, double rho_target,
                      RandomPosition position, std::uint64_t seed, double e_j_avail);

/// Scheme-independent description of one schedule, used by sweeps and the
/// optimizer. `rho` is the target overall proportion sum(beta) / N_s; it is
/// ignored by CJS and PerJPT, whose shape is fixed.
struct ScheduleSpec {
  Scheme scheme = Scheme::kCJS;
  double rho = 1.0;
  int n_pulse = 1;
  /// Pulse-train start for PerJDT / RepJDT; negative means the DATA field start.
  double offset_us = -1.0;
  /// Share of the available budget the schedule spends.
  double energy_fraction = 1.0;
  std::uint64_t seed = 0;
};

/// Throws std::invalid_argument when the ScheduleSpec cannot be realized (e.g. a DT
/// proportion larger than the DATA share of the frame) and EmptySchedule when a
/// random draw selects nothing. The returned schedule carries spec.seed.
JamSchedule build_schedule(const ScheduleSpec& spec, const MessagePlan& plan,
                           const FrameLayout& layout, const PhyConfig& cfg, double e_j_avail);

/// Same budget and metadata with a caller-supplied indicator; the amplitude
/// is re-derived so the full budget is spread over the new jammed samples.
/// Throws EmptySchedule for an all-zero indicator.
JamSchedule with_beta(const JamSchedule& schedule, std::vector<std::uint8_t> beta);

/// beta(k) * s_j(k): circular Gaussian samples rescaled per frame so that each
/// frame carries exactly amplitude^2 times its jammed-sample count.
std::vector<cd> jamming_waveform(const JamSchedule& schedule);

/// JE, JP, JSR and jamming power of a schedule against the legitimate stream.
JamBudget account(const JamSchedule& schedule, std::span<const cd> jam_waveform,
                  const SampleStream& legit);
JamBudget account(const JamSchedule& schedule, const SampleStream& legit);

/// One row per contiguous pulse: frame_index,start_sample,end_sample with
/// frame-relative half-open sample bounds.
void export_schedule_csv(const JamSchedule& schedule, const std::filesystem::path& path);
std::string schedule_csv(const JamSchedule& schedule);

}  // namespace ijam
