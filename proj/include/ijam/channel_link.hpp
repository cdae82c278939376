#pragma once

#include <complex>
#include <cstdint>
#include <span>

#include "ijam/jam_scheduler.hpp"
#include "ijam/phy_waveform.hpp"

namespace ijam {

/// Flat complex link gains (constant over the transmission) and receiver
/// noise variances.
struct ChannelSpec {
  cd h_ab{1.0, 0.0};
  cd h_ae{1.0, 0.0};
  cd h_jb{0.0, 0.0};
  cd h_je{1.0, 0.0};
  double n0_bob = 1e-4;
  double n0_eve = 1e-3;
  /// The jamming component at sample k is taken from sample k + offset of
  /// the jammer's stream; out-of-range positions contribute nothing.
  long sync_offset_samples = 0;

  void validate() const;
};

enum class Receiver { kBob, kEve };

/// r(k) = h s(k) + h_j beta(k+d) s_j(k+d) + n(k); noise drawn from per-frame
/// substreams of `seed`.
SampleStream receive(const SampleStream& legit, std::span<const cd> jam_waveform,
                     const ChannelSpec& chan, Receiver who, std::uint64_t seed,
                     std::size_t n_samples_frame);

/// Convenience overload that synthesizes the jamming waveform from the schedule.
SampleStream receive(const SampleStream& legit, const JamSchedule& jam, const ChannelSpec& chan,
                     Receiver who, std::uint64_t seed);

}  // namespace ijam
