#include "ijam/channel_link.hpp"

#include <cmath>
#include <stdexcept>

#include "ijam/rng.hpp"

namespace ijam {

void ChannelSpec::validate() const {
  if (!(n0_bob >= 0.0) || !(n0_eve >= 0.0)) {
    throw std::invalid_argument("ChannelSpec: noise variances must be non-negative");
  }
  for (const cd& h : {h_ab, h_ae, h_jb, h_je}) {
    if (!std::isfinite(h.real()) || !std::isfinite(h.imag())) {
      throw std::invalid_argument("ChannelSpec: gains must be finite");
    }
  }
}

SampleStream receive(const SampleStream& legit, std::span<const cd> jam_waveform,
                     const ChannelSpec& chan, Receiver who, std::uint64_t seed,
                     std::size_t n_samples_frame) {
  chan.validate();
  if (jam_waveform.size() != legit.size()) {
    throw std::invalid_argument("receive: jamming and legitimate streams differ in length");
  }
  if (n_samples_frame == 0) throw std::invalid_argument("receive: zero frame length");
  const bool bob = who == Receiver::kBob;
  const cd h = bob ? chan.h_ab : chan.h_ae;
  const cd hj = bob ? chan.h_jb : chan.h_je;
  const double n0 = bob ? chan.n0_bob : chan.n0_eve;
  const StreamTag tag = bob ? StreamTag::kNoiseBob : StreamTag::kNoiseEve;

  SampleStream out;
  out.sample_rate_hz = legit.sample_rate_hz;
  out.frame_boundaries = legit.frame_boundaries;
  out.samples.resize(legit.size());
  const auto n = static_cast<long>(legit.size());
  const std::size_t n_frames = (legit.size() + n_samples_frame - 1) / n_samples_frame;
  for (std::size_t f = 0; f < n_frames; ++f) {
    ComplexGaussian noise(substream(seed, tag, f));
    const std::size_t end = std::min(legit.size(), (f + 1) * n_samples_frame);
    for (std::size_t k = f * n_samples_frame; k < end; ++k) {
      cd r = h * legit.samples[k];
      const long src = static_cast<long>(k) + chan.sync_offset_samples;
      if (hj != cd{} && src >= 0 && src < n) r += hj * jam_waveform[static_cast<std::size_t>(src)];
      if (n0 > 0.0) r += noise(n0);
      out.samples[k] = r;
    }
  }
  return out;
}

SampleStream receive(const SampleStream& legit, const JamSchedule& jam, const ChannelSpec& chan,
                     Receiver who, std::uint64_t seed) {
  const auto w = jamming_waveform(jam);
  return receive(legit, w, chan, who, seed, jam.n_samples_frame);
}

}  // namespace ijam
