#include "ijam/frame_layout.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ijam {

std::string_view to_string(FieldId id) {
  switch (id) {
    case FieldId::kLStf: return "L-STF";
    case FieldId::kLLtf: return "L-LTF";
    case FieldId::kLSig: return "L-SIG";
    case FieldId::kHtSig: return "HT-SIG";
    case FieldId::kHtStf: return "HT-STF";
    case FieldId::kHtLtf: return "HT-LTF";
    case FieldId::kData: return "DATA";
  }
  return "?";
}

void PhyConfig::validate() const {
  if (!(sample_rate_hz > 0) || ofdm_symbol_us <= 0 || !(t_idle_us > 0)) {
    throw std::invalid_argument("PhyConfig: durations and sample rate must be positive");
  }
  const double sps = sample_rate_hz * ofdm_symbol_us * 1e-6;
  if (std::abs(sps - std::round(sps)) > 1e-9 || std::round(sps) < 1) {
    throw std::invalid_argument("PhyConfig: symbol duration must span an integer sample count");
  }
  if (l_dbps <= 0 || coding_rate.num <= 0 || coding_rate.den < coding_rate.num ||
      modulation_order_bits <= 0) {
    throw std::invalid_argument("PhyConfig: invalid rate parameters");
  }
  if ((l_dbps * coding_rate.den) % coding_rate.num != 0 ||
      (l_dbps * coding_rate.den / coding_rate.num) % modulation_order_bits != 0) {
    throw std::invalid_argument("PhyConfig: L_DBPS / r must be divisible by log2 M");
  }
  if (l_dbps % coding_rate.num != 0) {
    throw std::invalid_argument("PhyConfig: L_DBPS must be a whole number of rate groups");
  }
  if (l_msdu_bytes == 0) throw std::invalid_argument("PhyConfig: l_msdu_bytes must be positive");
}

std::size_t PhyConfig::samples_per_symbol() const {
  return static_cast<std::size_t>(std::llround(sample_rate_hz * ofdm_symbol_us * 1e-6));
}

std::size_t PhyConfig::us_to_samples(double us) const {
  return static_cast<std::size_t>(std::llround(us * sample_rate_hz * 1e-6));
}

int PhyConfig::coded_bits_per_symbol() const {
  return l_dbps * coding_rate.den / coding_rate.num;
}

int PhyConfig::constellation_symbols_per_ofdm() const {
  return coded_bits_per_symbol() / modulation_order_bits;
}

const SampleRange& FrameLayout::window(FieldId id) const {
  for (const auto& w : field_windows) {
    if (w.id == id) return w.range;
  }
  throw std::logic_error("FrameLayout: missing field window");
}

int data_symbol_count(std::size_t length_bytes, int l_dbps) {
  const std::size_t bits = kServiceBits + 8 * length_bytes + kTailBits;
  const auto d = static_cast<std::size_t>(l_dbps);
  return static_cast<int>((bits + d - 1) / d);
}

MessagePlan plan_message(std::size_t l_message_bytes, const PhyConfig& cfg) {
  cfg.validate();
  if (l_message_bytes == 0) throw std::invalid_argument("plan_message: empty message");
  MessagePlan plan;
  plan.l_message_bytes = l_message_bytes;
  plan.n_frame = (l_message_bytes + cfg.l_msdu_bytes - 1) / cfg.l_msdu_bytes;
  plan.l_pad_message_bytes = plan.n_frame * cfg.l_msdu_bytes - l_message_bytes;
  plan.psdu_len_bytes = cfg.max_psdu_bytes();
  const FrameLayout layout = layout_frame(plan.psdu_len_bytes, cfg);
  plan.n_samples_frame = layout.n_samples_frame;
  plan.t_signal_us =
      static_cast<double>(plan.n_frame) * (static_cast<double>(layout.t_frame_us) + cfg.t_idle_us);
  plan.n_s_total = plan.n_frame * layout.n_samples_frame;
  return plan;
}

FrameLayout layout_frame(std::size_t psdu_len_bytes, const PhyConfig& cfg) {
  cfg.validate();
  if (psdu_len_bytes == 0) throw std::invalid_argument("layout_frame: LENGTH must be >= 1");
  if (psdu_len_bytes > cfg.max_psdu_bytes()) {
    throw std::invalid_argument("layout_frame: LENGTH " + std::to_string(psdu_len_bytes) +
                                " exceeds MSDU + MAC overhead bound");
  }
  FrameLayout layout;
  layout.psdu_len_bytes = psdu_len_bytes;
  layout.n_sym = data_symbol_count(psdu_len_bytes, cfg.l_dbps);
  layout.l_pad_bits = layout.n_sym * cfg.l_dbps -
                      static_cast<int>(kServiceBits + 8 * psdu_len_bytes + kTailBits);
  layout.t_frame_us = kPreambleUs + static_cast<std::int64_t>(layout.n_sym) * cfg.ofdm_symbol_us;

  // Field lengths in OFDM symbol periods; HT-LTF holds three repetitions.
  constexpr std::array<std::pair<FieldId, int>, 6> kPreamble{{{FieldId::kLStf, 1},
                                                              {FieldId::kLLtf, 1},
                                                              {FieldId::kLSig, 1},
                                                              {FieldId::kHtSig, 2},
                                                              {FieldId::kHtStf, 1},
                                                              {FieldId::kHtLtf, 3}}};
  const std::size_t sps = cfg.samples_per_symbol();
  std::size_t pos = 0;
  for (const auto& [id, symbols] : kPreamble) {
    const std::size_t len = static_cast<std::size_t>(symbols) * sps;
    layout.field_windows.push_back({id, {pos, pos + len}});
    pos += len;
  }
  const std::size_t data_len = static_cast<std::size_t>(layout.n_sym) * sps;
  layout.field_windows.push_back({FieldId::kData, {pos, pos + data_len}});
  layout.n_samples_frame = pos + data_len;

  // Last HT-LTF repetition, [32, 36) us.
  const SampleRange htltf = layout.window(FieldId::kHtLtf);
  layout.htltf_critical_window = {htltf.end - sps, htltf.end};
  return layout;
}

FieldId field_of_sample(const FrameLayout& layout, std::size_t k) {
  if (k >= layout.n_samples_frame) {
    throw std::out_of_range("field_of_sample: index " + std::to_string(k) + " outside frame");
  }
  for (const auto& w : layout.field_windows) {
    if (w.range.contains(k)) return w.id;
  }
  throw std::logic_error("field_of_sample: windows do not cover the frame");
}

}  // namespace ijam
