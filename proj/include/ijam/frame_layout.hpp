#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace ijam {

/// Half-open sample range [begin, end).
struct SampleRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool contains(std::size_t k) const { return k >= begin && k < end; }
  bool operator==(const SampleRange&) const = default;
};

enum class FieldId { kLStf, kLLtf, kLSig, kHtSig, kHtStf, kHtLtf, kData };

std::string_view to_string(FieldId id);

struct CodingRate {
  int num = 3;
  int den = 4;
  double value() const { return static_cast<double>(num) / den; }
};

/// HT-mixed 20 MHz PHY parameters. Durations are in microseconds.
struct PhyConfig {
  double sample_rate_hz = 20e6;
  int ofdm_symbol_us = 4;
  int l_dbps = 234;
  CodingRate coding_rate{3, 4};
  int modulation_order_bits = 6;
  std::size_t l_msdu_bytes = 2304;
  std::size_t mac_overhead_bytes = 28;  // 24 header + 4 FCS
  double t_idle_us = 10.0;

  /// Throws std::invalid_argument when the invariants do not hold.
  void validate() const;

  /// Nearest whole sample count for a duration.
  std::size_t us_to_samples(double us) const;
  std::size_t samples_per_symbol() const;
  /// Coded bits carried by one OFDM data symbol (L_DBPS / r).
  int coded_bits_per_symbol() const;
  /// Constellation points per OFDM data symbol.
  int constellation_symbols_per_ofdm() const;
  std::size_t max_psdu_bytes() const { return l_msdu_bytes + mac_overhead_bytes; }
};

struct FieldWindow {
  FieldId id;
  SampleRange range;
};

inline constexpr int kServiceBits = 16;
inline constexpr int kTailBits = 6;
inline constexpr int kPreambleUs = 36;

struct FrameLayout {
  std::vector<FieldWindow> field_windows;
  std::size_t psdu_len_bytes = 0;
  int n_sym = 0;
  int l_pad_bits = 0;
  std::int64_t t_frame_us = 0;
  std::size_t n_samples_frame = 0;
  SampleRange htltf_critical_window;

  const SampleRange& window(FieldId id) const;
  SampleRange data_window() const { return window(FieldId::kData); }
  std::size_t preamble_samples() const { return data_window().begin; }
};

/// Segmentation of a message into fixed-size MSDUs.
struct MessagePlan {
  std::size_t l_message_bytes = 0;
  std::size_t n_frame = 0;
  std::size_t l_pad_message_bytes = 0;
  double t_signal_us = 0.0;
  std::size_t n_s_total = 0;
  std::size_t psdu_len_bytes = 0;
  std::size_t n_samples_frame = 0;
};

/// Ceiling-formula data symbol count for a PSDU of `length_bytes`.
int data_symbol_count(std::size_t length_bytes, int l_dbps);

MessagePlan plan_message(std::size_t l_message_bytes, const PhyConfig& cfg);

FrameLayout layout_frame(std::size_t psdu_len_bytes, const PhyConfig& cfg);

/// Throws std::out_of_range when k is outside the frame.
FieldId field_of_sample(const FrameLayout& layout, std::size_t k);

}  // namespace ijam
