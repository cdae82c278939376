#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ijam/frame_layout.hpp"
#include "ijam/ofdm.hpp"
#include "ijam/phy_waveform.hpp"

namespace ijam {

/// Channel and noise-level estimate taken from the critical HT-LTF repetition.
struct RxEstimate {
  cd h_hat{};                 // scalar LS fit over all occupied subcarriers
  ofdm::Grid h_subcarrier{};  // per-subcarrier LS estimates used for equalization
  double noise_level_hat = 0.0;
  std::size_t sync_index = 0;
  bool htltf_corrupted = false;
};

struct DecodeResult {
  Bytes psdu;                    // recovered PSDU bytes
  Bits bits;                     // recovered data-field bits (systematic positions)
  std::size_t symbol_errors = 0; // 64-QAM points decided wrongly
  std::size_t n_symbols = 0;
  std::size_t bit_errors = 0;    // coded bit decisions that differ from the transmitted ones
  std::size_t n_bits = 0;
  bool fcs_pass = false;
  bool discarded = false;
  bool htltf_corrupted = false;
  bool sync_failed = false;
};

struct ReceiverOptions {
  double sync_threshold = 0.5;
  /// Sync search covers nominal start +- this many samples.
  std::size_t sync_search = 16;
  /// htltf_corrupted when noise_level_hat exceeds this factor times the
  /// clean reference level.
  double corruption_factor = 10.0;
  /// Expected per-subcarrier noise level of a clean frame (see
  /// clean_noise_reference). Floored at kNoiseFloor.
  double reference_noise_level = 0.0;
  bool discard_on_fcs_failure = true;
  /// Preamble bypass: decode with this stale estimate instead of the frame's HT-LTF.
  std::optional<RxEstimate> bypass_estimate;

  static constexpr double kNoiseFloor = 1e-9;
};

/// Per-subcarrier noise level produced by time-domain noise of variance n0.
double clean_noise_reference(double n0);

/// Normalized cross-correlation of `rx` against `reference` at a lag.
double normalized_correlation(std::span<const cd> rx, std::span<const cd> reference,
                              std::size_t lag);

/// Lag in [search_begin, search_end] maximizing normalized correlation with the
/// L-STF reference. Throws SyncFailure when the peak is below `threshold`.
std::size_t sync_detect(std::span<const cd> rx, std::span<const cd> reference,
                        std::size_t search_begin, std::size_t search_end, double threshold);
std::size_t sync_detect(std::span<const cd> rx, double threshold = 0.5);

/// `frame` starts at the detected frame start and spans at least the preamble.
RxEstimate estimate_htltf(std::span<const cd> frame, const FrameLayout& layout,
                          const ReceiverOptions& opts = {});

/// Equalizes (MMSE with the estimated noise level), hard-decides, and scores
/// the DATA field against the transmitted frame.
DecodeResult demodulate(std::span<const cd> frame, const FrameLayout& layout,
                        const RxEstimate& est, const TxFrame& truth, const PhyConfig& cfg,
                        const ReceiverOptions& opts = {});

/// Sync, estimate and demodulate every frame of a received stream.
std::vector<DecodeResult> decode_stream(const SampleStream& rx, const Transmission& tx,
                                        const PhyConfig& cfg, const ReceiverOptions& opts = {});

struct ErrorRates {
  /// Fraction of wrong binary decisions over all DATA fields; saturates at
  /// 0.5 under random decisions. This is the reported SER metric.
  double ser = 0.0;
  /// Fraction of wrong 64-QAM constellation decisions.
  double constellation_ser = 0.0;
  std::size_t bit_errors = 0;
  std::size_t symbol_errors = 0;
  std::size_t frames_discarded = 0;
  std::size_t frames_htltf_corrupted = 0;
};

/// Discarded frames are still scored decision by decision.
ErrorRates measure_ser(std::span<const DecodeResult> results);

/// MSDU bytes of every frame (kept even when the FCS failed), concatenated
/// and truncated to the message length.
Bytes recovered_payload(std::span<const DecodeResult> results, const MessagePlan& plan,
                        const PhyConfig& cfg);

/// frame,symbol_errors,fcs_pass,htltf_corrupted
std::string decode_log_csv(std::span<const DecodeResult> results);

}  // namespace ijam
