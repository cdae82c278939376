#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "ijam/frame_layout.hpp"
#include "ijam/ofdm.hpp"

namespace ijam {

using cd = std::complex<double>;
using Bytes = std::vector<std::uint8_t>;
using Bits = std::vector<std::uint8_t>;

/// Complex baseband samples of back-to-back frames. Idle gaps between frames
/// are not materialized; frame_boundaries holds each frame's first sample.
struct SampleStream {
  std::vector<cd> samples;
  double sample_rate_hz = 20e6;
  std::vector<std::size_t> frame_boundaries;

  std::size_t size() const { return samples.size(); }
};

struct MacFrame {
  Bytes header;
  Bytes msdu;
  std::array<std::uint8_t, 4> fcs{};

  /// header || msdu || fcs, the PSDU handed to the PHY.
  Bytes psdu() const;
  std::size_t length() const { return header.size() + msdu.size() + fcs.size(); }
};

/// True when the trailing four bytes are the CRC-32 of everything before them.
bool fcs_valid(std::span<const std::uint8_t> psdu);

/// Splits the payload into n_frame MSDUs (last one zero-padded) and frames
/// each with a MAC header and FCS. Frame i carries sequence number i.
std::vector<MacFrame> build_mac_frames(std::span<const std::uint8_t> payload,
                                       const MessagePlan& plan, const PhyConfig& cfg);

// Bit-level helpers. Bytes are serialized least significant bit first.
Bits bytes_to_bits(std::span<const std::uint8_t> bytes);
Bytes bits_to_bytes(std::span<const std::uint8_t> bits);

/// SERVICE + PSDU + tail + pad: n_sym * L_DBPS bits.
Bits data_field_bits(std::span<const std::uint8_t> psdu, const FrameLayout& layout,
                     const PhyConfig& cfg);

/// Systematic rate-num/den expansion: each group of `num` bits is followed by
/// den-num copies of its even parity. This fills the L_DBPS / r bit slots of
/// an OFDM symbol without any error-correcting capability.
Bits expand_rate(std::span<const std::uint8_t> bits, CodingRate rate);
/// Drops the parity positions again.
Bits systematic_bits(std::span<const std::uint8_t> coded, CodingRate rate);

/// Known frequency-domain references of the training fields. Each field is a
/// seeded +-1 pattern on the 52 occupied subcarriers, scaled so its 80-sample
/// time-domain symbol has unit mean power.
struct PreambleReference {
  static constexpr std::uint64_t kSeed = 0x1EEE'802'11Dull;

  ofdm::Grid l_stf{};
  ofdm::Grid l_ltf{};
  ofdm::Grid ht_stf{};
  ofdm::Grid ht_ltf{};
  std::vector<cd> l_stf_time;   // 80 samples, the sync reference
  std::vector<cd> ht_ltf_time;  // 80 samples
};

const PreambleReference& preamble_reference();

/// BPSK payload of L-SIG (24 bits) and HT-SIG (48 bits) before rate-1/2 expansion.
Bits lsig_bits(std::size_t psdu_len_bytes);
Bits htsig_bits(std::size_t psdu_len_bytes);

/// One modulated frame plus the ground truth the receiver is scored against.
struct TxFrame {
  std::vector<cd> samples;          // n_samples_frame
  double gain = 1.0;                // normalization applied to the whole frame
  Bytes psdu;
  Bits coded_bits;                  // n_sym * L_DBPS / r
  std::vector<std::uint8_t> points; // 64-QAM indices, n_sym * 52
};

/// Unit mean DATA power is enforced by scaling the whole frame by `gain`, so
/// training fields and data share the same effective channel.
TxFrame modulate_frame(const MacFrame& frame, const FrameLayout& layout, const PhyConfig& cfg);

struct Transmission {
  MessagePlan plan;
  FrameLayout layout;
  std::vector<TxFrame> frames;
  SampleStream stream;
};

/// Frames, modulates and concatenates a whole message.
Transmission modulate_message(std::span<const std::uint8_t> payload, const PhyConfig& cfg);

/// E_b = (samples per OFDM symbol) * mean DATA |s|^2 / L_DBPS.
double bit_energy(const SampleStream& stream, const FrameLayout& layout, const PhyConfig& cfg);

/// Mean |s|^2 over the DATA windows of every frame.
double mean_data_power(const SampleStream& stream, const FrameLayout& layout);

Bytes read_payload(const std::filesystem::path& path);
void write_payload(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
/// Little-endian interleaved float64 I/Q pairs.
void write_iq_f64le(const std::filesystem::path& path, const SampleStream& stream);

/// Deterministic pseudo-random payload used when no input file is given.
Bytes synthetic_payload(std::size_t n_bytes, std::uint64_t seed);

}  // namespace ijam
