#include "ijam/phy_waveform.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <stdexcept>

#include "ijam/constellation.hpp"
#include "ijam/crc32.hpp"
#include "ijam/rng.hpp"

namespace ijam {

Bytes MacFrame::psdu() const {
  Bytes out;
  out.reserve(length());
  out.insert(out.end(), header.begin(), header.end());
  out.insert(out.end(), msdu.begin(), msdu.end());
  out.insert(out.end(), fcs.begin(), fcs.end());
  return out;
}

bool fcs_valid(std::span<const std::uint8_t> psdu) {
  if (psdu.size() < 4) return false;
  const auto body = psdu.first(psdu.size() - 4);
  const std::uint32_t c = crc32(body);
  const auto tail = psdu.last(4);
  const std::uint32_t stored = static_cast<std::uint32_t>(tail[0]) |
                               (static_cast<std::uint32_t>(tail[1]) << 8) |
                               (static_cast<std::uint32_t>(tail[2]) << 16) |
                               (static_cast<std::uint32_t>(tail[3]) << 24);
  return c == stored;
}

namespace {

Bytes make_header(std::size_t size, std::size_t sequence) {
  // Data frame, To-DS clear, fixed locally administered addresses.
  Bytes h{0x08, 0x00, 0x00, 0x00,
          0x02, 0x00, 0x00, 0x00, 0x00, 0x0b,   // addr1 (Bob)
          0x02, 0x00, 0x00, 0x00, 0x00, 0x0a,   // addr2 (Alice)
          0x02, 0x00, 0x00, 0x00, 0x00, 0x0a,   // addr3
          0x00, 0x00};
  const auto seq = static_cast<std::uint16_t>((sequence & 0x0FFF) << 4);
  h[22] = static_cast<std::uint8_t>(seq & 0xFF);
  h[23] = static_cast<std::uint8_t>(seq >> 8);
  h.resize(size, 0x00);
  return h;
}

}  // namespace

std::vector<MacFrame> build_mac_frames(std::span<const std::uint8_t> payload,
                                       const MessagePlan& plan, const PhyConfig& cfg) {
  if (payload.size() != plan.l_message_bytes) {
    throw std::invalid_argument("build_mac_frames: payload size does not match plan");
  }
  if (cfg.mac_overhead_bytes < 4) {
    throw std::invalid_argument("build_mac_frames: MAC overhead must include the 4-byte FCS");
  }
  std::vector<MacFrame> frames;
  frames.reserve(plan.n_frame);
  for (std::size_t i = 0; i < plan.n_frame; ++i) {
    MacFrame f;
    f.header = make_header(cfg.mac_overhead_bytes - 4, i);
    const std::size_t begin = i * cfg.l_msdu_bytes;
    const std::size_t end = std::min(begin + cfg.l_msdu_bytes, payload.size());
    f.msdu.assign(payload.begin() + static_cast<std::ptrdiff_t>(begin),
                  payload.begin() + static_cast<std::ptrdiff_t>(end));
    f.msdu.resize(cfg.l_msdu_bytes, 0x00);
    Bytes body = f.header;
    body.insert(body.end(), f.msdu.begin(), f.msdu.end());
    const std::uint32_t c = crc32(body);
    for (int b = 0; b < 4; ++b) f.fcs[b] = static_cast<std::uint8_t>((c >> (8 * b)) & 0xFF);
    frames.push_back(std::move(f));
  }
  return frames;
}

Bits bytes_to_bits(std::span<const std::uint8_t> bytes) {
  Bits bits;
  bits.reserve(bytes.size() * 8);
  for (std::uint8_t b : bytes) {
    for (int i = 0; i < 8; ++i) bits.push_back(static_cast<std::uint8_t>((b >> i) & 1u));
  }
  return bits;
}

Bytes bits_to_bytes(std::span<const std::uint8_t> bits) {
  Bytes bytes(bits.size() / 8, 0);
  for (std::size_t i = 0; i < bytes.size() * 8; ++i) {
    bytes[i / 8] |= static_cast<std::uint8_t>((bits[i] & 1u) << (i % 8));
  }
  return bytes;
}

Bits data_field_bits(std::span<const std::uint8_t> psdu, const FrameLayout& layout,
                     const PhyConfig& cfg) {
  if (psdu.size() != layout.psdu_len_bytes) {
    throw std::invalid_argument("data_field_bits: PSDU length does not match layout");
  }
  Bits bits(kServiceBits, 0);
  const Bits body = bytes_to_bits(psdu);
  bits.insert(bits.end(), body.begin(), body.end());
  bits.resize(bits.size() + kTailBits + static_cast<std::size_t>(layout.l_pad_bits), 0);
  if (bits.size() != static_cast<std::size_t>(layout.n_sym) * static_cast<std::size_t>(cfg.l_dbps)) {
    throw std::logic_error("data_field_bits: padded length is not n_sym * L_DBPS");
  }
  return bits;
}

Bits expand_rate(std::span<const std::uint8_t> bits, CodingRate rate) {
  const auto num = static_cast<std::size_t>(rate.num);
  const auto den = static_cast<std::size_t>(rate.den);
  if (bits.size() % num != 0) throw std::invalid_argument("expand_rate: partial rate group");
  Bits out;
  out.reserve(bits.size() / num * den);
  for (std::size_t g = 0; g < bits.size(); g += num) {
    std::uint8_t parity = 0;
    for (std::size_t i = 0; i < num; ++i) {
      out.push_back(bits[g + i]);
      parity ^= bits[g + i];
    }
    for (std::size_t i = num; i < den; ++i) out.push_back(parity);
  }
  return out;
}

Bits systematic_bits(std::span<const std::uint8_t> coded, CodingRate rate) {
  const auto num = static_cast<std::size_t>(rate.num);
  const auto den = static_cast<std::size_t>(rate.den);
  if (coded.size() % den != 0) throw std::invalid_argument("systematic_bits: partial rate group");
  Bits out;
  out.reserve(coded.size() / den * num);
  for (std::size_t g = 0; g < coded.size(); g += den) {
    out.insert(out.end(), coded.begin() + static_cast<std::ptrdiff_t>(g),
               coded.begin() + static_cast<std::ptrdiff_t>(g + num));
  }
  return out;
}

namespace {

ofdm::Grid random_training_grid(std::mt19937_64& eng) {
  ofdm::Grid g{};
  for (std::size_t bin : ofdm::data_bins()) g[bin] = (eng() & 1u) ? 1.0 : -1.0;
  return g;
}

// Rescales the grid so the modulated 80-sample symbol has unit mean power.
std::vector<cd> normalize_training(ofdm::Grid& grid) {
  std::vector<cd> t(ofdm::kSymbolSamples);
  ofdm::modulate(grid, t);
  double p = 0.0;
  for (const cd& v : t) p += std::norm(v);
  const double scale = 1.0 / std::sqrt(p / static_cast<double>(t.size()));
  for (auto& v : grid) v *= scale;
  for (auto& v : t) v *= scale;
  return t;
}

}  // namespace

const PreambleReference& preamble_reference() {
  static const PreambleReference ref = [] {
    PreambleReference r;
    std::mt19937_64 eng(PreambleReference::kSeed);
    r.l_stf = random_training_grid(eng);
    r.l_ltf = random_training_grid(eng);
    r.ht_stf = random_training_grid(eng);
    r.ht_ltf = random_training_grid(eng);
    r.l_stf_time = normalize_training(r.l_stf);
    normalize_training(r.l_ltf);
    normalize_training(r.ht_stf);
    r.ht_ltf_time = normalize_training(r.ht_ltf);
    return r;
  }();
  return ref;
}

namespace {

void put_field(Bits& bits, std::uint32_t value, int width) {
  for (int i = 0; i < width; ++i) bits.push_back(static_cast<std::uint8_t>((value >> i) & 1u));
}

}  // namespace

Bits lsig_bits(std::size_t psdu_len_bytes) {
  // RATE (6 Mb/s legacy spoof), reserved, LENGTH, even parity, tail.
  Bits b;
  put_field(b, 0b1011, 4);
  put_field(b, 0, 1);
  put_field(b, static_cast<std::uint32_t>(psdu_len_bytes & 0x0FFF), 12);
  std::uint8_t parity = 0;
  for (auto v : b) parity ^= v;
  b.push_back(parity);
  put_field(b, 0, 6);
  return b;
}

Bits htsig_bits(std::size_t psdu_len_bytes) {
  // MCS 6 (64-QAM, r = 3/4, one stream), 20 MHz, HT length; remaining
  // control bits, CRC and tail left zero.
  Bits b;
  put_field(b, 6, 7);
  put_field(b, 0, 1);
  put_field(b, static_cast<std::uint32_t>(psdu_len_bytes & 0xFFFF), 16);
  b.resize(48, 0);
  return b;
}

namespace {

void modulate_sig(std::span<const std::uint8_t> bits, std::span<cd> out) {
  const Bits coded = expand_rate(bits, CodingRate{1, 2});
  const auto& bins = ofdm::sig_bins();
  const std::size_t n_sym = coded.size() / bins.size();
  for (std::size_t s = 0; s < n_sym; ++s) {
    ofdm::Grid g{};
    for (std::size_t i = 0; i < bins.size(); ++i) g[bins[i]] = bpsk::point(coded[s * bins.size() + i]);
    ofdm::modulate(g, out.subspan(s * ofdm::kSymbolSamples, ofdm::kSymbolSamples));
  }
}

void put_training(const ofdm::Grid& grid, std::span<cd> out) {
  for (std::size_t s = 0; s < out.size() / ofdm::kSymbolSamples; ++s) {
    ofdm::modulate(grid, out.subspan(s * ofdm::kSymbolSamples, ofdm::kSymbolSamples));
  }
}

}  // namespace

TxFrame modulate_frame(const MacFrame& frame, const FrameLayout& layout, const PhyConfig& cfg) {
  if (cfg.samples_per_symbol() != ofdm::kSymbolSamples) {
    throw std::invalid_argument("modulate_frame: OFDM realization requires 80 samples per symbol");
  }
  if (cfg.modulation_order_bits != qam64::kBitsPerSymbol ||
      cfg.constellation_symbols_per_ofdm() != static_cast<int>(ofdm::kDataSubcarriers)) {
    throw std::invalid_argument("modulate_frame: configuration must give 52 64-QAM points per symbol");
  }
  if (frame.length() != layout.psdu_len_bytes) {
    throw std::invalid_argument("modulate_frame: layout does not match frame LENGTH");
  }

  TxFrame tx;
  tx.psdu = frame.psdu();
  tx.samples.assign(layout.n_samples_frame, cd{});
  std::span<cd> all(tx.samples);
  const auto field = [&](FieldId id) {
    const SampleRange r = layout.window(id);
    return all.subspan(r.begin, r.size());
  };

  const PreambleReference& ref = preamble_reference();
  put_training(ref.l_stf, field(FieldId::kLStf));
  put_training(ref.l_ltf, field(FieldId::kLLtf));
  modulate_sig(lsig_bits(layout.psdu_len_bytes), field(FieldId::kLSig));
  modulate_sig(htsig_bits(layout.psdu_len_bytes), field(FieldId::kHtSig));
  put_training(ref.ht_stf, field(FieldId::kHtStf));
  put_training(ref.ht_ltf, field(FieldId::kHtLtf));

  tx.coded_bits = expand_rate(data_field_bits(tx.psdu, layout, cfg), cfg.coding_rate);
  if (tx.coded_bits.size() % qam64::kBitsPerSymbol != 0) {
    throw std::logic_error("modulate_frame: coded bits not a whole number of constellation symbols");
  }
  const std::size_t n_points = tx.coded_bits.size() / qam64::kBitsPerSymbol;
  tx.points.resize(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    tx.points[i] = static_cast<std::uint8_t>(qam64::index_from_bits(
        std::span(tx.coded_bits).subspan(i * qam64::kBitsPerSymbol, qam64::kBitsPerSymbol)));
  }

  const std::span<cd> data = field(FieldId::kData);
  const auto& bins = ofdm::data_bins();
  for (int s = 0; s < layout.n_sym; ++s) {
    ofdm::Grid g{};
    for (std::size_t i = 0; i < bins.size(); ++i) {
      g[bins[i]] = qam64::point(tx.points[static_cast<std::size_t>(s) * bins.size() + i]);
    }
    ofdm::modulate(g, data.subspan(static_cast<std::size_t>(s) * ofdm::kSymbolSamples,
                                   ofdm::kSymbolSamples));
  }

  double p = 0.0;
  for (const cd& v : data) p += std::norm(v);
  p /= static_cast<double>(data.size());
  tx.gain = 1.0 / std::sqrt(p);
  for (auto& v : tx.samples) v *= tx.gain;
  return tx;
}

Transmission modulate_message(std::span<const std::uint8_t> payload, const PhyConfig& cfg) {
  Transmission t;
  t.plan = plan_message(payload.size(), cfg);
  t.layout = layout_frame(t.plan.psdu_len_bytes, cfg);
  const auto mac = build_mac_frames(payload, t.plan, cfg);
  t.frames.reserve(mac.size());
  t.stream.sample_rate_hz = cfg.sample_rate_hz;
  t.stream.samples.reserve(t.plan.n_s_total);
  for (const MacFrame& f : mac) {
    t.frames.push_back(modulate_frame(f, t.layout, cfg));
    t.stream.frame_boundaries.push_back(t.stream.samples.size());
    const auto& s = t.frames.back().samples;
    t.stream.samples.insert(t.stream.samples.end(), s.begin(), s.end());
  }
  return t;
}

double mean_data_power(const SampleStream& stream, const FrameLayout& layout) {
  if (stream.samples.empty()) throw std::invalid_argument("mean_data_power: empty stream");
  const SampleRange data = layout.data_window();
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t start : stream.frame_boundaries) {
    if (start + layout.n_samples_frame > stream.size()) {
      throw std::invalid_argument("mean_data_power: frame boundary beyond stream");
    }
    for (std::size_t k = data.begin; k < data.end; ++k) sum += std::norm(stream.samples[start + k]);
    count += data.size();
  }
  return count ? sum / static_cast<double>(count) : 0.0;
}

double bit_energy(const SampleStream& stream, const FrameLayout& layout, const PhyConfig& cfg) {
  return static_cast<double>(cfg.samples_per_symbol()) * mean_data_power(stream, layout) /
         cfg.l_dbps;
}

Bytes read_payload(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open payload file " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_payload(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void write_iq_f64le(const std::filesystem::path& path, const SampleStream& stream) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const auto put = [&](double v) {
    const auto u = std::bit_cast<std::uint64_t>(v);
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((u >> (8 * i)) & 0xFF);
    out.write(b, 8);
  };
  for (const cd& v : stream.samples) {
    put(v.real());
    put(v.imag());
  }
}

Bytes synthetic_payload(std::size_t n_bytes, std::uint64_t seed) {
  auto eng = substream(seed, StreamTag::kPayload, 0);
  Bytes b(n_bytes);
  for (auto& v : b) v = static_cast<std::uint8_t>(eng() >> 56);
  return b;
}

}  // namespace ijam
