#include "ijam/receiver_sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ijam/constellation.hpp"
#include "ijam/errors.hpp"

namespace ijam {

double clean_noise_reference(double n0) {
  return n0 * static_cast<double>(ofdm::kDataSubcarriers) / static_cast<double>(ofdm::kFftSize);
}

double normalized_correlation(std::span<const cd> rx, std::span<const cd> reference,
                              std::size_t lag) {
  if (lag + reference.size() > rx.size()) return 0.0;
  cd acc{};
  double e_rx = 0.0;
  double e_ref = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    acc += rx[lag + i] * std::conj(reference[i]);
    e_rx += std::norm(rx[lag + i]);
    e_ref += std::norm(reference[i]);
  }
  if (e_rx <= 0.0 || e_ref <= 0.0) return 0.0;
  return std::abs(acc) / std::sqrt(e_rx * e_ref);
}

std::size_t sync_detect(std::span<const cd> rx, std::span<const cd> reference,
                        std::size_t search_begin, std::size_t search_end, double threshold) {
  if (reference.empty() || rx.size() < reference.size()) {
    throw std::invalid_argument("sync_detect: input shorter than the reference");
  }
  search_end = std::min(search_end, rx.size() - reference.size());
  double best = -1.0;
  std::size_t best_lag = search_begin;
  for (std::size_t lag = search_begin; lag <= search_end; ++lag) {
    const double c = normalized_correlation(rx, reference, lag);
    if (c > best) {
      best = c;
      best_lag = lag;
    }
  }
  if (best < threshold) throw SyncFailure("sync_detect: no correlation peak above threshold");
  return best_lag;
}

std::size_t sync_detect(std::span<const cd> rx, double threshold) {
  const auto& ref = preamble_reference().l_stf_time;
  if (rx.size() < ref.size()) throw std::invalid_argument("sync_detect: input shorter than reference");
  return sync_detect(rx, ref, 0, rx.size() - ref.size(), threshold);
}

RxEstimate estimate_htltf(std::span<const cd> frame, const FrameLayout& layout,
                          const ReceiverOptions& opts) {
  const SampleRange crit = layout.htltf_critical_window;
  if (frame.size() < crit.end) throw std::invalid_argument("estimate_htltf: frame too short");
  const ofdm::Grid y = ofdm::demodulate(frame.subspan(crit.begin + ofdm::kCyclicPrefix, ofdm::kFftSize));
  const ofdm::Grid& x = preamble_reference().ht_ltf;

  RxEstimate est;
  cd num{};
  double den = 0.0;
  for (std::size_t bin : ofdm::data_bins()) {
    est.h_subcarrier[bin] = y[bin] / x[bin];
    num += y[bin] * std::conj(x[bin]);
    den += std::norm(x[bin]);
  }
  est.h_hat = num / den;
  double residual = 0.0;
  for (std::size_t bin : ofdm::data_bins()) residual += std::norm(y[bin] - est.h_hat * x[bin]);
  est.noise_level_hat = residual / static_cast<double>(ofdm::kDataSubcarriers - 1);
  const double reference = std::max(opts.reference_noise_level, ReceiverOptions::kNoiseFloor);
  est.htltf_corrupted = est.noise_level_hat > opts.corruption_factor * reference;
  return est;
}

DecodeResult demodulate(std::span<const cd> frame, const FrameLayout& layout,
                        const RxEstimate& est, const TxFrame& truth, const PhyConfig& cfg,
                        const ReceiverOptions& opts) {
  if (frame.size() < layout.n_samples_frame) throw std::invalid_argument("demodulate: frame too short");
  const RxEstimate& e = opts.bypass_estimate ? *opts.bypass_estimate : est;
  const SampleRange data = layout.data_window();
  const auto& bins = ofdm::data_bins();

  DecodeResult r;
  r.htltf_corrupted = est.htltf_corrupted;
  r.n_symbols = static_cast<std::size_t>(layout.n_sym) * bins.size();
  r.n_bits = r.n_symbols * qam64::kBitsPerSymbol;
  if (truth.points.size() != r.n_symbols) {
    throw std::invalid_argument("demodulate: ground truth does not match layout");
  }
  Bits coded(r.n_bits);
  for (int s = 0; s < layout.n_sym; ++s) {
    const std::size_t start = data.begin + static_cast<std::size_t>(s) * ofdm::kSymbolSamples;
    const ofdm::Grid y = ofdm::demodulate(frame.subspan(start + ofdm::kCyclicPrefix, ofdm::kFftSize));
    for (std::size_t i = 0; i < bins.size(); ++i) {
      const cd h = e.h_subcarrier[bins[i]];
      const double den = std::norm(h) + e.noise_level_hat;
      const cd x_hat = den > 0.0 ? std::conj(h) * y[bins[i]] / den : cd{};
      const unsigned decided = qam64::slice(x_hat);
      const std::size_t idx = static_cast<std::size_t>(s) * bins.size() + i;
      const unsigned sent = truth.points[idx];
      if (decided != sent) ++r.symbol_errors;
      r.bit_errors += static_cast<std::size_t>(std::popcount(decided ^ sent));
      qam64::bits_from_index(decided, std::span(coded).subspan(idx * qam64::kBitsPerSymbol,
                                                               qam64::kBitsPerSymbol));
    }
  }
  r.bits = systematic_bits(coded, cfg.coding_rate);
  const auto psdu_bits = std::span(r.bits).subspan(kServiceBits, 8 * layout.psdu_len_bytes);
  r.psdu = bits_to_bytes(psdu_bits);
  r.fcs_pass = fcs_valid(r.psdu);
  r.discarded = opts.discard_on_fcs_failure && !r.fcs_pass;
  return r;
}

std::vector<DecodeResult> decode_stream(const SampleStream& rx, const Transmission& tx,
                                        const PhyConfig& cfg, const ReceiverOptions& opts) {
  const FrameLayout& layout = tx.layout;
  const std::span<const cd> all(rx.samples);
  const auto& ref = preamble_reference().l_stf_time;
  if (rx.frame_boundaries.size() != tx.frames.size()) {
    throw std::invalid_argument("decode_stream: frame count mismatch");
  }
  std::vector<DecodeResult> out;
  out.reserve(tx.frames.size());
  for (std::size_t f = 0; f < tx.frames.size(); ++f) {
    const std::size_t nominal = rx.frame_boundaries[f];
    const std::size_t lo = nominal > opts.sync_search ? nominal - opts.sync_search : 0;
    const std::size_t hi = std::min(nominal + opts.sync_search, all.size() - layout.n_samples_frame);
    std::size_t start = nominal;
    bool sync_failed = false;
    try {
      start = sync_detect(all, ref, lo, hi, opts.sync_threshold);
    } catch (const SyncFailure&) {
      // Fall back to the nominal timing of the frame train.
      sync_failed = true;
    }
    const auto frame = all.subspan(start, layout.n_samples_frame);
    RxEstimate est = estimate_htltf(frame, layout, opts);
    est.sync_index = start;
    DecodeResult r = demodulate(frame, layout, est, tx.frames[f], cfg, opts);
    r.sync_failed = sync_failed;
    out.push_back(std::move(r));
  }
  return out;
}

ErrorRates measure_ser(std::span<const DecodeResult> results) {
  if (results.empty()) throw std::invalid_argument("measure_ser: no frames");
  ErrorRates e;
  std::size_t n_bits = 0;
  std::size_t n_symbols = 0;
  for (const auto& r : results) {
    e.bit_errors += r.bit_errors;
    e.symbol_errors += r.symbol_errors;
    n_bits += r.n_bits;
    n_symbols += r.n_symbols;
    if (r.discarded) ++e.frames_discarded;
    if (r.htltf_corrupted) ++e.frames_htltf_corrupted;
  }
  e.ser = n_bits ? static_cast<double>(e.bit_errors) / static_cast<double>(n_bits) : 0.0;
  e.constellation_ser =
      n_symbols ? static_cast<double>(e.symbol_errors) / static_cast<double>(n_symbols) : 0.0;
  return e;
}

Bytes recovered_payload(std::span<const DecodeResult> results, const MessagePlan& plan,
                        const PhyConfig& cfg) {
  const std::size_t header = cfg.mac_overhead_bytes - 4;
  Bytes out;
  out.reserve(plan.n_frame * cfg.l_msdu_bytes);
  for (const auto& r : results) {
    if (r.psdu.size() < header + cfg.l_msdu_bytes) {
      throw std::invalid_argument("recovered_payload: PSDU shorter than header + MSDU");
    }
    out.insert(out.end(), r.psdu.begin() + static_cast<std::ptrdiff_t>(header),
               r.psdu.begin() + static_cast<std::ptrdiff_t>(header + cfg.l_msdu_bytes));
  }
  out.resize(std::min(out.size(), plan.l_message_bytes));
  return out;
}

std::string decode_log_csv(std::span<const DecodeResult> results) {
  std::ostringstream os;
  os << "frame,symbol_errors,fcs_pass,htltf_corrupted\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    os << i << ',' << results[i].symbol_errors << ',' << (results[i].fcs_pass ? 1 : 0) << ','
       << (results[i].htltf_corrupted ? 1 : 0) << '\n';
  }
  return os.str();
}

}  // namespace ijam
