#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numeric>

#include "ijam/channel_link.hpp"
#include "ijam/constellation.hpp"
#include "ijam/errors.hpp"
#include "ijam/ofdm.hpp"
#include "ijam/receiver_sim.hpp"

using namespace ijam;

namespace {

struct Rig {
  PhyConfig cfg;
  Transmission tx;
  ChannelSpec chan;
  ReceiverOptions opts;

  explicit Rig(std::size_t frames = 2) : tx(modulate_message(synthetic_payload(2304 * frames, 21), cfg)) {
    opts.reference_noise_level = clean_noise_reference(chan.n0_eve);
  }

  std::vector<DecodeResult> eve(const JamSchedule& jam, std::uint64_t seed,
                                const ReceiverOptions* o = nullptr) const {
    const SampleStream r = receive(tx.stream, jam, chan, Receiver::kEve, seed);
    return decode_stream(r, tx, cfg, o ? *o : opts);
  }
  std::vector<DecodeResult> clean() const {
    ChannelSpec quiet = chan;
    quiet.n0_eve = 0.0;
    const std::vector<cd> silent(tx.stream.size());
    const SampleStream r = receive(tx.stream, silent, quiet, Receiver::kEve, 1, tx.plan.n_samples_frame);
    return decode_stream(r, tx, cfg, opts);
  }
};

}  // namespace

TEST_SUITE("receiver_sim") {

TEST_CASE("sync on aligned and delayed frames") {
  const Rig rig(1);
  const auto& s = rig.tx.stream.samples;
  CHECK(sync_detect(s) == 0);
  std::vector<cd> delayed(100, cd{});
  delayed.insert(delayed.end(), s.begin(), s.end());
  CHECK(sync_detect(delayed) == 100);
}

TEST_CASE("sync fails on pure noise") {
  SampleStream zero;
  zero.samples.assign(2000, cd{});
  ChannelSpec chan;
  chan.n0_eve = 1.0;
  const std::vector<cd> silent(zero.size());
  const SampleStream noise = receive(zero, silent, chan, Receiver::kEve, 3, 2000);
  CHECK_THROWS_AS(sync_detect(noise.samples), SyncFailure);
}

TEST_CASE("exact estimate on a clean scaled frame") {
  const Rig rig(1);
  ChannelSpec chan;
  chan.h_ae = 0.5;
  chan.n0_eve = 0.0;
  const std::vector<cd> silent(rig.tx.stream.size());
  const SampleStream r = receive(rig.tx.stream, silent, chan, Receiver::kEve, 1, 7120);
  const RxEstimate est = estimate_htltf(r.samples, rig.tx.layout);
  // The transmitter's normalization gain is part of the effective channel.
  CHECK(std::abs(est.h_hat - 0.5 * rig.tx.frames[0].gain) < 1e-9);
  CHECK(est.noise_level_hat < 1e-20);
  CHECK_FALSE(est.htltf_corrupted);
}

TEST_CASE("critical-window jamming at unit JSR corrupts the estimate") {
  const Rig rig(1);
  const JamSchedule jam = make_perjpt(rig.tx.plan, rig.tx.layout, 80.0);
  const SampleStream r = receive(rig.tx.stream, jam, rig.chan, Receiver::kEve, 2);
  CHECK(estimate_htltf(r.samples, rig.tx.layout, rig.opts).htltf_corrupted);
  const SampleStream q = receive(rig.tx.stream, std::vector<cd>(r.size()), rig.chan, Receiver::kEve, 2, 7120);
  CHECK_FALSE(estimate_htltf(q.samples, rig.tx.layout, rig.opts).htltf_corrupted);
}

TEST_CASE("data-only jamming leaves the estimate unchanged") {
  const Rig rig(1);
  const JamSchedule jam = make_repj(rig.tx.plan, rig.tx.layout, rig.cfg, 1, 1.0, 36.0, 5000.0);
  const SampleStream a = receive(rig.tx.stream, jam, rig.chan, Receiver::kEve, 6);
  const SampleStream b = receive(rig.tx.stream, std::vector<cd>(a.size()), rig.chan, Receiver::kEve, 6, 7120);
  const RxEstimate ea = estimate_htltf(a.samples, rig.tx.layout, rig.opts);
  const RxEstimate eb = estimate_htltf(b.samples, rig.tx.layout, rig.opts);
  CHECK(ea.h_hat == eb.h_hat);
  CHECK(ea.noise_level_hat == eb.noise_level_hat);
  CHECK(ea.h_subcarrier == eb.h_subcarrier);
}

TEST_CASE("clean roundtrip") {
  const Rig rig(3);
  const auto res = rig.clean();
  REQUIRE(res.size() == 3);
  for (std::size_t f = 0; f < res.size(); ++f) {
    CHECK(res[f].symbol_errors == 0);
    CHECK(res[f].fcs_pass);
    CHECK_FALSE(res[f].discarded);
    CHECK(res[f].psdu == rig.tx.frames[f].psdu);
  }
  CHECK(measure_ser(res).ser == 0.0);
  const Bytes payload = synthetic_payload(2304 * 3, 21);
  CHECK(recovered_payload(res, rig.tx.plan, rig.cfg) == payload);
}

TEST_CASE("one wrong constellation decision fails the FCS") {
  const Rig rig(1);
  std::vector<cd> frame = rig.tx.frames[0].samples;
  const std::size_t symbol = 10;
  const std::size_t sub = 7;
  const std::size_t idx = symbol * 52 + sub;
  const unsigned sent = rig.tx.frames[0].points[idx];
  ofdm::Grid delta{};
  delta[ofdm::data_bins()[sub]] = rig.tx.frames[0].gain * (qam64::point(sent ^ 63u) - qam64::point(sent));
  std::vector<cd> add(ofdm::kSymbolSamples);
  ofdm::modulate(delta, add);
  const std::size_t start = rig.tx.layout.data_window().begin + symbol * ofdm::kSymbolSamples;
  for (std::size_t k = 0; k < add.size(); ++k) frame[start + k] += add[k];
  const RxEstimate est = estimate_htltf(frame, rig.tx.layout);
  const DecodeResult r = demodulate(frame, rig.tx.layout, est, rig.tx.frames[0], rig.cfg);
  CHECK(r.symbol_errors == 1);
  CHECK(r.bit_errors == 6);
  CHECK_FALSE(r.fcs_pass);
  CHECK(r.discarded);
  ReceiverOptions keep;
  keep.discard_on_fcs_failure = false;
  CHECK_FALSE(demodulate(frame, rig.tx.layout, est, rig.tx.frames[0], rig.cfg, keep).discarded);
}

TEST_CASE("strong preamble jamming saturates near one half") {
  const Rig rig(2);
  double total = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    JamSchedule jam = make_perjpt(rig.tx.plan, rig.tx.layout, 160.0 * 50.0);
    jam.seed = seed;
    const auto res = rig.eve(jam, seed);
    for (const auto& r : res) {
      CHECK(r.htltf_corrupted);
      CHECK_FALSE(r.fcs_pass);
    }
    total += measure_ser(res).ser;
  }
  CHECK(std::abs(total / 10.0 - 0.5) <= 0.05);
}

TEST_CASE("cascade beats the same energy spread over the data field") {
  const Rig rig(4);
  const double e = 4 * 80 * 2.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    JamSchedule pt = make_perjpt(rig.tx.plan, rig.tx.layout, e);
    JamSchedule dt = make_repj(rig.tx.plan, rig.tx.layout, rig.cfg, 1, 1.0, 36.0, e);
    pt.seed = dt.seed = seed;
    CHECK(measure_ser(rig.eve(pt, seed)).ser > measure_ser(rig.eve(dt, seed)).ser);
  }
}

TEST_CASE("discard flag tracks PSDU correctness") {
  const Rig rig(4);
  for (double e : {50.0, 400.0, 3000.0}) {
    JamSchedule jam = make_cjs(rig.tx.plan, e);
    jam.seed = 3;
    const auto res = rig.eve(jam, 3);
    for (std::size_t f = 0; f < res.size(); ++f) {
      CHECK(res[f].fcs_pass == (res[f].psdu == rig.tx.frames[f].psdu));
      CHECK(res[f].symbol_errors <= res[f].n_symbols);
    }
  }
}

TEST_CASE("continuous jamming SER grows with power") {
  const Rig rig(2);
  double previous = 0.0;
  for (double e : {100.0, 1000.0, 10000.0, 100000.0, 1000000.0}) {
    JamSchedule jam = make_cjs(rig.tx.plan, e);
    jam.seed = 1;
    const double ser = measure_ser(rig.eve(jam, 1)).ser;
    CHECK(ser >= previous);
    CHECK(ser <= 0.5 + 0.02);
    previous = ser;
  }
}

TEST_CASE("Bob decodes error-free with no jammer path and no noise") {
  const Rig rig(2);
  ChannelSpec chan;
  chan.n0_bob = 0.0;
  const JamSchedule jam = make_cjs(rig.tx.plan, 1e6);
  const SampleStream r = receive(rig.tx.stream, jam, chan, Receiver::kBob, 1);
  CHECK(measure_ser(decode_stream(r, rig.tx, rig.cfg)).ser == 0.0);
}

TEST_CASE("preamble bypass with a stale clean estimate") {
  const Rig rig(2);
  const SampleStream quiet = receive(rig.tx.stream, std::vector<cd>(rig.tx.stream.size()), rig.chan,
                                     Receiver::kEve, 1, rig.tx.plan.n_samples_frame);
  ReceiverOptions bypass = rig.opts;
  bypass.bypass_estimate = estimate_htltf(quiet.samples, rig.tx.layout, rig.opts);
  JamSchedule jam = make_perjpt(rig.tx.plan, rig.tx.layout, 2 * 80 * 50.0);
  jam.seed = 2;
  const auto fooled = rig.eve(jam, 2);
  const auto bypassed = rig.eve(jam, 2, &bypass);
  CHECK(measure_ser(fooled).ser > 0.4);
  CHECK(measure_ser(bypassed).ser < 1e-3);
  CHECK(bypassed[0].htltf_corrupted);
}

TEST_CASE("SER is a per-decision average over all frames") {
  std::vector<DecodeResult> res(96);
  for (auto& r : res) {
    r.n_bits = 24960;
    r.n_symbols = 4160;
  }
  CHECK(measure_ser(res).ser == 0.0);
  res[17].bit_errors = 24960 / 2;
  res[17].symbol_errors = 4160 * 63 / 64;
  CHECK(measure_ser(res).ser == doctest::Approx(0.5 / 96));
  CHECK(measure_ser(res).constellation_ser == doctest::Approx((63.0 / 64) / 96));
  CHECK_THROWS_AS(measure_ser(std::span<const DecodeResult>{}), std::invalid_argument);
}

TEST_CASE("decode log") {
  std::vector<DecodeResult> res(2);
  res[0].symbol_errors = 3;
  res[1].fcs_pass = true;
  res[1].htltf_corrupted = true;
  CHECK(decode_log_csv(res) == "frame,symbol_errors,fcs_pass,htltf_corrupted\n0,3,0,0\n1,0,1,1\n");
}

}
