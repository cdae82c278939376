// Acceptance run: one PASS/FAIL line per criterion. Arguments select
// criteria by number; no arguments runs all nine.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "ijam/analytic_model.hpp"
#include "ijam/channel_link.hpp"
#include "ijam/errors.hpp"
#include "ijam/exp_harness.hpp"
#include "ijam/receiver_sim.hpp"
#include "oracles.hpp"

using namespace ijam;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

// Seed-averaged best SER per scheme at one energy.
std::map<Scheme, ComparisonRow> best_at(const MetricsReport& report, double e_j) {
  std::map<Scheme, ComparisonRow> out;
  for (const auto& row : best_ser_table(report)) {
    if (row.e_j == e_j) out[row.scheme] = row;
  }
  return out;
}

ExperimentConfig desk(std::vector<Scheme> schemes, std::vector<double> energies) {
  ExperimentConfig cfg;
  cfg.frames = 20;
  cfg.schemes = std::move(schemes);
  cfg.e_j_grid = std::move(energies);
  cfg.rho_grid = {0.05, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
  cfg.rep_pulses = {2, 4, 8};
  cfg.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  cfg.workers = workers();
  return cfg;
}

Outcome roundtrip() {
  const auto t0 = Clock::now();
  const PhyConfig cfg;
  const Bytes payload = synthetic_payload(46080, 7);
  const Transmission tx = modulate_message(payload, cfg);
  ChannelSpec chan;
  chan.n0_eve = 0.0;
  const std::vector<cd> silent(tx.stream.size());
  const SampleStream rx = receive(tx.stream, silent, chan, Receiver::kEve, 1, tx.plan.n_samples_frame);
  const auto res = decode_stream(rx, tx, cfg);
  const ErrorRates er = measure_ser(res);
  const bool fcs = std::all_of(res.begin(), res.end(), [](const DecodeResult& r) { return r.fcs_pass; });
  const bool same = recovered_payload(res, tx.plan, cfg) == payload;
  const double t = seconds_since(t0);
  return {same && fcs && er.ser == 0.0 && er.constellation_ser == 0.0 && t < 10.0,
          fmt::format("{} frames, identical={}, all FCS pass={}, SER={:g}, {:.2f} s", res.size(), same, fcs,
                      er.ser, t)};
}

Outcome layout_equivalence() {
  const auto t0 = Clock::now();
  PhyConfig cfg;
  cfg.l_msdu_bytes = 4000;
  std::size_t bad = 0;
  for (std::size_t len = 1; len <= 4000; ++len) {
    const FrameLayout l = layout_frame(len, cfg);
    bool ok = l.n_sym == oracle::n_sym_brute(len, cfg.l_dbps);
    std::size_t pos = 0;
    for (const auto& w : l.field_windows) {
      ok = ok && w.range.begin == pos && w.range.end > pos;
      pos = w.range.end;
    }
    ok = ok && pos == l.n_samples_frame;
    if (!ok) ++bad;
  }
  const double t = seconds_since(t0);
  return {bad == 0 && t < 1.0, fmt::format("LENGTH 1..4000, {} mismatches, {:.3f} s", bad, t)};
}

Outcome closed_form() {
  const double at14 = ser_closed_form(14.0, 1.0, 1.0, 1.0);
  const double at0 = ser_closed_form(80.0 / 234.0, 0.0, 1.0, 1.0);
  const double atinf = ser_closed_form(80.0 / 234.0, 1e300, 1.0, 1.0);
  const double d14 = std::abs(at14 - oracle::kPr[0].pr);
  const double d0 = std::abs(at0);
  const double dinf = std::abs(atinf - oracle::kPrCeiling);
  return {d14 <= 1e-6 && d0 <= 1e-6 && dinf <= 1e-6,
          fmt::format("pr(14)={:.9f} (|d|={:.1e}), pr(p_j=0)={:g}, pr(p_j->inf)={:.9f} (|d|={:.1e})", at14, d14,
                      at0, atinf, dinf)};
}

Outcome energy_accounting() {
  const PhyConfig cfg;
  const Transmission tx = modulate_message(synthetic_payload(2304 * 4, 3), cfg);
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> scheme(0, 5);
  std::uniform_real_distribution<double> log_e(0.0, 7.0);
  std::uniform_real_distribution<double> rho(0.02, 0.85);
  std::uniform_int_distribution<int> pulses(1, 12);
  double worst_energy = 0.0;
  double worst_power = 0.0;
  int points = 0;
  while (points < 100) {
    const Scheme s = kAllSchemes[scheme(rng)];
    const double e = std::pow(10.0, log_e(rng));
    const ScheduleSpec spec{s, rho(rng), pulses(rng), -1.0, 1.0, rng()};
    const JamSchedule js = build_schedule(spec, tx.plan, tx.layout, cfg, e);
    const auto wave = jamming_waveform(js);
    long double sum = 0.0L;
    for (std::size_t k = 0; k < wave.size(); ++k) sum += js.beta[k] * std::norm(wave[k]);
    worst_energy = std::max(worst_energy, std::abs(static_cast<double>(sum) - e) / e);

    std::vector<std::uint8_t> half = js.beta;
    std::size_t n = js.jammed_samples();
    // Drop one sample first when the count is odd so the halving is exact.
    bool drop = n % 2 == 1;
    bool keep = true;
    for (auto& b : half) {
      if (!b) continue;
      if (drop) {
        b = 0;
        drop = false;
        continue;
      }
      b = keep ? 1 : 0;
      keep = !keep;
    }
    std::vector<std::uint8_t> even = js.beta;
    if (n % 2 == 1) *std::find(even.begin(), even.end(), std::uint8_t{1}) = 0;
    if (n < 2) continue;
    const JamSchedule full = with_beta(js, even);
    const JamSchedule halved = with_beta(js, half);
    const JamBudget bf = account(full, tx.stream);
    const JamBudget bh = account(halved, tx.stream);
    worst_power = std::max(worst_power, std::abs(*bh.p_j - 2.0 * *bf.p_j) / (2.0 * *bf.p_j));
    ++points;
  }
  return {worst_energy <= 1e-9 && worst_power <= 1e-9,
          fmt::format("{} points, max rel. energy error {:.1e}, max rel. p_j doubling error {:.1e}", points,
                      worst_energy, worst_power)};
}

Outcome cascade() {
  // 20 frames x 80 critical samples at per-sample power 20: JSR 20 on the window.
  const double e = 32000.0;
  const ExperimentConfig cfg = desk({std::begin(kAllSchemes), std::end(kAllSchemes)}, {e});
  const auto best = best_at(run_sweep(cfg), e);
  const double pt = best.at(Scheme::kPerJPT).best_ser;
  bool above_all = true;
  std::string others;
  for (const auto& [s, row] : best) {
    if (s == Scheme::kPerJPT) continue;
    above_all = above_all && pt > row.best_ser;
    others += fmt::format(" {}={:.4f}", to_string(s), row.best_ser);
  }
  return {above_all && std::abs(pt - 0.5) <= 0.05,
          fmt::format("E_J={:g}, PerJPT={:.4f} vs{}", e, pt, others)};
}

Outcome ordering() {
  const std::vector<double> energies{150.0, 300.0, 600.0};
  const ExperimentConfig cfg =
      desk({Scheme::kCJS, Scheme::kPerJDT, Scheme::kRepJDT, Scheme::kRanJDT}, energies);
  const MetricsReport report = run_sweep(cfg);
  bool pass = true;
  std::string detail;
  for (double e : energies) {
    const auto b = best_at(report, e);
    const double cjs = b.at(Scheme::kCJS).best_ser;
    const double per = b.at(Scheme::kPerJDT).best_ser;
    const double rep = b.at(Scheme::kRepJDT).best_ser;
    const double ran = b.at(Scheme::kRanJDT).best_ser;
    pass = pass && rep >= cjs && ran <= per && ran <= rep;
    detail += fmt::format(" [E_J={:g}: RepJDT={:.5f} CJS={:.5f} PerJDT={:.5f} RanJDT={:.5f}]", e, rep, cjs,
                          per, ran);
  }
  return {pass, detail.substr(1)};
}

Outcome unimodal() {
  const double e = 1000.0;
  const ExperimentConfig cfg = desk({Scheme::kPerJDT}, {e});
  const MetricsReport report = run_sweep(cfg);
  std::map<double, double> sum;
  for (const auto& row : report.rows) {
    if (row.kind == RowKind::kMonteCarlo && row.ser_eve) sum[row.rho] += *row.ser_eve;
  }
  std::vector<double> curve;
  std::string shown;
  for (const auto& [rho, s] : sum) {
    curve.push_back(s / static_cast<double>(cfg.seeds.size()));
    shown += fmt::format(" {:g}:{:.5f}", rho, curve.back());
  }
  const bool ok = curve.size() == 10 && is_unimodal(curve);
  return {ok, fmt::format("E_J={:g}, rho:SER{}", e, shown)};
}

Outcome bob_constraint() {
  ExperimentConfig cfg = desk({std::begin(kAllSchemes), std::end(kAllSchemes)}, {300.0, 32000.0});
  cfg.rho_grid = {0.1, 0.5};
  cfg.rep_pulses = {4};
  std::size_t rows = 0;
  std::size_t errors = 0;
  bool clean_ok = true;
  try {
    const MetricsReport r = run_sweep(cfg);
    for (const auto& row : r.rows) {
      ++rows;
      errors += row.bob_errors;
    }
  } catch (const ConstraintViolation&) {
    clean_ok = false;
  }
  ExperimentConfig leak = cfg;
  leak.schemes = {Scheme::kCJS};
  leak.e_j_grid = {1e5};
  leak.seeds = {1};
  leak.channel.h_jb = 1.0;
  bool aborted = false;
  std::string report;
  try {
    run_sweep(leak);
  } catch (const ConstraintViolation& v) {
    aborted = true;
    report = v.what();
    report = report.substr(0, report.find('\n'));
  }
  return {clean_ok && errors == 0 && aborted,
          fmt::format("{} default-channel rows, bob errors {}; h_jb=1 run aborted={} ({})", rows, errors, aborted,
                      report)};
}

Outcome determinism() {
  ExperimentConfig cfg = desk({std::begin(kAllSchemes), std::end(kAllSchemes)}, {300.0, 32000.0});
  cfg.frames = 4;
  cfg.rho_grid = {0.1, 0.3, 0.6};
  cfg.seeds = {11, 12, 13};
  auto render = [](const ExperimentConfig& c) {
    const MetricsReport r = run_sweep(c);
    return r.csv() + comparison_csv(best_ser_table(r)) + run_metadata_json(c);
  };
  cfg.workers = 1;
  const std::string serial = render(cfg);
  cfg.workers = 8;
  const std::string parallel = render(cfg);
  return {serial == parallel,
          fmt::format("workers 1 vs 8: {} bytes, identical={}", serial.size(), serial == parallel)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"roundtrip oracle", roundtrip},
      {"layout equivalence", layout_equivalence},
      {"closed-form SER spot checks", closed_form},
      {"energy accounting", energy_accounting},
      {"cascading effect", cascade},
      {"best-SER ordering", ordering},
      {"PerJDT unimodal in rho", unimodal},
      {"Bob error-free constraint", bob_constraint},
      {"determinism across worker counts", determinism},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    fmt::print("criterion {}: {} - {}: {}\n", id, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
