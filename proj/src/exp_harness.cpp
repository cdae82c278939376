#include "ijam/exp_harness.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "ijam/errors.hpp"
#include "ijam/receiver_sim.hpp"
#include "ijam/worker_pool.hpp"

namespace ijam {

using nlohmann::json;

void ExperimentConfig::validate() const {
  if (schemes.empty()) throw std::invalid_argument("config: empty scheme list");
  if (e_j_grid.empty()) throw std::invalid_argument("config: empty energy grid");
  if (rho_grid.empty()) throw std::invalid_argument("config: empty rho grid");
  if (rep_pulses.empty()) throw std::invalid_argument("config: empty pulse grid");
  if (seeds.empty()) throw std::invalid_argument("config: empty seed list");
  if (std::set(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw std::invalid_argument("config: seeds must be distinct");
  }
  for (double e : e_j_grid) {
    if (!(e >= 0.0)) throw std::invalid_argument("config: negative jamming energy");
  }
  for (double r : rho_grid) {
    if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("config: rho must be in (0, 1]");
  }
  for (int p : rep_pulses) {
    if (p < 1) throw std::invalid_argument("config: pulse counts must be positive");
  }
  if (frames == 0) throw std::invalid_argument("config: frames must be positive");
  if (!(demo_rho > 0.0 && demo_rho <= 1.0)) throw std::invalid_argument("config: demo_rho out of range");
  if (!(corruption_factor > 0.0)) throw std::invalid_argument("config: corruption_factor must be positive");
  channel.validate();
  phy.validate();
  analytic.validate();
}

void apply_full_scale(ExperimentConfig& cfg) {
  cfg.frames = 96;
  cfg.synthetic_bytes = 219600;
  cfg.payload_path.reset();
}

namespace {

json complex_json(cd z) { return json::array({z.real(), z.imag()}); }

cd complex_from(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  throw std::invalid_argument("config: complex gains are a number or [re, im]");
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* where) {
  if (!j.is_object()) throw std::invalid_argument(fmt::format("config: {} must be an object", where));
  for (const auto& [key, _] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw std::invalid_argument(fmt::format("config: unknown key '{}' in {}", key, where));
    }
  }
}

template <class T>
void read_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
  const json j = json::parse(text);
  check_keys(j,
             {"payload", "payload_seed", "frames", "synthetic_bytes", "full_scale", "schemes", "energy_grid",
              "rho_grid", "rep_pulses", "seeds", "channel", "phy", "analytic",
              "corruption_factor", "demo_rho", "audit_bob", "out", "workers"},
             "top level");
  ExperimentConfig cfg;
  if (j.value("full_scale", false)) apply_full_scale(cfg);
  if (j.contains("payload") && !j["payload"].is_null()) {
    cfg.payload_path = j["payload"].get<std::string>();
  }
  read_if(j, "payload_seed", cfg.payload_seed);
  read_if(j, "frames", cfg.frames);
  read_if(j, "synthetic_bytes", cfg.synthetic_bytes);
  if (j.contains("schemes")) {
    cfg.schemes.clear();
    for (const auto& s : j["schemes"]) cfg.schemes.push_back(scheme_from_string(s.get<std::string>()));
  }
  read_if(j, "energy_grid", cfg.e_j_grid);
  read_if(j, "rho_grid", cfg.rho_grid);
  read_if(j, "rep_pulses", cfg.rep_pulses);
  read_if(j, "seeds", cfg.seeds);
  read_if(j, "corruption_factor", cfg.corruption_factor);
  read_if(j, "demo_rho", cfg.demo_rho);
  read_if(j, "audit_bob", cfg.audit_bob);
  read_if(j, "workers", cfg.workers);
  if (j.contains("out")) cfg.out_dir = j["out"].get<std::string>();
  if (j.contains("channel")) {
    const json& c = j["channel"];
    check_keys(c, {"h_ab", "h_ae", "h_jb", "h_je", "n0_bob", "n0_eve", "sync_offset_samples"}, "channel");
    if (c.contains("h_ab")) cfg.channel.h_ab = complex_from(c["h_ab"]);
    if (c.contains("h_ae")) cfg.channel.h_ae = complex_from(c["h_ae"]);
    if (c.contains("h_jb")) cfg.channel.h_jb = complex_from(c["h_jb"]);
    if (c.contains("h_je")) cfg.channel.h_je = complex_from(c["h_je"]);
    read_if(c, "n0_bob", cfg.channel.n0_bob);
    read_if(c, "n0_eve", cfg.channel.n0_eve);
    read_if(c, "sync_offset_samples", cfg.channel.sync_offset_samples);
  }
  if (j.contains("phy")) {
    const json& p = j["phy"];
    check_keys(p, {"l_msdu_bytes", "t_idle_us"}, "phy");
    read_if(p, "l_msdu_bytes", cfg.phy.l_msdu_bytes);
    read_if(p, "t_idle_us", cfg.phy.t_idle_us);
  }
  if (j.contains("analytic")) {
    const json& a = j["analytic"];
    check_keys(a, {"lambda", "signal_power", "critical_jsr_threshold"}, "analytic");
    read_if(a, "lambda", cfg.analytic.lambda);
    read_if(a, "signal_power", cfg.analytic.signal_power);
    read_if(a, "critical_jsr_threshold", cfg.analytic.critical_jsr_threshold);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return config_from_json(text);
}

std::string config_json(const ExperimentConfig& cfg) {
  json j;
  j["payload"] = cfg.payload_path ? json(cfg.payload_path->string()) : json(nullptr);
  j["payload_seed"] = cfg.payload_seed;
  j["frames"] = cfg.frames;
  j["synthetic_bytes"] = cfg.synthetic_bytes;
  j["schemes"] = json::array();
  for (Scheme s : cfg.schemes) j["schemes"].push_back(std::string(to_string(s)));
  j["energy_grid"] = cfg.e_j_grid;
  j["rho_grid"] = cfg.rho_grid;
  j["rep_pulses"] = cfg.rep_pulses;
  j["seeds"] = cfg.seeds;
  j["channel"] = {{"h_ab", complex_json(cfg.channel.h_ab)},
                  {"h_ae", complex_json(cfg.channel.h_ae)},
                  {"h_jb", complex_json(cfg.channel.h_jb)},
                  {"h_je", complex_json(cfg.channel.h_je)},
                  {"n0_bob", cfg.channel.n0_bob},
                  {"n0_eve", cfg.channel.n0_eve},
                  {"sync_offset_samples", cfg.channel.sync_offset_samples}};
  j["phy"] = {{"l_msdu_bytes", cfg.phy.l_msdu_bytes}, {"t_idle_us", cfg.phy.t_idle_us}};
  j["analytic"] = {{"lambda", cfg.analytic.lambda},
                   {"signal_power", cfg.analytic.signal_power},
                   {"critical_jsr_threshold", cfg.analytic.critical_jsr_threshold}};
  j["corruption_factor"] = cfg.corruption_factor;
  j["demo_rho"] = cfg.demo_rho;
  j["audit_bob"] = cfg.audit_bob;
  return j.dump(2) + "\n";
}

std::string run_metadata_json(const ExperimentConfig& cfg) {
  json j;
  j["config"] = json::parse(config_json(cfg));
  j["seeds"] = cfg.seeds;
  j["fft"] = "fftw3";
  j["fmt"] = FMT_VERSION;
  j["nlohmann_json"] = fmt::format("{}.{}.{}", NLOHMANN_JSON_VERSION_MAJOR, NLOHMANN_JSON_VERSION_MINOR,
                                   NLOHMANN_JSON_VERSION_PATCH);
  return j.dump(2) + "\n";
}

Bytes experiment_payload(const ExperimentConfig& cfg) {
  const std::size_t cap = cfg.frames * cfg.phy.l_msdu_bytes;
  if (!cfg.payload_path) {
    const std::size_t n = cfg.synthetic_bytes ? std::min(cfg.synthetic_bytes, cap) : cap;
    return synthetic_payload(n, cfg.payload_seed);
  }
  Bytes p = read_payload(*cfg.payload_path);
  if (p.size() > cap) p.resize(cap);
  return p;
}

namespace {

std::string opt(const std::optional<double>& v, const char* spec) {
  return v ? fmt::format(fmt::runtime(spec), *v) : std::string();
}

struct Cell {
  Scheme scheme;
  double e_j;
  double rho;
  int n_pulse;
  std::optional<std::uint64_t> seed;
};

bool fixed_shape(Scheme s) { return s == Scheme::kCJS || s == Scheme::kPerJPT; }

std::vector<Cell> sweep_cells(const ExperimentConfig& cfg) {
  std::vector<Cell> cells;
  for (Scheme s : cfg.schemes) {
    const std::vector<double> rhos = fixed_shape(s) ? std::vector<double>{1.0} : cfg.rho_grid;
    const std::vector<int> pulses = s == Scheme::kRepJDT ? cfg.rep_pulses : std::vector<int>{1};
    for (double e : cfg.e_j_grid) {
      for (double rho : rhos) {
        for (int p : pulses) {
          for (std::uint64_t seed : cfg.seeds) cells.push_back({s, e, rho, p, seed});
          cells.push_back({s, e, rho, p, std::nullopt});
        }
      }
    }
  }
  return cells;
}

struct Context {
  const ExperimentConfig& cfg;
  Transmission tx;
  ReceiverOptions eve_opts;
  ReceiverOptions bob_opts;
};

MetricsRow run_cell(const Context& ctx, const Cell& c) {
  const ExperimentConfig& cfg = ctx.cfg;
  MetricsRow row;
  row.kind = c.seed ? RowKind::kMonteCarlo : RowKind::kAnalytic;
  row.scheme = c.scheme;
  row.e_j = c.e_j;
  row.rho = c.rho;
  row.n_pulse = c.n_pulse;
  row.seed = c.seed;
  const ScheduleSpec spec{c.scheme, c.rho, c.n_pulse, -1.0, 1.0, c.seed.value_or(cfg.seeds.front())};
  JamSchedule s;
  try {
    s = build_schedule(spec, ctx.tx.plan, ctx.tx.layout, cfg.phy, c.e_j);
  } catch (const std::invalid_argument& e) {
    row.feasible = false;
    row.note = e.what();
    return row;
  } catch (const EmptySchedule& e) {
    row.feasible = false;
    row.note = e.what();
    return row;
  }
  const auto wave = jamming_waveform(s);
  const JamBudget budget = account(s, wave, ctx.tx.stream);
  if (fixed_shape(c.scheme)) row.rho = budget.rho;
  row.je = budget.e_j_spent;
  row.jp = budget.rho;
  row.jsr = budget.jsr;

  const SereeReport a = seree(s, c.e_j, cfg.analytic, ctx.tx.plan, ctx.tx.layout, cfg.channel, cfg.phy);
  row.ser_analytic = a.n_error_overall / a.n_sym_total;
  row.n_error_analytic = a.n_error_overall;
  row.w = a.w;
  if (!c.seed) {
    row.seree = a.seree;
    return row;
  }

  const std::size_t n = ctx.tx.plan.n_samples_frame;
  const SampleStream eve = receive(ctx.tx.stream, wave, cfg.channel, Receiver::kEve, *c.seed, n);
  const auto eve_res = decode_stream(eve, ctx.tx, cfg.phy, ctx.eve_opts);
  const ErrorRates er = measure_ser(eve_res);
  row.ser_eve = er.ser;
  row.constellation_ser = er.constellation_ser;
  row.frames_discarded = er.frames_discarded;
  if (row.je > 0.0) row.seree = er.ser / row.je;

  const SampleStream bob = receive(ctx.tx.stream, wave, cfg.channel, Receiver::kBob, *c.seed, n);
  const auto bob_res = decode_stream(bob, ctx.tx, cfg.phy, ctx.bob_opts);
  row.bob_errors = measure_ser(bob_res).symbol_errors;
  return row;
}

Context make_context(const ExperimentConfig& cfg) {
  cfg.validate();
  Context ctx{cfg, modulate_message(experiment_payload(cfg), cfg.phy), {}, {}};
  ctx.eve_opts.reference_noise_level = clean_noise_reference(cfg.channel.n0_eve);
  ctx.eve_opts.corruption_factor = cfg.corruption_factor;
  ctx.bob_opts.reference_noise_level = clean_noise_reference(cfg.channel.n0_bob);
  ctx.bob_opts.corruption_factor = cfg.corruption_factor;
  return ctx;
}

}  // namespace

std::string MetricsReport::csv() const {
  std::string out =
      "scheme,e_j,rho,seed,jsr,ser_eve,seree,bob_errors,frames_discarded,ser_analytic,"
      "n_error_analytic,w,kind,n_pulse,je,jp,constellation_ser,feasible,note\n";
  for (const auto& r : rows) {
    std::string note = r.note;
    std::replace(note.begin(), note.end(), ',', ';');
    out += fmt::format("{},{:g},{:.6f},{},{},{},{},{},{},{},{},{},{},{},{:.6f},{:.6f},{},{},{}\n",
                       to_string(r.scheme), r.e_j, r.rho, r.seed ? fmt::format("{}", *r.seed) : "",
                       opt(r.jsr, "{:.6f}"), opt(r.ser_eve, "{:.6f}"), opt(r.seree, "{:.6e}"),
                       r.bob_errors, r.frames_discarded, opt(r.ser_analytic, "{:.6f}"),
                       opt(r.n_error_analytic, "{:.3f}"), r.w ? fmt::format("{}", *r.w) : "",
                       r.kind == RowKind::kMonteCarlo ? "mc" : "analytic", r.n_pulse, r.je, r.jp,
                       opt(r.constellation_ser, "{:.6f}"), r.feasible ? 1 : 0, note);
  }
  return out;
}

MetricsReport run_sweep(const ExperimentConfig& cfg) {
  const Context ctx = make_context(cfg);
  const std::vector<Cell> cells = sweep_cells(cfg);
  MetricsReport report;
  report.rows.resize(cells.size());
  parallel_for(cells.size(), cfg.workers, [&](std::size_t i) { report.rows[i] = run_cell(ctx, cells[i]); });

  if (cfg.audit_bob) {
    std::string offending;
    std::size_t count = 0;
    for (const auto& r : report.rows) {
      if (r.bob_errors == 0) continue;
      if (++count <= 10) {
        offending += fmt::format("\n  {} e_j={:g} rho={:.3f} n_pulse={} seed={}: bob_errors={}",
                                 to_string(r.scheme), r.e_j, r.rho, r.n_pulse, r.seed.value_or(0),
                                 r.bob_errors);
      }
    }
    if (count > 0) {
      throw ConstraintViolation(fmt::format(
          "Bob error-free constraint violated in {} row(s); h_jb={}{:+}j:{}", count,
          cfg.channel.h_jb.real(), cfg.channel.h_jb.imag(), offending));
    }
  }
  return report;
}

std::vector<ComparisonRow> best_ser_table(const MetricsReport& report) {
  // (scheme, e_j) -> (rho, n_pulse) -> (sum, count); std::map keeps grid order stable.
  using Key = std::pair<int, double>;
  using Sub = std::pair<double, int>;
  std::map<Key, std::map<Sub, std::pair<double, std::size_t>>> acc;
  for (const auto& r : report.rows) {
    if (r.kind != RowKind::kMonteCarlo || !r.feasible || !r.ser_eve) continue;
    auto& cell = acc[{static_cast<int>(r.scheme), r.e_j}][{r.rho, r.n_pulse}];
    cell.first += *r.ser_eve;
    ++cell.second;
  }
  std::vector<ComparisonRow> out;
  for (const auto& [key, subs] : acc) {
    ComparisonRow row;
    row.scheme = static_cast<Scheme>(key.first);
    row.e_j = key.second;
    bool first = true;
    for (const auto& [sub, sum] : subs) {
      const double mean = sum.first / static_cast<double>(sum.second);
      if (first || mean > row.best_ser) {
        row.best_ser = mean;
        row.rho = sub.first;
        row.n_pulse = sub.second;
        row.n_seeds = sum.second;
        first = false;
      }
    }
    out.push_back(row);
  }
  return out;
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::string out = "scheme,e_j,best_ser,rho,n_pulse,seeds\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{:g},{:.6f},{:.6f},{},{}\n", to_string(r.scheme), r.e_j, r.best_ser, r.rho,
                       r.n_pulse, r.n_seeds);
  }
  return out;
}

std::vector<ComparisonRow> run_comparison(const ExperimentConfig& cfg) {
  if (std::set(cfg.schemes.begin(), cfg.schemes.end()).size() < 2) {
    throw std::invalid_argument("run_comparison: needs at least two schemes");
  }
  return best_ser_table(run_sweep(cfg));
}

double byte_diff_fraction(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  const std::size_t n = std::max(a.size(), b.size());
  if (n == 0) return 0.0;
  std::size_t diff = n - std::min(a.size(), b.size());
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) diff += a[i] != b[i];
  return static_cast<double>(diff) / static_cast<double>(n);
}

std::vector<DemoRow> corrupt_payload_demo(const ExperimentConfig& cfg) {
  const Context ctx = make_context(cfg);
  const Bytes original = experiment_payload(cfg);
  const std::filesystem::path dir = cfg.out_dir / "demo";
  std::filesystem::create_directories(dir);
  const std::string ext = cfg.payload_path ? cfg.payload_path->extension().string() : ".bin";

  struct Job {
    std::optional<Scheme> scheme;
    double e_j;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (std::uint64_t seed : cfg.seeds) jobs.push_back({std::nullopt, 0.0, seed});
  for (Scheme s : cfg.schemes) {
    for (double e : cfg.e_j_grid) {
      for (std::uint64_t seed : cfg.seeds) jobs.push_back({s, e, seed});
    }
  }
  std::vector<std::optional<Bytes>> recovered(jobs.size());
  parallel_for(jobs.size(), cfg.workers, [&](std::size_t i) {
    const Job& job = jobs[i];
    const std::size_t n = ctx.tx.plan.n_samples_frame;
    std::vector<cd> wave(ctx.tx.stream.size());
    if (job.scheme) {
      const ScheduleSpec spec{*job.scheme, cfg.demo_rho, cfg.rep_pulses.front(), -1.0, 1.0, job.seed};
      try {
        wave = jamming_waveform(build_schedule(spec, ctx.tx.plan, ctx.tx.layout, cfg.phy, job.e_j));
      } catch (const std::invalid_argument&) {
        return;
      } catch (const EmptySchedule&) {
        return;
      }
    }
    const SampleStream eve = receive(ctx.tx.stream, wave, cfg.channel, Receiver::kEve, job.seed, n);
    const auto res = decode_stream(eve, ctx.tx, cfg.phy, ctx.eve_opts);
    recovered[i] = recovered_payload(res, ctx.tx.plan, cfg.phy);
  });

  std::vector<DemoRow> rows;
  for (std::size_t i = 0; i < jobs.size(); i += cfg.seeds.size()) {
    DemoRow row;
    row.label = jobs[i].scheme ? std::string(to_string(*jobs[i].scheme)) : "none";
    row.e_j = jobs[i].e_j;
    double sum = 0.0;
    for (std::size_t k = 0; k < cfg.seeds.size(); ++k) {
      if (!recovered[i + k]) continue;
      sum += byte_diff_fraction(original, *recovered[i + k]);
      ++row.n_seeds;
    }
    if (row.n_seeds == 0) continue;
    row.byte_diff_fraction = sum / static_cast<double>(row.n_seeds);
    if (recovered[i]) {
      row.file = dir / fmt::format("eve_{}_E{:g}{}", row.label, row.e_j, ext);
      write_payload(row.file, *recovered[i]);
    }
    rows.push_back(row);
  }
  return rows;
}

std::string demo_csv(const std::vector<DemoRow>& rows) {
  std::string out = "scheme,e_j,seeds,byte_diff_fraction,file\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{:g},{},{:.6f},{}\n", r.label, r.e_j, r.n_seeds, r.byte_diff_fraction,
                       r.file.filename().string());
  }
  return out;
}

bool is_unimodal(std::span<const double> values) {
  if (values.size() < 3) return false;
  const auto peak = static_cast<std::size_t>(
      std::max_element(values.begin(), values.end()) - values.begin());
  if (peak == 0 || peak + 1 == values.size()) return false;
  for (std::size_t i = 1; i <= peak; ++i) {
    if (!(values[i] > values[i - 1])) return false;
  }
  for (std::size_t i = peak + 1; i < values.size(); ++i) {
    if (!(values[i] < values[i - 1])) return false;
  }
  return true;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace ijam
