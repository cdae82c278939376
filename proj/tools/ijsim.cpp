// ijsim: sweep, compare, demo, optimize and export-schedule front end.

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ijam/errors.hpp"
#include "ijam/exp_harness.hpp"

using namespace ijam;

namespace {

struct Overrides {
  std::string config;
  std::string payload;
  std::string schemes;
  std::vector<double> energy;
  std::vector<double> rho;
  std::vector<std::uint64_t> seeds;
  std::vector<int> pulses;
  std::size_t frames = 0;
  std::string out;
  bool full_scale = false;
  unsigned workers = 0;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON experiment config");
  cmd->add_option("--payload", o.payload, "Payload file (synthetic when omitted)");
  cmd->add_option("--schemes", o.schemes, "Comma-separated scheme names");
  cmd->add_option("--energy-grid", o.energy, "Jamming energy budgets")->delimiter(',');
  cmd->add_option("--rho-grid", o.rho, "Jamming proportions")->delimiter(',');
  cmd->add_option("--seeds", o.seeds, "Seeds")->delimiter(',');
  cmd->add_option("--rep-pulses", o.pulses, "RepJDT pulse counts")->delimiter(',');
  cmd->add_option("--frames", o.frames, "Frames per message");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_flag("--full-scale", o.full_scale, "96 frames of a 219600-byte payload");
  cmd->add_option("--workers", o.workers, "Worker threads");
}

ExperimentConfig resolve(const Overrides& o) {
  ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
  if (o.full_scale) apply_full_scale(cfg);
  if (!o.payload.empty()) cfg.payload_path = o.payload;
  if (!o.schemes.empty()) {
    cfg.schemes.clear();
    std::stringstream ss(o.schemes);
    for (std::string name; std::getline(ss, name, ',');) cfg.schemes.push_back(scheme_from_string(name));
  }
  if (!o.energy.empty()) cfg.e_j_grid = o.energy;
  if (!o.rho.empty()) cfg.rho_grid = o.rho;
  if (!o.seeds.empty()) cfg.seeds = o.seeds;
  if (!o.pulses.empty()) cfg.rep_pulses = o.pulses;
  if (o.frames) cfg.frames = o.frames;
  if (!o.out.empty()) cfg.out_dir = o.out;
  if (o.workers) cfg.workers = o.workers;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Intermittent jamming link simulator"};
  app.require_subcommand(1);
  Overrides o;

  auto* sweep = app.add_subcommand("sweep", "Scheme x energy x proportion sweep");
  auto* compare = app.add_subcommand("compare", "Best SER per scheme and energy");
  auto* demo = app.add_subcommand("demo", "Eve's recovered payload per scheme and energy");
  auto* optimize = app.add_subcommand("optimize", "Grid search for the SEREE-maximizing schedule");
  for (auto* cmd : {sweep, compare, demo, optimize}) add_common(cmd, o);

  double budget = 1000.0;
  std::vector<double> fractions{1.0};
  optimize->add_option("--energy", budget, "Available jamming energy");
  optimize->add_option("--energy-fractions", fractions, "Budget shares to try")->delimiter(',');

  auto* exp = app.add_subcommand("export-schedule", "Write a schedule's pulses as CSV");
  add_common(exp, o);
  std::string scheme_name = "PerJDT";
  ScheduleSpec spec;
  std::string schedule_file = "schedule.csv";
  exp->add_option("--scheme", scheme_name, "Scheme name");
  exp->add_option("--energy", budget, "Jamming energy");
  exp->add_option("--rho", spec.rho, "Jamming proportion");
  exp->add_option("--n-pulse", spec.n_pulse, "Pulses per frame (RepJDT)");
  exp->add_option("--seed", spec.seed, "Seed (random schemes)");
  exp->add_option("--file", schedule_file, "Output CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    const ExperimentConfig cfg = resolve(o);
    const auto& dir = cfg.out_dir;
    if (sweep->parsed() || compare->parsed()) {
      const MetricsReport report = run_sweep(cfg);
      write_text(dir / "sweep.csv", report.csv());
      write_text(dir / "run.json", run_metadata_json(cfg));
      fmt::print("{} rows -> {}\n", report.rows.size(), (dir / "sweep.csv").string());
      if (compare->parsed()) {
        if (cfg.schemes.size() < 2) throw std::invalid_argument("compare needs at least two schemes");
        write_text(dir / "comparison.csv", comparison_csv(best_ser_table(report)));
        fmt::print("comparison -> {}\n", (dir / "comparison.csv").string());
      }
    } else if (demo->parsed()) {
      const auto rows = corrupt_payload_demo(cfg);
      write_text(dir / "demo.csv", demo_csv(rows));
      for (const auto& r : rows) {
        fmt::print("{:<7} E_J={:<8g} byte diff {:.4f}\n", r.label, r.e_j, r.byte_diff_fraction);
      }
    } else if (optimize->parsed()) {
      const Transmission tx = modulate_message(experiment_payload(cfg), cfg.phy);
      GridSpec grid{cfg.schemes, cfg.rho_grid, cfg.rep_pulses, {-1.0}, fractions, cfg.seeds.front()};
      const auto result = optimize_schedule(budget, cfg.analytic, tx.plan, tx.layout, cfg.channel,
                                            cfg.phy, cfg.schemes, grid, cfg.workers);
      write_text(dir / "optimizer.json", optimizer_json(result, budget) + "\n");
      if (result.best) {
        const auto& b = result.evaluated[*result.best];
        fmt::print("best: {} rho={:g} n_pulse={} fraction={:g} seree={:.6e}\n", to_string(b.spec.scheme),
                   b.spec.rho, b.spec.n_pulse, b.spec.energy_fraction, *b.report->seree);
      } else {
        fmt::print("no feasible schedule\n");
      }
    } else if (exp->parsed()) {
      const Transmission tx = modulate_message(experiment_payload(cfg), cfg.phy);
      spec.scheme = scheme_from_string(scheme_name);
      const JamSchedule s = build_schedule(spec, tx.plan, tx.layout, cfg.phy, budget);
      export_schedule_csv(s, schedule_file);
      fmt::print("{} jammed samples -> {}\n", s.jammed_samples(), schedule_file);
    }
  } catch (const ConstraintViolation& e) {
    fmt::print(stderr, "constraint violation: {}\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
