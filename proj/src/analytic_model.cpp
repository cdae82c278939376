#include "ijam/analytic_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ijam/errors.hpp"
#include "ijam/worker_pool.hpp"

namespace ijam {

void AnalyticParams::validate() const {
  if (!(lambda > 0.0)) throw std::invalid_argument("AnalyticParams: lambda must be positive");
  if (!(signal_power >= 0.0)) throw std::invalid_argument("AnalyticParams: negative signal power");
  if (!(critical_jsr_threshold >= 0.0)) {
    throw std::invalid_argument("AnalyticParams: negative critical JSR threshold");
  }
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double ser_closed_form(double e_b, double p_j, cd h_ae, cd h_je) {
  if (e_b < 0.0 || p_j < 0.0 || std::isnan(e_b) || std::isnan(p_j)) {
    throw std::invalid_argument("ser_closed_form: negative energy or power");
  }
  const double jam = std::norm(h_je) * p_j;
  if (jam == 0.0) return 0.0;
  const double ratio = std::norm(h_ae) * e_b / jam;
  const double q = q_function(std::sqrt(2.0 / 7.0 * ratio));
  const double c = 1.0 - 0.75 * q;
  return 1.0 - c * c;
}

double analytic_bit_energy(const AnalyticParams& params, const PhyConfig& cfg) {
  return static_cast<double>(cfg.samples_per_symbol()) * params.signal_power / cfg.l_dbps;
}

double total_data_symbols(const MessagePlan& plan, const FrameLayout& layout, const PhyConfig& cfg) {
  return static_cast<double>(plan.n_frame) * layout.n_sym * cfg.constellation_symbols_per_ofdm();
}

double error_count(const JamSchedule& schedule, double pr, const AnalyticParams& params,
                   const MessagePlan& plan, const FrameLayout& layout, const PhyConfig& cfg) {
  params.validate();
  const double covered_ofdm =
      static_cast<double>(schedule.jammed_samples()) / static_cast<double>(cfg.samples_per_symbol());
  const double n = params.lambda * covered_ofdm * cfg.constellation_symbols_per_ofdm() * pr;
  return std::min(n, total_data_symbols(plan, layout, cfg));
}

int critical_weight(const JamSchedule& schedule, const FrameLayout& layout,
                    const AnalyticParams& params) {
  if (schedule.n_samples_frame != layout.n_samples_frame || schedule.n_frame == 0) return 0;
  const SampleRange crit = layout.htltf_critical_window;
  for (std::size_t f = 0; f < schedule.n_frame; ++f) {
    const std::size_t base = f * schedule.n_samples_frame;
    for (std::size_t k = crit.begin; k < crit.end; ++k) {
      if (!schedule.beta[base + k]) return 0;
    }
  }
  if (schedule.power() < params.critical_jsr_threshold * params.signal_power) return 0;
  return 1;
}

double overall_errors(const JamSchedule& schedule, double n_error, const AnalyticParams& params,
                      const MessagePlan& plan, const FrameLayout& layout, const PhyConfig& cfg) {
  const int w = critical_weight(schedule, layout, params);
  return w * total_data_symbols(plan, layout, cfg) + (1 - w) * n_error;
}

SereeReport seree(const JamSchedule& schedule, double e_j_avail, const AnalyticParams& params,
                  const MessagePlan& plan, const FrameLayout& layout, const ChannelSpec& chan,
                  const PhyConfig& cfg) {
  params.validate();
  SereeReport r;
  const double e_b = analytic_bit_energy(params, cfg);
  const std::size_t n_jam = schedule.jammed_samples();
  const double p_j = n_jam ? schedule.power() : 0.0;
  r.n_sym_total = total_data_symbols(plan, layout, cfg);
  r.pr = ser_closed_form(e_b, p_j, chan.h_ae, chan.h_je);
  r.n_error = error_count(schedule, r.pr, params, plan, layout, cfg);
  r.w = n_jam ? critical_weight(schedule, layout, params) : 0;
  r.n_error_overall = r.w * r.n_sym_total + (1 - r.w) * r.n_error;
  r.e_j = p_j * static_cast<double>(n_jam);
  if (r.e_j > 0.0) r.seree = r.n_error_overall / (r.n_sym_total * r.e_j);

  // Bob sees the same schedule through h_jb.
  const double pr_bob = ser_closed_form(e_b, p_j, chan.h_ab, chan.h_jb);
  const double n_bob = error_count(schedule, pr_bob, params, plan, layout, cfg);
  const int w_bob = chan.h_jb == cd{} ? 0 : r.w;
  r.bob_error_free = w_bob * r.n_sym_total + (1 - w_bob) * n_bob == 0.0;
  r.within_budget = r.e_j <= e_j_avail * (1.0 + 1e-9);
  r.beta_binary = std::all_of(schedule.beta.begin(), schedule.beta.end(),
                              [](std::uint8_t b) { return b <= 1; });
  r.feasible = r.bob_error_free && r.within_budget && r.beta_binary && r.seree.has_value();
  return r;
}

std::vector<ScheduleSpec> expand_grid(const GridSpec& grid) {
  std::vector<ScheduleSpec> out;
  for (Scheme s : grid.schemes) {
    const bool fixed = s == Scheme::kCJS || s == Scheme::kPerJPT;
    const std::vector<double> one_rho{1.0};
    const std::vector<int> one_pulse{1};
    const std::vector<double> one_offset{-1.0};
    const auto& rhos = fixed ? one_rho : grid.rhos;
    const auto& pulses = s == Scheme::kRepJDT ? grid.pulses : one_pulse;
    const auto& offsets = (s == Scheme::kPerJDT || s == Scheme::kRepJDT) ? grid.offsets_us : one_offset;
    for (double rho : rhos) {
      for (int n_pulse : pulses) {
        for (double offset : offsets) {
          for (double fraction : grid.energy_fractions) {
            out.push_back({s, rho, n_pulse, offset, fraction, grid.seed});
          }
        }
      }
    }
  }
  return out;
}

OptimizerResult optimize_schedule(double e_j_avail, const AnalyticParams& params,
                                  const MessagePlan& plan, const FrameLayout& layout,
                                  const ChannelSpec& chan, const PhyConfig& cfg,
                                  const std::vector<Scheme>& family, const GridSpec& grid,
                                  unsigned workers) {
  OptimizerResult result;
  for (const ScheduleSpec& spec : expand_grid(grid)) {
    if (family.empty() || std::find(family.begin(), family.end(), spec.scheme) != family.end()) {
      result.evaluated.push_back({spec, std::nullopt, {}});
    }
  }
  if (result.evaluated.empty()) throw std::invalid_argument("optimize_schedule: empty grid");

  parallel_for(result.evaluated.size(), workers, [&](std::size_t i) {
    GridPoint& g = result.evaluated[i];
    try {
      const JamSchedule s = build_schedule(g.spec, plan, layout, cfg, e_j_avail);
      g.report = seree(s, e_j_avail, params, plan, layout, chan, cfg);
    } catch (const std::invalid_argument& e) {
      g.error = e.what();
    } catch (const EmptySchedule& e) {
      g.error = e.what();
    }
  });

  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < result.evaluated.size(); ++i) {
    const auto& r = result.evaluated[i].report;
    if (!r || !r->feasible) continue;
    if (*r->seree > best) {
      best = *r->seree;
      result.best = i;
    }
  }
  return result;
}

namespace {

nlohmann::json point_json(const GridPoint& g) {
  nlohmann::json j;
  j["scheme"] = std::string(to_string(g.spec.scheme));
  j["parameters"] = {{"rho", g.spec.rho},
                     {"n_pulse", g.spec.n_pulse},
                     {"offset_us", g.spec.offset_us},
                     {"energy_fraction", g.spec.energy_fraction},
                     {"seed", g.spec.seed}};
  if (g.report) {
    const SereeReport& r = *g.report;
    j["seree"] = r.seree ? nlohmann::json(*r.seree) : nlohmann::json(nullptr);
    j["pr"] = r.pr;
    j["n_error"] = r.n_error;
    j["n_error_overall"] = r.n_error_overall;
    j["w"] = r.w;
    j["e_j"] = r.e_j;
    j["constraints"] = {{"bob_error_free", r.bob_error_free},
                        {"within_budget", r.within_budget},
                        {"beta_binary", r.beta_binary},
                        {"feasible", r.feasible}};
  } else {
    j["seree"] = nullptr;
    j["error"] = g.error;
  }
  return j;
}

}  // namespace

std::string optimizer_json(const OptimizerResult& result, double e_j_avail) {
  nlohmann::json j;
  j["e_j_avail"] = e_j_avail;
  j["feasible_set_empty"] = !result.best.has_value();
  j["best"] = result.best ? point_json(result.evaluated[*result.best]) : nlohmann::json(nullptr);
  j["evaluated"] = nlohmann::json::array();
  for (const auto& g : result.evaluated) j["evaluated"].push_back(point_json(g));
  return j.dump(2);
}

}  // namespace ijam
