#include "ijam/jam_scheduler.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ijam/errors.hpp"
#include "ijam/rng.hpp"

namespace ijam {

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::kCJS: return "CJS";
    case Scheme::kPerJPT: return "PerJPT";
    case Scheme::kPerJDT: return "PerJDT";
    case Scheme::kRepJDT: return "RepJDT";
    case Scheme::kRanJDT: return "RanJDT";
    case Scheme::kRanJFT: return "RanJFT";
  }
  return "?";
}

Scheme scheme_from_string(std::string_view name) {
  const auto lower = [](std::string_view v) {
    std::string out(v);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
  };
  const std::string key = lower(name);
  for (Scheme s : kAllSchemes) {
    if (lower(to_string(s)) == key) return s;
  }
  throw std::invalid_argument("unknown jamming scheme '" + std::string(name) + "'");
}

bool is_data_targeted(Scheme s) {
  return s == Scheme::kPerJDT || s == Scheme::kRepJDT || s == Scheme::kRanJDT;
}

std::size_t JamSchedule::jammed_samples() const {
  return static_cast<std::size_t>(std::count(beta.begin(), beta.end(), std::uint8_t{1}));
}

namespace {

JamSchedule blank(Scheme scheme, const MessagePlan& plan, double e_j_avail) {
  if (!(e_j_avail > 0.0) || !std::isfinite(e_j_avail)) {
    throw std::invalid_argument("jamming budget must be positive and finite");
  }
  JamSchedule s;
  s.scheme = scheme;
  s.e_j_avail = e_j_avail;
  s.n_frame = plan.n_frame;
  s.n_samples_frame = plan.n_samples_frame;
  s.beta.assign(plan.n_s_total, 0);
  return s;
}

void allocate(JamSchedule& s) {
  const std::size_t n = s.jammed_samples();
  if (n == 0) throw EmptySchedule("schedule selects no samples");
  s.amplitude = std::sqrt(s.e_j_avail / static_cast<double>(n));
}

// Marks [begin, end) of every frame.
void mark_every_frame(JamSchedule& s, std::size_t begin, std::size_t end) {
  for (std::size_t f = 0; f < s.n_frame; ++f) {
    const std::size_t base = f * s.n_samples_frame;
    std::fill(s.beta.begin() + static_cast<std::ptrdiff_t>(base + begin),
              s.beta.begin() + static_cast<std::ptrdiff_t>(base + end), std::uint8_t{1});
  }
}

void check_layout(const MessagePlan& plan, const FrameLayout& layout) {
  if (plan.n_samples_frame != layout.n_samples_frame) {
    throw std::invalid_argument("plan and layout disagree on frame length");
  }
}

}  // namespace

JamSchedule make_cjs(const MessagePlan& plan, double e_j_avail) {
  JamSchedule s = blank(Scheme::kCJS, plan, e_j_avail);
  std::fill(s.beta.begin(), s.beta.end(), std::uint8_t{1});
  allocate(s);
  return s;
}

JamSchedule make_perj(const MessagePlan& plan, const FrameLayout& layout, const PhyConfig& cfg,
                      double t_d_us, double start_offset_us, double e_j_avail) {
  check_layout(plan, layout);
  if (!(t_d_us > 0.0) || start_offset_us < 0.0 ||
      start_offset_us + t_d_us > static_cast<double>(layout.t_frame_us) + 1e-9) {
    throw std::invalid_argument("make_perj: pulse must lie inside the frame");
  }
  const std::size_t begin = cfg.us_to_samples(start_offset_us);
  const std::size_t end = std::min(cfg.us_to_samples(start_offset_us + t_d_us), layout.n_samples_frame);
  if (end <= begin) throw std::invalid_argument("make_perj: pulse shorter than one sample");
  const Scheme scheme = begin >= layout.data_window().begin ? Scheme::kPerJDT : Scheme::kPerJPT;
  JamSchedule s = blank(scheme, plan, e_j_avail);
  mark_every_frame(s, begin, end);
  allocate(s);
  return s;
}

JamSchedule make_perjpt(const MessagePlan& plan, const FrameLayout& layout, double e_j_avail) {
  check_layout(plan, layout);
  JamSchedule s = blank(Scheme::kPerJPT, plan, e_j_avail);
  mark_every_frame(s, layout.htltf_critical_window.begin, layout.htltf_critical_window.end);
  allocate(s);
  return s;
}

JamSchedule make_repj(const MessagePlan& plan, const FrameLayout& layout, const PhyConfig& cfg,
                      int n_pulse, double duty, double start_offset_us, double e_j_avail) {
  check_layout(plan, layout);
  if (n_pulse < 1) throw std::invalid_argument("make_repj: n_pulse must be >= 1");
  if (!(duty > 0.0) || duty > 1.0) throw std::invalid_argument("make_repj: duty must be in (0, 1]");
  const std::size_t offset = cfg.us_to_samples(start_offset_us);
  if (offset < layout.data_window().begin || offset >= layout.n_samples_frame) {
    throw std::invalid_argument("make_repj: pulses must start inside the DATA field");
  }
  const double span = static_cast<double>(layout.n_samples_frame - offset);
  const double period = span / n_pulse;
  const auto width = static_cast<std::size_t>(std::llround(duty * period));
  if (width < 1) throw std::invalid_argument("make_repj: pulse width below one sample");

  JamSchedule s = blank(Scheme::kRepJDT, plan, e_j_avail);
  for (int p = 0; p < n_pulse; ++p) {
    const auto begin = offset + static_cast<std::size_t>(std::floor(p * period));
    const auto next = offset + static_cast<std::size_t>(std::floor((p + 1) * period));
    mark_every_frame(s, begin, std::min({begin + width, next, layout.n_samples_frame}));
  }
  allocate(s);
  return s;
}

JamSchedule make_ranj(const MessagePlan& plan, const FrameLayout& layout, double rho_target,
                      RandomPosition position, std::uint64_t seed, double e_j_avail) {
  check_layout(plan, layout);
  if (!(rho_target > 0.0) || rho_target > 1.0) {
    throw std::invalid_argument("make_ranj: rho_target must be in (0, 1]");
  }
  JamSchedule s = blank(position == RandomPosition::kDT ? Scheme::kRanJDT : Scheme::kRanJFT, plan,
                        e_j_avail);
  s.seed = seed;
  const std::size_t first = position == RandomPosition::kDT ? layout.data_window().begin : 0;
  for (std::size_t f = 0; f < s.n_frame; ++f) {
    auto eng = substream(seed, StreamTag::kJamPattern, f);
    std::bernoulli_distribution pick(rho_target);
    const std::size_t base = f * s.n_samples_frame;
    for (std::size_t k = first; k < s.n_samples_frame; ++k) s.beta[base + k] = pick(eng) ? 1 : 0;
  }
  allocate(s);
  return s;
}

JamSchedule with_beta(const JamSchedule& schedule, std::vector<std::uint8_t> beta) {
  if (beta.size() != schedule.beta.size()) throw std::invalid_argument("with_beta: length mismatch");
  if (std::any_of(beta.begin(), beta.end(), [](std::uint8_t b) { return b > 1; })) {
    throw std::invalid_argument("with_beta: indicator must be binary");
  }
  JamSchedule s = schedule;
  s.beta = std::move(beta);
  allocate(s);
  return s;
}

JamSchedule build_schedule(const ScheduleSpec& spec, const MessagePlan& plan,
                           const FrameLayout& layout, const PhyConfig& cfg, double e_j_avail) {
  check_layout(plan, layout);
  if (!(spec.energy_fraction > 0.0)) throw std::invalid_argument("energy_fraction must be positive");
  const double budget = e_j_avail * spec.energy_fraction;
  const double frame = static_cast<double>(layout.n_samples_frame);
  const std::size_t data_begin = layout.data_window().begin;
  const std::size_t offset =
      spec.offset_us < 0.0 ? data_begin : cfg.us_to_samples(spec.offset_us);
  const double us_per_sample = 1e6 / cfg.sample_rate_hz;
  if (spec.scheme != Scheme::kCJS && spec.scheme != Scheme::kPerJPT &&
      (!(spec.rho > 0.0) || spec.rho > 1.0)) {
    throw std::invalid_argument("schedule proportion must be in (0, 1]");
  }

  JamSchedule s;
  switch (spec.scheme) {
    case Scheme::kCJS:
      s = make_cjs(plan, budget);
      break;
    case Scheme::kPerJPT:
      s = make_perjpt(plan, layout, budget);
      break;
    case Scheme::kPerJDT: {
      const auto width = static_cast<std::size_t>(std::llround(spec.rho * frame));
      if (offset < data_begin || offset + width > layout.n_samples_frame) {
        throw std::invalid_argument("PerJDT pulse does not fit in the DATA field");
      }
      s = make_perj(plan, layout, cfg, static_cast<double>(width) * us_per_sample,
                    static_cast<double>(offset) * us_per_sample, budget);
      break;
    }
    case Scheme::kRepJDT: {
      const double span = static_cast<double>(layout.n_samples_frame - std::min(offset, layout.n_samples_frame));
      const double duty = spec.rho * frame / span;
      if (duty > 1.0 + 1e-12) throw std::invalid_argument("RepJDT proportion exceeds the DATA share");
      s = make_repj(plan, layout, cfg, spec.n_pulse, std::min(duty, 1.0),
                    static_cast<double>(offset) * us_per_sample, budget);
      break;
    }
    case Scheme::kRanJDT: {
      const double target = spec.rho * frame / static_cast<double>(layout.data_window().size());
      if (target > 1.0 + 1e-12) throw std::invalid_argument("RanJDT proportion exceeds the DATA share");
      s = make_ranj(plan, layout, std::min(target, 1.0), RandomPosition::kDT, spec.seed, budget);
      break;
    }
    case Scheme::kRanJFT:
      s = make_ranj(plan, layout, spec.rho, RandomPosition::kFT, spec.seed, budget);
      break;
  }
  s.seed = spec.seed;
  return s;
}

std::vector<cd> jamming_waveform(const JamSchedule& schedule) {
  std::vector<cd> out(schedule.beta.size(), cd{});
  const double p = schedule.power();
  for (std::size_t f = 0; f < schedule.n_frame; ++f) {
    const std::size_t base = f * schedule.n_samples_frame;
    ComplexGaussian draw(substream(schedule.seed, StreamTag::kJamWaveform, f));
    double energy = 0.0;
    std::size_t count = 0;
    for (std::size_t k = base; k < base + schedule.n_samples_frame; ++k) {
      if (!schedule.beta[k]) continue;
      out[k] = draw(p);
      energy += std::norm(out[k]);
      ++count;
    }
    if (count == 0) continue;
    const double scale = std::sqrt(p * static_cast<double>(count) / energy);
    for (std::size_t k = base; k < base + schedule.n_samples_frame; ++k) out[k] *= scale;
  }
  return out;
}

JamBudget account(const JamSchedule& schedule, std::span<const cd> jam_waveform,
                  const SampleStream& legit) {
  if (jam_waveform.size() != schedule.beta.size() || legit.size() != schedule.beta.size()) {
    throw std::invalid_argument("account: schedule, waveform and stream are not aligned");
  }
  JamBudget b;
  b.e_j_avail = schedule.e_j_avail;
  long double spent = 0.0L;
  long double signal = 0.0L;
  std::size_t n_jam = 0;
  for (std::size_t k = 0; k < schedule.beta.size(); ++k) {
    signal += std::norm(legit.samples[k]);
    if (!schedule.beta[k]) continue;
    spent += std::norm(jam_waveform[k]);
    ++n_jam;
  }
  b.e_j_spent = static_cast<double>(spent);
  const double n_s = static_cast<double>(schedule.beta.size());
  b.rho = n_s > 0 ? static_cast<double>(n_jam) / n_s : 0.0;
  if (n_jam > 0) {
    b.p_j = b.e_j_spent / static_cast<double>(n_jam);
    const double signal_power = static_cast<double>(signal) / n_s;
    if (signal_power > 0.0) b.jsr = *b.p_j / signal_power;
  }
  return b;
}

JamBudget account(const JamSchedule& schedule, const SampleStream& legit) {
  const auto w = jamming_waveform(schedule);
  return account(schedule, w, legit);
}

std::string schedule_csv(const JamSchedule& schedule) {
  std::ostringstream os;
  os << "frame_index,start_sample,end_sample\n";
  for (std::size_t f = 0; f < schedule.n_frame; ++f) {
    const std::size_t base = f * schedule.n_samples_frame;
    std::size_t k = 0;
    while (k < schedule.n_samples_frame) {
      if (!schedule.beta[base + k]) {
        ++k;
        continue;
      }
      const std::size_t start = k;
      while (k < schedule.n_samples_frame && schedule.beta[base + k]) ++k;
      os << f << ',' << start << ',' << k << '\n';
    }
  }
  return os.str();
}

void export_schedule_csv(const JamSchedule& schedule, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << schedule_csv(schedule);
}

}  // namespace ijam
