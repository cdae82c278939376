#include "ijam/ofdm.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace ijam::ofdm {
namespace {

// FFTW planning is not thread-safe; execution on new arrays is.
struct Plans {
  fftw_plan forward;
  fftw_plan backward;

  Plans() {
    Grid a{}, b{};
    auto* in = reinterpret_cast<fftw_complex*>(a.data());
    auto* out = reinterpret_cast<fftw_complex*>(b.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward = fftw_plan_dft_1d(kFftSize, in, out, FFTW_FORWARD, flags);
    backward = fftw_plan_dft_1d(kFftSize, in, out, FFTW_BACKWARD, flags);
  }
};

const Plans& plans() {
  static std::once_flag once;
  static Plans* p = nullptr;
  std::call_once(once, [] { p = new Plans(); });
  return *p;
}

const double kOccupiedScale = std::sqrt(static_cast<double>(kDataSubcarriers));

}  // namespace

const std::array<std::size_t, kDataSubcarriers>& data_bins() {
  static const auto bins = [] {
    std::array<std::size_t, kDataSubcarriers> b{};
    std::size_t i = 0;
    for (int k = -26; k <= 26; ++k) {
      if (k == 0) continue;
      b[i++] = static_cast<std::size_t>((k + static_cast<int>(kFftSize)) % kFftSize);
    }
    return b;
  }();
  return bins;
}

const std::array<std::size_t, kSigSubcarriers>& sig_bins() {
  static const auto bins = [] {
    std::array<std::size_t, kSigSubcarriers> b{};
    std::size_t i = 0;
    for (int k = -26; k <= 26; ++k) {
      if (k == 0 || std::abs(k) == 7 || std::abs(k) == 21) continue;
      b[i++] = static_cast<std::size_t>((k + static_cast<int>(kFftSize)) % kFftSize);
    }
    return b;
  }();
  return bins;
}

void modulate(const Grid& grid, std::span<cd> out) {
  if (out.size() != kSymbolSamples) throw std::invalid_argument("ofdm::modulate: bad output size");
  Grid in = grid;
  Grid body{};
  fftw_execute_dft(plans().backward, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(body.data()));
  for (auto& v : body) v /= kOccupiedScale;
  std::copy(body.end() - kCyclicPrefix, body.end(), out.begin());
  std::copy(body.begin(), body.end(), out.begin() + kCyclicPrefix);
}

Grid demodulate(std::span<const cd> body) {
  if (body.size() != kFftSize) throw std::invalid_argument("ofdm::demodulate: bad input size");
  Grid in{}, out{};
  std::copy(body.begin(), body.end(), in.begin());
  fftw_execute_dft(plans().forward, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = kOccupiedScale / static_cast<double>(kFftSize);
  for (auto& v : out) v *= scale;
  return out;
}

}  // namespace ijam::ofdm
