#include "tfcsp/stft.hpp"

#include "tfcsp/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace tfcsp {

std::vector<double> hamming_window(int n) {
  std::vector<double> w(static_cast<std::size_t>(n), 1.0);
  if (n < 2) return w;
  for (int i = 0; i < n; ++i) {
    w[static_cast<std::size_t>(i)] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * i / (n - 1));
  }
  return w;
}

Spectrogram stft(std::span<const double> x, int window_len, int hop, double sampling_rate) {
  if (window_len < 2) throw RangeError("stft: window length must be >= 2");
  if (hop < 1) throw RangeError("stft: hop must be >= 1");
  if (static_cast<std::size_t>(window_len) > x.size()) {
    throw RangeError("stft: window of " + std::to_string(window_len) + " samples exceeds signal of " +
                     std::to_string(x.size()));
  }
  const int n = window_len;
  const int n_bins = n / 2 + 1;
  const auto n_frames = static_cast<Eigen::Index>((x.size() - static_cast<std::size_t>(n)) / hop + 1);

  // Twiddles indexed by (k*t) mod n; exact periodicity avoids drift for large k*t.
  std::vector<double> cos_tab(static_cast<std::size_t>(n)), sin_tab(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * i / n;
    cos_tab[static_cast<std::size_t>(i)] = std::cos(a);
    sin_tab[static_cast<std::size_t>(i)] = std::sin(a);
  }
  const auto window = hamming_window(n);

  Spectrogram s;
  s.window_len = n;
  s.hop = hop;
  s.sampling_rate = sampling_rate;
  s.bin_hz = sampling_rate / n;
  s.power.resize(n_bins, n_frames);
  s.frame_times_s.resize(static_cast<std::size_t>(n_frames));

  std::vector<double> frame(static_cast<std::size_t>(n));
  for (Eigen::Index f = 0; f < n_frames; ++f) {
    const std::size_t start = static_cast<std::size_t>(f) * static_cast<std::size_t>(hop);
    for (int t = 0; t < n; ++t) {
      frame[static_cast<std::size_t>(t)] = x[start + static_cast<std::size_t>(t)] * window[static_cast<std::size_t>(t)];
    }
    for (int k = 0; k < n_bins; ++k) {
      double re = 0.0, im = 0.0;
      int idx = 0;
      for (int t = 0; t < n; ++t) {
        re += frame[static_cast<std::size_t>(t)] * cos_tab[static_cast<std::size_t>(idx)];
        im -= frame[static_cast<std::size_t>(t)] * sin_tab[static_cast<std::size_t>(idx)];
        idx += k;
        if (idx >= n) idx -= n;
      }
      s.power(k, f) = re * re + im * im;
    }
    s.frame_times_s[static_cast<std::size_t>(f)] = (static_cast<double>(start) + n / 2.0) / sampling_rate;
  }
  return s;
}

double frame_energy(const Spectrogram& s, Eigen::Index frame) {
  const int n = s.window_len;
  double total = 0.0;
  for (Eigen::Index k = 0; k < s.bins(); ++k) {
    const bool unpaired = k == 0 || (n % 2 == 0 && k == n / 2);
    total += (unpaired ? 1.0 : 2.0) * s.power(k, frame);
  }
  return total / n;
}

}  // namespace tfcsp
