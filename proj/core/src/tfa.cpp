#include "tfcsp/tfa.hpp"

#include "tfcsp/errors.hpp"
#include "tfcsp/iir.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace tfcsp {
namespace {

constexpr double kEps = 1e-9;

bool in_band(double x, double lo, double width) { return x >= lo - kEps && x < lo + width - kEps; }

int band_count(double lo, double hi, double step) {
  return static_cast<int>(std::floor((hi - lo) / step + kEps)) + 1;
}

}  // namespace

BandGrid BandGrid::covering(double f_lo, double f_hi, double f_width, double f_step, double t_lo, double t_hi,
                            double t_width, double t_step) {
  BandGrid g;
  g.freq_band_width = f_width;
  g.freq_start_step = f_step;
  g.freq_start_min = f_lo;
  g.freq_start_max = f_hi - f_width;
  g.time_band_width = t_width;
  g.time_start_step = t_step;
  g.time_start_min = t_lo;
  g.time_start_max = t_hi - t_width;
  g.validate();
  return g;
}

int BandGrid::freq_bands() const { return band_count(freq_start_min, freq_start_max, freq_start_step); }
int BandGrid::time_bands() const { return band_count(time_start_min, time_start_max, time_start_step); }

void BandGrid::validate() const {
  if (!(freq_band_width > 0 && freq_start_step > 0 && time_band_width > 0 && time_start_step > 0)) {
    throw ArgumentError("band grid widths and steps must be positive");
  }
  if (!(freq_start_min >= 0 && freq_start_max >= freq_start_min)) {
    throw ArgumentError("band grid frequency starts must satisfy 0 <= min <= max");
  }
  if (!(time_start_min >= 0 && time_start_max >= time_start_min)) {
    throw ArgumentError("band grid time starts must satisfy 0 <= min <= max");
  }
}

BandEnergyMatrix band_energy_matrix(std::span<const Spectrogram> spectrograms, std::span<const int> channels,
                                    const BandGrid& grid) {
  grid.validate();
  if (spectrograms.empty()) throw ArgumentError("band_energy_matrix: no spectrograms");
  std::vector<int> chans(channels.begin(), channels.end());
  if (chans.empty()) {
    chans.resize(spectrograms.size());
    std::iota(chans.begin(), chans.end(), 0);
  }
  for (int c : chans) {
    if (c < 0 || static_cast<std::size_t>(c) >= spectrograms.size()) {
      throw ArgumentError("band_energy_matrix: channel " + std::to_string(c) + " out of range");
    }
  }

  const Spectrogram& ref = spectrograms[static_cast<std::size_t>(chans.front())];
  const int m = grid.freq_bands();
  const int n = grid.time_bands();

  const double nyquist_edge = ref.bin_center_hz(ref.bins() - 1) + ref.bin_hz / 2.0;
  if (grid.freq_start_max + grid.freq_band_width > nyquist_edge + kEps) {
    throw CoverageError("band grid reaches " + std::to_string(grid.freq_start_max + grid.freq_band_width) +
                        " Hz but spectrogram covers up to " + std::to_string(nyquist_edge) + " Hz");
  }
  // Longest signal that still yields this frame count.
  const double span_end =
      (static_cast<double>(ref.frames()) * ref.hop + ref.window_len - 1) / ref.sampling_rate;
  if (grid.time_start_max + grid.time_band_width > span_end + kEps) {
    throw CoverageError("band grid reaches " + std::to_string(grid.time_start_max + grid.time_band_width) +
                        " s but spectrogram covers up to " + std::to_string(span_end) + " s");
  }

  // Bin and frame membership per band, shared by all channels.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> bin_ranges(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    Eigen::Index lo = -1, hi = -1;
    for (Eigen::Index k = 0; k < ref.bins(); ++k) {
      if (in_band(ref.bin_center_hz(k), grid.freq_start(i), grid.freq_band_width)) {
        if (lo < 0) lo = k;
        hi = k + 1;
      }
    }
    if (lo < 0) {
      throw CoverageError("frequency band starting at " + std::to_string(grid.freq_start(i)) +
                          " Hz contains no spectrogram bin");
    }
    bin_ranges[static_cast<std::size_t>(i)] = {lo, hi};
  }
  std::vector<std::pair<Eigen::Index, Eigen::Index>> frame_ranges(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    Eigen::Index lo = -1, hi = -1;
    for (Eigen::Index f = 0; f < ref.frames(); ++f) {
      if (in_band(ref.frame_times_s[static_cast<std::size_t>(f)], grid.time_start(j), grid.time_band_width)) {
        if (lo < 0) lo = f;
        hi = f + 1;
      }
    }
    if (lo < 0) {
      throw CoverageError("temporal band starting at " + std::to_string(grid.time_start(j)) +
                          " s contains no spectrogram frame");
    }
    frame_ranges[static_cast<std::size_t>(j)] = {lo, hi};
  }

  BandEnergyMatrix out;
  out.grid = grid;
  out.values = Eigen::MatrixXd::Zero(m, n);
  for (int c : chans) {
    const Spectrogram& s = spectrograms[static_cast<std::size_t>(c)];
    if (s.bins() != ref.bins() || s.frames() != ref.frames()) {
      throw ArgumentError("band_energy_matrix: spectrogram shapes differ across channels");
    }
    for (int i = 0; i < m; ++i) {
      const auto [b0, b1] = bin_ranges[static_cast<std::size_t>(i)];
      for (int j = 0; j < n; ++j) {
        const auto [f0, f1] = frame_ranges[static_cast<std::size_t>(j)];
        out.values(i, j) += s.power.block(b0, f0, b1 - b0, f1 - f0).mean();
      }
    }
  }
  out.values /= static_cast<double>(chans.size());
  return out;
}

BandSelection select_optimal_element(const BandEnergyMatrix& mat) {
  BandSelection best;
  best.energy = -1.0;
  for (int i = 0; i < mat.values.rows(); ++i) {
    for (int j = 0; j < mat.values.cols(); ++j) {
      if (mat.values(i, j) > best.energy) {
        best = {mat.grid.freq_start(i), mat.grid.time_start(j), mat.values(i, j), i, j};
      }
    }
  }
  return best;
}

BandSelection select_time_in_row(const BandEnergyMatrix& mat, int freq_index) {
  if (freq_index < 0 || freq_index >= mat.values.rows()) {
    throw ArgumentError("select_time_in_row: frequency index out of range");
  }
  BandSelection best;
  best.energy = -1.0;
  for (int j = 0; j < mat.values.cols(); ++j) {
    if (mat.values(freq_index, j) > best.energy) {
      best = {mat.grid.freq_start(freq_index), mat.grid.time_start(j), mat.values(freq_index, j), freq_index, j};
    }
  }
  return best;
}

double subject_frequency_band(std::span<const BandSelection> selections, const BandGrid& grid) {
  if (selections.empty()) throw ArgumentError("subject_frequency_band: no selections");
  double sum = 0.0;
  for (const auto& s : selections) sum += s.freq_start;
  const double mean = sum / static_cast<double>(selections.size());
  const double steps = std::floor((mean - grid.freq_start_min) / grid.freq_start_step + 0.5 + kEps);
  const int idx = std::clamp(static_cast<int>(steps), 0, grid.freq_bands() - 1);
  return grid.freq_start(idx);
}

int freq_index_of(const BandGrid& grid, double freq_start) {
  const int idx = static_cast<int>(std::lround((freq_start - grid.freq_start_min) / grid.freq_start_step));
  if (idx < 0 || idx >= grid.freq_bands() || std::abs(grid.freq_start(idx) - freq_start) > 1e-6) {
    throw ArgumentError("frequency start " + std::to_string(freq_start) + " is not on the grid");
  }
  return idx;
}

BandEnergyMatrix epoch_energy_matrix(const Eigen::MatrixXd& epoch, double sampling_rate, const BandGrid& grid,
                                     const StftParams& stft_params, std::span<const int> channels) {
  std::vector<Spectrogram> specs;
  specs.reserve(static_cast<std::size_t>(epoch.rows()));
  std::vector<double> row(static_cast<std::size_t>(epoch.cols()));
  for (Eigen::Index c = 0; c < epoch.rows(); ++c) {
    Eigen::Map<Eigen::RowVectorXd>(row.data(), epoch.cols()) = epoch.row(c);
    specs.push_back(stft(row, stft_params.window_len, stft_params.hop, sampling_rate));
  }
  return band_energy_matrix(specs, channels, grid);
}

IirFilter selection_band_filter(double freq_start, const BandGrid& grid, double sampling_rate, int filter_order) {
  const double lo = std::max(freq_start, kMinBandEdgeHz);
  const double hi = freq_start + grid.freq_band_width;
  return design_butterworth_bandpass(filter_order, lo, hi, sampling_rate);
}

Trial crop_to_selection(const Trial& trial, const IirFilter& band_filter, double time_start, const BandGrid& grid,
                        double sampling_rate) {
  const double duration = static_cast<double>(trial.length()) / sampling_rate;
  if (time_start < -kEps || time_start + grid.time_band_width > duration + kEps) {
    throw RangeError("crop window [" + std::to_string(time_start) + ", " +
                     std::to_string(time_start + grid.time_band_width) + "] s outside trial of " +
                     std::to_string(duration) + " s");
  }
  const auto s0 = static_cast<Eigen::Index>(std::lround(time_start * sampling_rate));
  const auto len = std::min<Eigen::Index>(static_cast<Eigen::Index>(std::lround(grid.time_band_width * sampling_rate)),
                                          trial.length() - s0);
  const Eigen::MatrixXd filtered = filter_rows(band_filter, trial.samples);
  Trial out;
  out.label = trial.label;
  out.samples = filtered.middleCols(s0, len);
  return out;
}

Trial crop_to_selection(const Trial& trial, double freq_start, double time_start, const BandGrid& grid,
                        double sampling_rate, int filter_order) {
  return crop_to_selection(trial, selection_band_filter(freq_start, grid, sampling_rate, filter_order), time_start,
                           grid, sampling_rate);
}

}  // namespace tfcsp
