#pragma once

#include "tfcsp/iir.hpp"
#include "tfcsp/stft.hpp"
#include "tfcsp/trialset.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace tfcsp {

// Overlapping frequency x temporal band layout. Band (i, j) spans
// [freq_start(i), freq_start(i) + freq_band_width) Hz and
// [time_start(j), time_start(j) + time_band_width) s.
struct BandGrid {
  double freq_band_width{2.0};
  double freq_start_step{1.0};
  double freq_start_min{0.0};
  double freq_start_max{28.0};
  double time_band_width{1.0};
  double time_start_step{0.5};
  double time_start_min{0.0};
  double time_start_max{3.0};

  // Grid whose bands tile [f_lo, f_hi] Hz and [t_lo, t_hi] s exactly.
  static BandGrid covering(double f_lo, double f_hi, double f_width, double f_step, double t_lo, double t_hi,
                           double t_width, double t_step);

  int freq_bands() const;  // m
  int time_bands() const;  // n
  double freq_start(int i) const { return freq_start_min + i * freq_start_step; }
  double time_start(int j) const { return time_start_min + j * time_start_step; }

  // Throws ArgumentError on non-positive widths/steps or max < min.
  void validate() const;
};

// m x n matrix of mean band power.
struct BandEnergyMatrix {
  Eigen::MatrixXd values;
  BandGrid grid;
};

struct BandSelection {
  double freq_start{0};
  double time_start{0};
  double energy{0};
  int freq_index{0};
  int time_index{0};
};

// Element (i, j) is the mean power over bins whose center lies in the
// frequency band and frames whose center lies in the temporal band, averaged
// over `channels` (all spectrograms when empty).
// Throws CoverageError if the grid reaches beyond the spectrogram or a band
// contains no bin/frame.
BandEnergyMatrix band_energy_matrix(std::span<const Spectrogram> spectrograms, std::span<const int> channels,
                                    const BandGrid& grid);

// Argmax; ties go to the lowest frequency start, then the earliest time start.
BandSelection select_optimal_element(const BandEnergyMatrix& mat);

// Argmax along one frequency row (earliest time start wins ties).
BandSelection select_time_in_row(const BandEnergyMatrix& mat, int freq_index);

// Mean of the selected frequency starts, rounded half-up to the grid's
// frequency step and clamped to the grid. Throws ArgumentError if empty.
double subject_frequency_band(std::span<const BandSelection> selections, const BandGrid& grid = {});

// Index of a grid frequency start (nearest).
int freq_index_of(const BandGrid& grid, double freq_start);

struct StftParams {
  int window_len{kDefaultStftWindow};
  int hop{kDefaultStftHop};
};

// STFT of every channel of an epoch followed by band_energy_matrix.
BandEnergyMatrix epoch_energy_matrix(const Eigen::MatrixXd& epoch, double sampling_rate, const BandGrid& grid,
                                     const StftParams& stft_params = {}, std::span<const int> channels = {});

// Bandpass filters the whole trial (order `filter_order` Butterworth) to
// [freq_start, freq_start + freq_band_width], lower edge floored at 0.5 Hz,
// then crops [time_start, time_start + time_band_width).
// Throws RangeError if the crop window falls outside the trial.
Trial crop_to_selection(const Trial& trial, double freq_start, double time_start, const BandGrid& grid,
                        double sampling_rate, int filter_order = 8);

// Same, with a pre-designed band filter.
Trial crop_to_selection(const Trial& trial, const IirFilter& band_filter, double time_start, const BandGrid& grid,
                        double sampling_rate);

// Band filter crop_to_selection designs for a frequency start.
IirFilter selection_band_filter(double freq_start, const BandGrid& grid, double sampling_rate, int filter_order = 8);

inline constexpr double kMinBandEdgeHz = 0.5;

}  // namespace tfcsp
