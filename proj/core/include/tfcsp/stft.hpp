#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace tfcsp {

// Squared-magnitude short-time spectrum of one signal.
// power(bin, frame) covers the non-negative frequency bins 0..window_len/2.
struct Spectrogram {
  Eigen::MatrixXd power;
  double bin_hz{0};
  std::vector<double> frame_times_s;  // frame centers
  int window_len{0};
  int hop{0};
  double sampling_rate{0};

  Eigen::Index bins() const { return power.rows(); }
  Eigen::Index frames() const { return power.cols(); }
  double bin_center_hz(Eigen::Index k) const { return static_cast<double>(k) * bin_hz; }
};

inline constexpr int kDefaultStftWindow = 125;
inline constexpr int kDefaultStftHop = 62;

// Symmetric Hamming window of length n.
std::vector<double> hamming_window(int n);

// Hamming-windowed DFT per frame with FFT length = window length (no zero
// padding). Frame k covers samples [k*hop, k*hop + window_len) and is stamped
// with its center time (k*hop + window_len/2) / fs.
// Throws RangeError if window_len > x.size(), window_len < 2 or hop < 1.
Spectrogram stft(std::span<const double> x, int window_len, int hop, double sampling_rate);

// Sum over the one-sided spectrum weighted so that it equals the two-sided
// energy divided by the DFT length; equals sum((w*x)^2) for the frame by Parseval.
double frame_energy(const Spectrogram& s, Eigen::Index frame);

}  // namespace tfcsp
