#pragma once

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

namespace tfcsp {

// One biquad: H(z) = (b0 + b1 z^-1 + b2 z^-2) / (1 + a1 z^-1 + a2 z^-2).
struct SecondOrderSection {
  double b0{1}, b1{0}, b2{0};
  double a1{0}, a2{0};
};

struct IirFilter {
  std::vector<SecondOrderSection> sections;
  int order{0};  // overall bandpass order (number of poles)
  double low_hz{0};
  double high_hz{0};
  double sampling_rate{0};
  // Cached settling_samples() from design time; 0 means "not computed".
  std::size_t settling_length{0};

  // Transfer function evaluated on the unit circle at `freq_hz`.
  std::complex<double> response(double freq_hz) const;
  double magnitude_db(double freq_hz) const;

  // Pole locations in the z-plane, two per section.
  std::vector<std::complex<double>> poles() const;

  // Impulse-response length after which |h[n]| stays below 1% of its peak.
  std::size_t settling_samples() const;
};

// Butterworth bandpass of even overall order `order`: an order/2 analog
// lowpass prototype, lowpass-to-bandpass transformed around the pre-warped
// edges, discretized by the bilinear transform and grouped into order/2
// biquads. Passband gain is normalized to 1 at the geometric band center.
// Throws DesignError unless 0 < low < high < fs/2 and order is even and >= 2.
IirFilter design_butterworth_bandpass(int order, double low_hz, double high_hz, double sampling_rate);

// Single forward pass of the cascade (causal).
void filter_inplace(const IirFilter& f, std::span<double> x);

// Zero-phase forward-backward filtering with odd-reflection padding of
// 3 x settling_samples() on each side (clamped to the signal length).
// Output length equals input length.
std::vector<double> filter_signal(const IirFilter& f, std::span<const double> x);

// Row-wise filter_signal over a channels x samples matrix.
Eigen::MatrixXd filter_rows(const IirFilter& f, const Eigen::MatrixXd& x);

}  // namespace tfcsp
