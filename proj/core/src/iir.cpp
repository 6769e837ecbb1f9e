#include "tfcsp/iir.hpp"

#include "tfcsp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace tfcsp {
namespace {

using cd = std::complex<double>;

constexpr std::size_t kMaxSettlingProbe = 200000;

}  // namespace

cd IirFilter::response(double freq_hz) const {
  const double w = 2.0 * std::numbers::pi * freq_hz / sampling_rate;
  const cd z1 = std::polar(1.0, -w);
  const cd z2 = z1 * z1;
  cd h{1.0, 0.0};
  for (const auto& s : sections) {
    h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
  }
  return h;
}

double IirFilter::magnitude_db(double freq_hz) const { return 20.0 * std::log10(std::abs(response(freq_hz))); }

std::vector<cd> IirFilter::poles() const {
  std::vector<cd> out;
  out.reserve(sections.size() * 2);
  for (const auto& s : sections) {
    // z^2 + a1 z + a2 = 0
    const cd disc = std::sqrt(cd(s.a1 * s.a1 - 4.0 * s.a2, 0.0));
    out.push_back((-s.a1 + disc) / 2.0);
    out.push_back((-s.a1 - disc) / 2.0);
  }
  return out;
}

std::size_t IirFilter::settling_samples() const {
  // Run the cascade on an impulse until the tail has stayed under 1% of the
  // peak for a stretch longer than anything seen so far.
  std::vector<double> h(std::min<std::size_t>(4096, kMaxSettlingProbe), 0.0);
  for (;;) {
    std::fill(h.begin(), h.end(), 0.0);
    h[0] = 1.0;
    filter_inplace(*this, h);
    double peak = 0.0;
    for (double v : h) peak = std::max(peak, std::abs(v));
    std::size_t last = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (std::abs(h[i]) >= 0.01 * peak) last = i;
    }
    if (last + 1 < h.size() / 2 || h.size() >= kMaxSettlingProbe) return last + 1;
    h.resize(std::min(h.size() * 2, kMaxSettlingProbe));
  }
}

IirFilter design_butterworth_bandpass(int order, double low_hz, double high_hz, double sampling_rate) {
  if (!(sampling_rate > 0.0)) throw DesignError("sampling rate must be positive");
  if (order < 2 || order % 2 != 0) {
    throw DesignError("bandpass order must be even and >= 2, got " + std::to_string(order));
  }
  if (!(low_hz > 0.0 && low_hz < high_hz && high_hz < sampling_rate / 2.0)) {
    throw DesignError("band edges must satisfy 0 < low < high < fs/2 (low=" + std::to_string(low_hz) +
                      ", high=" + std::to_string(high_hz) + ", fs=" + std::to_string(sampling_rate) + ")");
  }
  const int proto = order / 2;
  const double k2 = 2.0 * sampling_rate;
  const double w_lo = k2 * std::tan(std::numbers::pi * low_hz / sampling_rate);
  const double w_hi = k2 * std::tan(std::numbers::pi * high_hz / sampling_rate);
  const double bw = w_hi - w_lo;
  const double w0_sq = w_lo * w_hi;

  // Analog lowpass prototype poles on the left half of the unit circle, then
  // s -> (s^2 + w0^2) / (bw s): each prototype pole p yields the two roots of
  // s^2 - p bw s + w0^2.
  std::vector<cd> digital;
  digital.reserve(static_cast<std::size_t>(order));
  for (int k = 0; k < proto; ++k) {
    const double theta = std::numbers::pi * (2.0 * k + proto + 1) / (2.0 * proto);
    const cd p = std::polar(1.0, theta);
    const cd pb = p * bw;
    const cd root = std::sqrt(pb * pb - 4.0 * w0_sq);
    for (const cd s : {(pb + root) / 2.0, (pb - root) / 2.0}) {
      digital.push_back((k2 + s) / (k2 - s));
    }
  }

  // Group into biquads: one conjugate pair per section; leftover real poles
  // are paired with each other.
  std::vector<cd> upper;
  std::vector<double> real;
  for (const cd z : digital) {
    if (std::abs(z.imag()) <= 1e-12 * std::max(1.0, std::abs(z))) {
      real.push_back(z.real());
    } else if (z.imag() > 0.0) {
      upper.push_back(z);
    }
  }
  std::sort(upper.begin(), upper.end(), [](cd a, cd b) { return std::arg(a) < std::arg(b); });
  std::sort(real.begin(), real.end());

  IirFilter f;
  f.order = order;
  f.low_hz = low_hz;
  f.high_hz = high_hz;
  f.sampling_rate = sampling_rate;
  // Every section carries one zero at z = 1 (s = 0) and one at z = -1 (s = inf).
  for (const cd z : upper) {
    f.sections.push_back({1.0, 0.0, -1.0, -2.0 * z.real(), std::norm(z)});
  }
  for (std::size_t i = 0; i + 1 < real.size(); i += 2) {
    f.sections.push_back({1.0, 0.0, -1.0, -(real[i] + real[i + 1]), real[i] * real[i + 1]});
  }
  if (static_cast<int>(f.sections.size()) != proto) {
    throw DesignError("pole grouping produced " + std::to_string(f.sections.size()) + " sections, expected " +
                      std::to_string(proto));
  }

  // Unity gain at the band center (the bilinear image of w0), spread evenly.
  const double center_hz = sampling_rate / std::numbers::pi * std::atan(std::sqrt(w0_sq) / k2);
  const double g = std::abs(f.response(center_hz));
  const double per_section = std::pow(1.0 / g, 1.0 / static_cast<double>(f.sections.size()));
  for (auto& s : f.sections) {
    s.b0 *= per_section;
    s.b1 *= per_section;
    s.b2 *= per_section;
  }
  f.settling_length = f.settling_samples();
  return f;
}

void filter_inplace(const IirFilter& f, std::span<double> x) {
  for (const auto& s : f.sections) {
    // Transposed direct form II.
    double z1 = 0.0, z2 = 0.0;
    for (double& v : x) {
      const double in = v;
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      v = out;
    }
  }
}

std::vector<double> filter_signal(const IirFilter& f, std::span<const double> x) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  const std::size_t settle = f.settling_length > 0 ? f.settling_length : f.settling_samples();
  const std::size_t pad = n > 1 ? std::min(3 * settle, n - 1) : 0;

  std::vector<double> ext(n + 2 * pad);
  const double first = x.front();
  const double last = x.back();
  for (std::size_t i = 0; i < pad; ++i) {
    ext[i] = 2.0 * first - x[pad - i];
    ext[pad + n + i] = 2.0 * last - x[n - 2 - i];
  }
  std::copy(x.begin(), x.end(), ext.begin() + static_cast<std::ptrdiff_t>(pad));

  filter_inplace(f, ext);
  std::reverse(ext.begin(), ext.end());
  filter_inplace(f, ext);
  std::reverse(ext.begin(), ext.end());

  return {ext.begin() + static_cast<std::ptrdiff_t>(pad), ext.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

Eigen::MatrixXd filter_rows(const IirFilter& f, const Eigen::MatrixXd& x) {
  Eigen::MatrixXd out(x.rows(), x.cols());
  std::vector<double> row(static_cast<std::size_t>(x.cols()));
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) row[static_cast<std::size_t>(c)] = x(r, c);
    const auto y = filter_signal(f, row);
    for (Eigen::Index c = 0; c < x.cols(); ++c) out(r, c) = y[static_cast<std::size_t>(c)];
  }
  return out;
}

}  // namespace tfcsp
