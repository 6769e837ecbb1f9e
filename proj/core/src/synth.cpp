#include "tfcsp/synth.hpp"

#include "tfcsp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace tfcsp {

void validate(const SynthConfig& cfg) {
  if (cfg.channels < 1) throw ArgumentError("synth: channels must be >= 1");
  if (cfg.class_count < 2) throw ArgumentError("synth: class count must be >= 2");
  if (cfg.class_count > 65535) throw ArgumentError("synth: class count must be <= 65535");
  if (cfg.trials_per_class < 0) throw ArgumentError("synth: trials per class must be >= 0");
  if (!(cfg.sampling_rate > 0.0)) throw ArgumentError("synth: sampling rate must be positive");
  if (!(cfg.trial_duration_s > 0.0)) throw ArgumentError("synth: trial duration must be positive");
  if (std::lround(cfg.trial_duration_s * cfg.sampling_rate) < 2) {
    throw ArgumentError("synth: trial must span at least 2 samples");
  }
  if (!(cfg.snr >= 0.0) || !std::isfinite(cfg.snr)) throw ArgumentError("synth: snr must be finite and >= 0");
  if (!(cfg.active_start_s >= 0.0 && cfg.active_start_s < cfg.active_end_s &&
        cfg.active_end_s <= cfg.trial_duration_s)) {
    throw ArgumentError("synth: active window must satisfy 0 <= start < end <= trial duration");
  }
  if (!(cfg.active_jitter_s >= 0.0)) throw ArgumentError("synth: jitter must be >= 0");
  for (double f : cfg.rhythm_freqs) {
    if (!(f > 0.0 && f < cfg.sampling_rate / 2.0)) {
      throw ArgumentError("synth: rhythm frequency " + std::to_string(f) + " outside (0, fs/2)");
    }
  }
  if (!cfg.rhythm_gains.empty() && cfg.rhythm_gains.size() != cfg.rhythm_freqs.size()) {
    throw ArgumentError("synth: rhythm_gains must be empty or match rhythm_freqs");
  }
  if (!cfg.class_channel_map.empty()) {
    if (static_cast<int>(cfg.class_channel_map.size()) != cfg.class_count) {
      throw ArgumentError("synth: class_channel_map needs one entry per class");
    }
    for (const auto& chans : cfg.class_channel_map) {
      for (int c : chans) {
        if (c < 0 || c >= cfg.channels) {
          throw ArgumentError("synth: mapped channel " + std::to_string(c) + " outside [0, N)");
        }
      }
    }
  }
}

std::vector<std::vector<int>> default_class_channel_map(int channels, int class_count) {
  std::vector<std::vector<int>> map(static_cast<std::size_t>(class_count));
  for (int c = 0; c < class_count; ++c) {
    int lo = static_cast<int>(static_cast<long long>(c) * channels / class_count);
    int hi = static_cast<int>(static_cast<long long>(c + 1) * channels / class_count);
    // Fewer channels than classes: fall back to a single (shared) channel.
    if (hi <= lo) hi = lo + 1;
    for (int ch = lo; ch < hi && ch < channels; ++ch) map[static_cast<std::size_t>(c)].push_back(ch);
  }
  return map;
}

TrialSet generate_synthetic(const SynthConfig& cfg) {
  validate(cfg);
  const auto map = cfg.class_channel_map.empty() ? default_class_channel_map(cfg.channels, cfg.class_count)
                                                 : cfg.class_channel_map;
  const double fs = cfg.sampling_rate;
  const Eigen::Index n_samples = std::lround(cfg.trial_duration_s * fs);
  const double window_len = cfg.active_end_s - cfg.active_start_s;

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_real_distribution<double> phase_dist(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> jitter_dist(-cfg.active_jitter_s, cfg.active_jitter_s);

  TrialSet set;
  set.sampling_rate = fs;
  set.class_count = cfg.class_count;
  set.channel_names = default_channel_names(cfg.channels);
  set.trials.reserve(static_cast<std::size_t>(cfg.trials_per_class) * cfg.class_count);

  for (int rep = 0; rep < cfg.trials_per_class; ++rep) {
    for (int label = 0; label < cfg.class_count; ++label) {
      Trial trial;
      trial.label = static_cast<ClassIndex>(label);
      trial.samples.resize(cfg.channels, n_samples);
      for (Eigen::Index c = 0; c < trial.samples.rows(); ++c) {
        for (Eigen::Index s = 0; s < n_samples; ++s) trial.samples(c, s) = noise(rng);
      }

      double start = cfg.active_start_s;
      if (cfg.active_jitter_s > 0.0) {
        start += jitter_dist(rng);
        start = std::clamp(start, 0.0, cfg.trial_duration_s - window_len);
      }
      const auto s0 = static_cast<Eigen::Index>(std::ceil(start * fs - 1e-9));
      const auto s1 = std::min(n_samples, static_cast<Eigen::Index>(std::ceil((start + window_len) * fs - 1e-9)));

      for (int ch : map[static_cast<std::size_t>(label)]) {
        for (std::size_t k = 0; k < cfg.rhythm_freqs.size(); ++k) {
          const double gain = cfg.rhythm_gains.empty() ? 1.0 : cfg.rhythm_gains[k];
          const double amp = cfg.snr * gain;
          const double phase = phase_dist(rng);
          const double w = 2.0 * std::numbers::pi * cfg.rhythm_freqs[k] / fs;
          for (Eigen::Index s = s0; s < s1; ++s) {
            trial.samples(ch, s) += amp * std::sin(w * static_cast<double>(s) + phase);
          }
        }
      }
      trial.samples = trial.samples.cast<float>().cast<double>();
      set.trials.push_back(std::move(trial));
    }
  }
  return set;
}

}  // namespace tfcsp
