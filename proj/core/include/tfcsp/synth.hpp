#pragma once

#include "tfcsp/trialset.hpp"

#include <cstdint>
#include <vector>

namespace tfcsp {

// Shape parameters for the synthetic motor-imagery generator.
//
// Each trial is unit-variance white Gaussian noise on every channel. On the
// channels mapped to the trial's class, sinusoidal rhythms are added inside
// the active window with amplitude snr * rhythm_gains[k] and an independent
// random phase per trial and channel, emulating event-related synchronization.
struct SynthConfig {
  std::uint64_t seed{7};
  int channels{8};
  double sampling_rate{250.0};
  double trial_duration_s{4.0};
  int trials_per_class{40};
  int class_count{4};
  std::vector<double> rhythm_freqs{10.0, 20.0};
  // Relative amplitude per rhythm; empty means 1.0 for every rhythm.
  std::vector<double> rhythm_gains{1.0, 0.5};
  double snr{2.0};
  double active_start_s{1.5};
  double active_end_s{3.5};
  // Per-trial uniform shift of the active window in [-jitter, +jitter],
  // clamped so the window stays inside the trial.
  double active_jitter_s{0.0};
  // class_channel_map[c] = channels whose rhythm is modulated for class c.
  // Empty means contiguous blocks: class c gets [c*N/M, (c+1)*N/M).
  std::vector<std::vector<int>> class_channel_map;
};

// Throws ArgumentError on the first violated precondition.
void validate(const SynthConfig& cfg);

// Contiguous-block class/channel mapping used when cfg.class_channel_map is empty.
std::vector<std::vector<int>> default_class_channel_map(int channels, int class_count);

// Deterministic for a fixed config. Labels are interleaved 0,1,..,M-1,0,1,...
// so any prefix is close to balanced. Samples are rounded to float precision.
TrialSet generate_synthetic(const SynthConfig& cfg);

}  // namespace tfcsp
