#include "tfcsp/trialset.hpp"

#include "tfcsp/errors.hpp"

#include <cmath>
#include <limits>

namespace tfcsp {

std::vector<std::size_t> TrialSet::class_counts() const {
  std::vector<std::size_t> counts(static_cast<std::size_t>(std::max(class_count, 0)), 0);
  for (const auto& t : trials) {
    if (t.label < counts.size()) ++counts[t.label];
  }
  return counts;
}

void validate(const TrialSet& set) {
  if (!(set.sampling_rate > 0.0) || !std::isfinite(set.sampling_rate)) {
    throw ValidationError("sampling rate must be positive, got " + std::to_string(set.sampling_rate));
  }
  if (set.class_count < 2 || set.class_count > std::numeric_limits<ClassIndex>::max()) {
    throw ValidationError("class count must be in [2, 65535], got " + std::to_string(set.class_count));
  }
  if (set.channel_names.empty()) {
    throw ValidationError("trial set has no channels");
  }
  const Eigen::Index n = set.channels();
  const Eigen::Index t = set.samples_per_trial();
  for (std::size_t i = 0; i < set.trials.size(); ++i) {
    const auto& trial = set.trials[i];
    const std::string where = "trial " + std::to_string(i);
    if (trial.channels() != n) {
      throw ValidationError(where + ": has " + std::to_string(trial.channels()) + " channels, expected " +
                            std::to_string(n));
    }
    if (trial.length() != t) {
      throw ValidationError(where + ": has " + std::to_string(trial.length()) + " samples, expected " +
                            std::to_string(t));
    }
    if (trial.length() < 2) {
      throw ValidationError(where + ": needs at least 2 samples");
    }
    if (trial.label >= set.class_count) {
      throw ValidationError(where + ": label " + std::to_string(trial.label) + " outside [0, " +
                            std::to_string(set.class_count) + ")");
    }
    if (!trial.samples.allFinite()) {
      throw ValidationError(where + ": contains non-finite samples");
    }
  }
}

std::vector<std::string> default_channel_names(Eigen::Index n) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) names.push_back("ch" + std::to_string(i));
  return names;
}

bool operator==(const Trial& a, const Trial& b) {
  return a.label == b.label && a.samples.rows() == b.samples.rows() && a.samples.cols() == b.samples.cols() &&
         a.samples == b.samples;
}

bool operator==(const TrialSet& a, const TrialSet& b) {
  return a.sampling_rate == b.sampling_rate && a.class_count == b.class_count &&
         a.channel_names == b.channel_names && a.trials == b.trials;
}

}  // namespace tfcsp
