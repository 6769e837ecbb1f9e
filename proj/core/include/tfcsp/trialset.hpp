#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace tfcsp {

using ClassIndex = std::uint16_t;

// One labeled multichannel epoch. Rows are channels, columns are time steps,
// values in microvolts.
//
// Samples are held in double precision but the on-disk container stores
// float32, so only float-representable values survive a save/load round trip
// bit-exactly. The synthetic generator rounds its output accordingly.
struct Trial {
  ClassIndex label{0};
  Eigen::MatrixXd samples;

  Eigen::Index channels() const { return samples.rows(); }
  Eigen::Index length() const { return samples.cols(); }
};

struct TrialSet {
  double sampling_rate{250.0};
  std::vector<std::string> channel_names;
  std::vector<Trial> trials;
  int class_count{2};

  std::size_t size() const { return trials.size(); }
  bool empty() const { return trials.empty(); }

  // Channel count N; taken from channel_names, which must agree with every trial.
  Eigen::Index channels() const { return static_cast<Eigen::Index>(channel_names.size()); }
  // Sample count T shared by all trials (0 for an empty set).
  Eigen::Index samples_per_trial() const { return trials.empty() ? 0 : trials.front().length(); }
  double trial_duration_s() const { return static_cast<double>(samples_per_trial()) / sampling_rate; }

  // Number of trials carrying each label, indexed by class.
  std::vector<std::size_t> class_counts() const;
};

// Checks every TrialSet/Trial invariant and throws ValidationError naming the
// offending trial index on the first violation.
void validate(const TrialSet& set);

// Default channel labels "ch0", "ch1", ...
std::vector<std::string> default_channel_names(Eigen::Index n);

bool operator==(const Trial& a, const Trial& b);
bool operator==(const TrialSet& a, const TrialSet& b);

}  // namespace tfcsp
