#pragma once

#include "tfcsp/classifier.hpp"
#include "tfcsp/csp.hpp"
#include "tfcsp/evaluation.hpp"
#include "tfcsp/iir.hpp"
#include "tfcsp/tfa.hpp"
#include "tfcsp/trialset.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tfcsp {

// TFCSP: per-trial time-frequency band selection before CSP.
// TDCSP: single 8-30 Hz band over the whole epoch.
// FBCSP: CSP per filter-bank band plus mutual-information feature selection.
enum class Method { Tfcsp, Tdcsp, Fbcsp };

std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view s);

// Epoch around the imagery cue: [cue - pre, cue + imagery + post].
struct EpochWindow {
  double pre_s{0.5};
  double imagery_s{3.0};
  double post_s{0.5};
  double cue_s{0.5};  // cue position inside each stored trial

  double duration_s() const { return pre_s + imagery_s + post_s; }
};

struct FrequencyBand {
  double low_hz{0};
  double high_hz{0};
};

// Nine 4 Hz bands from 4 to 40 Hz.
std::vector<FrequencyBand> default_filter_bank();

struct PipelineConfig {
  Method method{Method::Tfcsp};
  ClassifierKind classifier{ClassifierKind::Lda};
  ClassifierOptions classifier_options;
  EpochWindow epoch;
  int filter_order{8};
  double band_low_hz{8.0};
  double band_high_hz{30.0};
  BandGrid grid;
  StftParams stft;
  std::vector<int> selection_channels;  // empty: average over all channels
  int n_features{kDefaultCspFeatures};
  std::vector<FrequencyBand> filter_bank{default_filter_bank()};
  int fbcsp_selected_features{8};
  int mi_bins{10};
};

struct StageTiming {
  std::string stage;
  double seconds{0};
};

struct TrainingSummary {
  int csp_invocations{0};
  std::vector<StageTiming> stages;
  std::vector<BandSelection> trial_selections;  // TFCSP: per training trial, global argmax
  std::vector<double> trial_time_starts;        // TFCSP: per training trial, in the frozen band
};

struct TrainedPipeline {
  Method method{Method::Tfcsp};
  PipelineConfig config;
  double sampling_rate{250.0};
  int channels{0};
  int class_count{2};
  double subject_freq_start{0};        // TFCSP only
  std::vector<CspModel> csp;           // 1 for TFCSP/TDCSP, one per bank band for FBCSP
  std::vector<int> fbcsp_selected;     // indices into the concatenated bank features
  Classifier classifier;
  TrainingSummary summary;

  // Designed filters, derived from config; rebuilt by prepare_filters().
  IirFilter prefilter;
  IirFilter selection_filter;          // TFCSP: band around subject_freq_start
  std::vector<IirFilter> bank_filters; // FBCSP

  int feature_count() const;
  void prepare_filters();
};

// Validates (and, when longer, crops) trials to the epoch window. Trials
// exactly one window long are returned unchanged. Throws RangeError when a
// trial is too short or the window does not fit around the cue.
TrialSet epoch_extract(const TrialSet& set, const EpochWindow& window = {});

TrainedPipeline train_tfcsp(const TrialSet& train, const PipelineConfig& cfg);
TrainedPipeline train_tdcsp(const TrialSet& train, const PipelineConfig& cfg);
TrainedPipeline train_fbcsp(const TrialSet& train, const PipelineConfig& cfg);
// Dispatches on cfg.method.
TrainedPipeline train_pipeline(const TrialSet& train, const PipelineConfig& cfg);

// Feature vector the classifier sees for one epoch.
Eigen::VectorXd pipeline_features(const TrainedPipeline& p, const Trial& trial);

// Throws DimensionError on a channel mismatch; stage errors propagate.
int predict(const TrainedPipeline& p, const Trial& trial);

// Confusion over all test trials. `threads` > 1 splits trials across worker
// threads; the result does not depend on the thread count.
EvalReport evaluate(const TrainedPipeline& p, const TrialSet& test, int threads = 1);

}  // namespace tfcsp
