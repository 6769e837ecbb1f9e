#include "tfcsp/pipeline.hpp"

#include "tfcsp/errors.hpp"
#include "tfcsp/mutual_info.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <thread>

namespace tfcsp {
namespace {

using Clock = std::chrono::steady_clock;

// Runs `fn`, records its wall time under `stage` and rewraps library errors
// so the message names the stage.
template <typename Fn>
auto run_stage(TrainingSummary& summary, const char* stage, Fn&& fn) {
  const auto t0 = Clock::now();
  auto record = [&] {
    summary.stages.push_back({stage, std::chrono::duration<double>(Clock::now() - t0).count()});
  };
  try {
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      record();
    } else {
      auto out = fn();
      record();
      return out;
    }
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(stage, e.what());
  }
}

std::vector<int> labels_of(const TrialSet& set) {
  std::vector<int> y;
  y.reserve(set.size());
  for (const auto& t : set.trials) y.push_back(t.label);
  return y;
}

void check_trainable(const TrialSet& set) {
  validate(set);
  if (set.empty()) throw TrainingError("training set is empty");
  const auto counts = set.class_counts();
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) throw TrainingError("class " + std::to_string(c) + " has no training trials");
  }
}

Eigen::MatrixXd epoch_samples(const Eigen::MatrixXd& x, double fs, const EpochWindow& w) {
  const auto want = static_cast<Eigen::Index>(std::lround(w.duration_s() * fs));
  if (x.cols() < want) {
    throw RangeError("trial of " + std::to_string(x.cols()) + " samples is shorter than the " +
                     std::to_string(w.duration_s()) + " s epoch (" + std::to_string(want) + " samples)");
  }
  if (x.cols() == want) return x;
  const auto start = static_cast<Eigen::Index>(std::lround((w.cue_s - w.pre_s) * fs));
  if (start < 0 || start + want > x.cols()) {
    throw RangeError("epoch window around cue at " + std::to_string(w.cue_s) + " s does not fit in trial of " +
                     std::to_string(static_cast<double>(x.cols()) / fs) + " s");
  }
  return x.middleCols(start, want);
}

// Class-mean trace-normalized covariances of already-preprocessed epochs.
std::vector<SymMatrix> class_mean_covariances(const std::vector<Eigen::MatrixXd>& epochs, const std::vector<int>& y,
                                              int class_count) {
  std::vector<std::vector<SymMatrix>> per_class(static_cast<std::size_t>(class_count));
  for (std::size_t i = 0; i < epochs.size(); ++i) {
    per_class[static_cast<std::size_t>(y[i])].push_back(trial_covariance(epochs[i]));
  }
  std::vector<SymMatrix> means;
  means.reserve(per_class.size());
  for (const auto& covs : per_class) means.push_back(mean_covariance(covs));
  return means;
}

Eigen::MatrixXd feature_matrix(const CspModel& model, const std::vector<Eigen::MatrixXd>& epochs) {
  Eigen::MatrixXd f(static_cast<Eigen::Index>(epochs.size()), model.feature_count());
  for (std::size_t i = 0; i < epochs.size(); ++i) {
    f.row(static_cast<Eigen::Index>(i)) = extract_features(model, epochs[i]).transpose();
  }
  return f;
}

TrainedPipeline skeleton(const TrialSet& set, const PipelineConfig& cfg, Method method) {
  TrainedPipeline p;
  p.method = method;
  p.config = cfg;
  p.config.method = method;
  p.sampling_rate = set.sampling_rate;
  p.channels = static_cast<int>(set.channels());
  p.class_count = set.class_count;
  return p;
}

Eigen::MatrixXd tfcsp_epoch(const TrainedPipeline& p, const Eigen::MatrixXd& filtered, double time_start) {
  Trial t;
  t.samples = filtered;
  return crop_to_selection(t, p.selection_filter, time_start, p.config.grid, p.sampling_rate).samples;
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Tfcsp: return "tfcsp";
    case Method::Tdcsp: return "tdcsp";
    case Method::Fbcsp: return "fbcsp";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view s) {
  if (s == "tfcsp") return Method::Tfcsp;
  if (s == "tdcsp") return Method::Tdcsp;
  if (s == "fbcsp") return Method::Fbcsp;
  return std::nullopt;
}

std::vector<FrequencyBand> default_filter_bank() {
  std::vector<FrequencyBand> bank;
  for (int lo = 4; lo < 40; lo += 4) bank.push_back({static_cast<double>(lo), static_cast<double>(lo + 4)});
  return bank;
}

int TrainedPipeline::feature_count() const {
  if (method == Method::Fbcsp) return static_cast<int>(fbcsp_selected.size());
  return csp.empty() ? 0 : static_cast<int>(csp.front().feature_count());
}

void TrainedPipeline::prepare_filters() {
  const auto& c = config;
  if (method == Method::Fbcsp) {
    bank_filters.clear();
    for (const auto& b : c.filter_bank) {
      bank_filters.push_back(design_butterworth_bandpass(c.filter_order, b.low_hz, b.high_hz, sampling_rate));
    }
    return;
  }
  prefilter = design_butterworth_bandpass(c.filter_order, c.band_low_hz, c.band_high_hz, sampling_rate);
  if (method == Method::Tfcsp) {
    selection_filter = selection_band_filter(subject_freq_start, c.grid, sampling_rate, c.filter_order);
  }
}

TrialSet epoch_extract(const TrialSet& set, const EpochWindow& window) {
  TrialSet out;
  out.sampling_rate = set.sampling_rate;
  out.channel_names = set.channel_names;
  out.class_count = set.class_count;
  out.trials.reserve(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    Trial t;
    t.label = set.trials[i].label;
    try {
      t.samples = epoch_samples(set.trials[i].samples, set.sampling_rate, window);
    } catch (const RangeError& e) {
      throw RangeError("trial " + std::to_string(i) + ": " + e.what());
    }
    out.trials.push_back(std::move(t));
  }
  return out;
}

TrainedPipeline train_tfcsp(const TrialSet& train, const PipelineConfig& cfg) {
  check_trainable(train);
  TrainedPipeline p = skeleton(train, cfg, Method::Tfcsp);
  auto& sum = p.summary;
  const double fs = train.sampling_rate;
  const std::vector<int> y = labels_of(train);

  const TrialSet set = run_stage(sum, "epoch", [&] { return epoch_extract(train, cfg.epoch); });
  run_stage(sum, "bandpass-design", [&] {
    p.prefilter = design_butterworth_bandpass(cfg.filter_order, cfg.band_low_hz, cfg.band_high_hz, fs);
  });
  const auto filtered = run_stage(sum, "bandpass", [&] {
    std::vector<Eigen::MatrixXd> out;
    out.reserve(set.size());
    for (const auto& t : set.trials) out.push_back(filter_rows(p.prefilter, t.samples));
    return out;
  });
  const auto energy = run_stage(sum, "time-frequency", [&] {
    std::vector<BandEnergyMatrix> out;
    out.reserve(filtered.size());
    for (const auto& x : filtered) out.push_back(epoch_energy_matrix(x, fs, cfg.grid, cfg.stft, cfg.selection_channels));
    return out;
  });
  run_stage(sum, "band-selection", [&] {
    sum.trial_selections.clear();
    for (const auto& m : energy) sum.trial_selections.push_back(select_optimal_element(m));
    p.subject_freq_start = subject_frequency_band(sum.trial_selections, cfg.grid);
    p.selection_filter = selection_band_filter(p.subject_freq_start, cfg.grid, fs, cfg.filter_order);
  });
  const int row = freq_index_of(cfg.grid, p.subject_freq_start);
  const auto cropped = run_stage(sum, "crop", [&] {
    std::vector<Eigen::MatrixXd> out;
    out.reserve(filtered.size());
    sum.trial_time_starts.clear();
    for (std::size_t i = 0; i < filtered.size(); ++i) {
      const double t0 = select_time_in_row(energy[i], row).time_start;
      sum.trial_time_starts.push_back(t0);
      out.push_back(tfcsp_epoch(p, filtered[i], t0));
    }
    return out;
  });
  const auto means = run_stage(sum, "covariance", [&] { return class_mean_covariances(cropped, y, p.class_count); });
  p.csp.push_back(run_stage(sum, "csp", [&] { return multiclass_csp(means, cfg.n_features); }));
  ++sum.csp_invocations;
  const auto features = run_stage(sum, "features", [&] { return feature_matrix(p.csp.front(), cropped); });
  p.classifier = run_stage(sum, "classifier", [&] {
    return train_classifier(cfg.classifier, features, y, p.class_count, cfg.classifier_options);
  });
  return p;
}

TrainedPipeline train_tdcsp(const TrialSet& train, const PipelineConfig& cfg) {
  check_trainable(train);
  TrainedPipeline p = skeleton(train, cfg, Method::Tdcsp);
  auto& sum = p.summary;
  const std::vector<int> y = labels_of(train);

  const TrialSet set = run_stage(sum, "epoch", [&] { return epoch_extract(train, cfg.epoch); });
  run_stage(sum, "bandpass-design", [&] { p.prepare_filters(); });
  const auto filtered = run_stage(sum, "bandpass", [&] {
    std::vector<Eigen::MatrixXd> out;
    out.reserve(set.size());
    for (const auto& t : set.trials) out.push_back(filter_rows(p.prefilter, t.samples));
    return out;
  });
  const auto means = run_stage(sum, "covariance", [&] { return class_mean_covariances(filtered, y, p.class_count); });
  p.csp.push_back(run_stage(sum, "csp", [&] { return multiclass_csp(means, cfg.n_features); }));
  ++sum.csp_invocations;
  const auto features = run_stage(sum, "features", [&] { return feature_matrix(p.csp.front(), filtered); });
  p.classifier = run_stage(sum, "classifier", [&] {
    return train_classifier(cfg.classifier, features, y, p.class_count, cfg.classifier_options);
  });
  return p;
}

TrainedPipeline train_fbcsp(const TrialSet& train, const PipelineConfig& cfg) {
  check_trainable(train);
  if (cfg.filter_bank.empty()) throw ArgumentError("fbcsp: empty filter bank");
  TrainedPipeline p = skeleton(train, cfg, Method::Fbcsp);
  auto& sum = p.summary;
  const std::vector<int> y = labels_of(train);

  const TrialSet set = run_stage(sum, "epoch", [&] { return epoch_extract(train, cfg.epoch); });
  run_stage(sum, "bandpass-design", [&] { p.prepare_filters(); });

  std::vector<Eigen::MatrixXd> band_features;
  for (const auto& bank_filter : p.bank_filters) {
    const auto filtered = run_stage(sum, "bandpass", [&] {
      std::vector<Eigen::MatrixXd> out;
      out.reserve(set.size());
      for (const auto& t : set.trials) out.push_back(filter_rows(bank_filter, t.samples));
      return out;
    });
    const auto means = run_stage(sum, "covariance", [&] { return class_mean_covariances(filtered, y, p.class_count); });
    p.csp.push_back(run_stage(sum, "csp", [&] { return multiclass_csp(means, cfg.n_features); }));
    ++sum.csp_invocations;
    band_features.push_back(run_stage(sum, "features", [&] { return feature_matrix(p.csp.back(), filtered); }));
  }

  Eigen::MatrixXd all(static_cast<Eigen::Index>(set.size()), 0);
  for (const auto& f : band_features) {
    Eigen::MatrixXd grown(all.rows(), all.cols() + f.cols());
    grown << all, f;
    all = std::move(grown);
  }
  p.fbcsp_selected = run_stage(sum, "feature-selection", [&] {
    if (cfg.fbcsp_selected_features < 1 || cfg.fbcsp_selected_features > all.cols()) {
      throw ArgumentError("fbcsp: selected feature count outside [1, " + std::to_string(all.cols()) + "]");
    }
    const Eigen::VectorXd mi = mutual_information_scores(all, y, p.class_count, cfg.mi_bins);
    return select_by_score(mi, cfg.fbcsp_selected_features);
  });
  const Eigen::MatrixXd chosen = all(Eigen::all, p.fbcsp_selected);
  p.classifier = run_stage(sum, "classifier", [&] {
    return train_classifier(cfg.classifier, chosen, y, p.class_count, cfg.classifier_options);
  });
  return p;
}

TrainedPipeline train_pipeline(const TrialSet& train, const PipelineConfig& cfg) {
  switch (cfg.method) {
    case Method::Tfcsp: return train_tfcsp(train, cfg);
    case Method::Tdcsp: return train_tdcsp(train, cfg);
    case Method::Fbcsp: return train_fbcsp(train, cfg);
  }
  throw ArgumentError("unknown method");
}

Eigen::VectorXd pipeline_features(const TrainedPipeline& p, const Trial& trial) {
  if (trial.channels() != p.channels) {
    throw DimensionError("trial has " + std::to_string(trial.channels()) + " channels, model expects " +
                         std::to_string(p.channels));
  }
  if (p.csp.empty()) throw ArgumentError("pipeline is not trained");
  const Eigen::MatrixXd x = epoch_samples(trial.samples, p.sampling_rate, p.config.epoch);
  switch (p.method) {
    case Method::Tfcsp: {
      const Eigen::MatrixXd filtered = filter_rows(p.prefilter, x);
      const auto energy =
          epoch_energy_matrix(filtered, p.sampling_rate, p.config.grid, p.config.stft, p.config.selection_channels);
      const int row = freq_index_of(p.config.grid, p.subject_freq_start);
      const double t0 = select_time_in_row(energy, row).time_start;
      return extract_features(p.csp.front(), tfcsp_epoch(p, filtered, t0));
    }
    case Method::Tdcsp:
      return extract_features(p.csp.front(), filter_rows(p.prefilter, x));
    case Method::Fbcsp: {
      Eigen::VectorXd all(static_cast<Eigen::Index>(p.csp.size()) * p.csp.front().feature_count());
      Eigen::Index at = 0;
      for (std::size_t b = 0; b < p.csp.size(); ++b) {
        const Eigen::VectorXd f = extract_features(p.csp[b], filter_rows(p.bank_filters[b], x));
        all.segment(at, f.size()) = f;
        at += f.size();
      }
      return all(p.fbcsp_selected);
    }
  }
  throw ArgumentError("unknown method");
}

int predict(const TrainedPipeline& p, const Trial& trial) { return predict(p.classifier, pipeline_features(p, trial)); }

EvalReport evaluate(const TrainedPipeline& p, const TrialSet& test, int threads) {
  if (test.empty()) throw ArgumentError("evaluate: empty test set");
  if (test.channels() != p.channels) {
    throw DimensionError("test set has " + std::to_string(test.channels()) + " channels, model expects " +
                         std::to_string(p.channels));
  }
  if (test.class_count != p.class_count) {
    throw DimensionError("test set has " + std::to_string(test.class_count) + " classes, model expects " +
                         std::to_string(p.class_count));
  }
  const std::size_t n = test.size();
  const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1, n);

  std::vector<ConfusionMatrix> partial(workers, ConfusionMatrix::Zero(p.class_count, p.class_count));
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](std::size_t w) {
    try {
      for (std::size_t i = w; i < n; i += workers) {
        const auto& t = test.trials[i];
        ++partial[w](t.label, predict(p, t));
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  ConfusionMatrix total = ConfusionMatrix::Zero(p.class_count, p.class_count);
  for (const auto& c : partial) total += c;
  return make_report(total, std::string(to_string(p.method)), std::string(to_string(p.classifier.kind)));
}

}  // namespace tfcsp
