#pragma once

#include "tfcsp/bench.hpp"
#include "tfcsp/evaluation.hpp"
#include "tfcsp/pipeline.hpp"

#include <string>

namespace tfcsp {

// {method, classifier, confusion, accuracy, kappa, per_class_recall}
std::string eval_report_json(const EvalReport& r, int indent = 2);

// {methods: [{name, seconds_median, seconds_all}], ratios: {tfcsp_over_fbcsp,
// tfcsp_over_tdcsp}, threads, repeats}. Failed methods carry an "error" field.
std::string bench_report_json(const BenchReport& r, int indent = 2);

// Selected band, feature count, CSP invocations and per-stage durations.
std::string training_summary_json(const TrainedPipeline& p, int indent = 2);

}  // namespace tfcsp
