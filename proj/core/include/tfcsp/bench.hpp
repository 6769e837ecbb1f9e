#pragma once

#include "tfcsp/pipeline.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tfcsp {

struct BenchOptions {
  int repeats{5};
  PipelineConfig base;  // method is overridden per run
};

struct MethodTiming {
  std::string name;
  double seconds_median{0};
  std::vector<double> seconds_all;
  int csp_invocations{0};
  double kappa{0};
  std::optional<std::string> error;  // set when the method failed; timings empty
};

struct BenchReport {
  std::vector<MethodTiming> methods;
  std::optional<double> tfcsp_over_fbcsp;
  std::optional<double> tfcsp_over_tdcsp;
  int threads{1};
  int repeats{0};

  const MethodTiming* find(std::string_view name) const;
};

// Times train + evaluate for each method on identical data, single threaded.
// One untimed warm-up run per method precedes `repeats` timed runs; the
// median is reported. A failing method is recorded and the others still run.
BenchReport run_benchmark(const TrialSet& train, const TrialSet& test, const std::vector<Method>& methods,
                          const BenchOptions& opts = {});

double median(std::vector<double> values);

}  // namespace tfcsp
