#include "tfcsp/bench.hpp"

#include "tfcsp/errors.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <chrono>

namespace tfcsp {

const MethodTiming* BenchReport::find(std::string_view name) const {
  for (const auto& m : methods) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

double median(std::vector<double> values) {
  if (values.empty()) throw ArgumentError("median of empty list");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

BenchReport run_benchmark(const TrialSet& train, const TrialSet& test, const std::vector<Method>& methods,
                          const BenchOptions& opts) {
  if (opts.repeats < 1) throw ArgumentError("benchmark repeats must be >= 1");
  Eigen::setNbThreads(1);

  BenchReport report;
  report.threads = 1;
  report.repeats = opts.repeats;
  for (Method m : methods) {
    MethodTiming timing;
    timing.name = std::string(to_string(m));
    PipelineConfig cfg = opts.base;
    cfg.method = m;
    try {
      auto once = [&] {
        const auto t0 = std::chrono::steady_clock::now();
        TrainedPipeline p = train_pipeline(train, cfg);
        EvalReport r = evaluate(p, test, 1);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        timing.csp_invocations = p.summary.csp_invocations;
        timing.kappa = r.kappa;
        return secs;
      };
      once();  // warm-up
      for (int r = 0; r < opts.repeats; ++r) timing.seconds_all.push_back(once());
      timing.seconds_median = median(timing.seconds_all);
    } catch (const std::exception& e) {
      timing.seconds_all.clear();
      timing.seconds_median = 0.0;
      timing.error = e.what();
    }
    report.methods.push_back(std::move(timing));
  }

  auto ok = [&](std::string_view name) -> const MethodTiming* {
    const MethodTiming* t = report.find(name);
    return t && !t->error && t->seconds_median > 0.0 ? t : nullptr;
  };
  const auto* tf = ok("tfcsp");
  if (tf && ok("fbcsp")) report.tfcsp_over_fbcsp = tf->seconds_median / ok("fbcsp")->seconds_median;
  if (tf && ok("tdcsp")) report.tfcsp_over_tdcsp = tf->seconds_median / ok("tdcsp")->seconds_median;
  return report;
}

}  // namespace tfcsp
