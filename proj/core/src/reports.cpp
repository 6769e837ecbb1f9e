#include "tfcsp/reports.hpp"

#include <json.hpp>

namespace tfcsp {

using nlohmann::json;

std::string eval_report_json(const EvalReport& r, int indent) {
  json confusion = json::array();
  for (Eigen::Index i = 0; i < r.confusion.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < r.confusion.cols(); ++j) row.push_back(r.confusion(i, j));
    confusion.push_back(row);
  }
  const json doc{{"method", r.method},     {"classifier", r.classifier},
                 {"confusion", confusion}, {"accuracy", r.accuracy},
                 {"kappa", r.kappa},       {"per_class_recall", r.per_class_recall}};
  return doc.dump(indent);
}

std::string bench_report_json(const BenchReport& r, int indent) {
  json methods = json::array();
  for (const auto& m : r.methods) {
    json j{{"name", m.name},
           {"seconds_median", m.seconds_median},
           {"seconds_all", m.seconds_all},
           {"csp_invocations", m.csp_invocations},
           {"kappa", m.kappa}};
    if (m.error) j["error"] = *m.error;
    methods.push_back(j);
  }
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  const json doc{{"methods", methods},
                 {"ratios", {{"tfcsp_over_fbcsp", opt(r.tfcsp_over_fbcsp)}, {"tfcsp_over_tdcsp", opt(r.tfcsp_over_tdcsp)}}},
                 {"threads", r.threads},
                 {"repeats", r.repeats}};
  return doc.dump(indent);
}

std::string training_summary_json(const TrainedPipeline& p, int indent) {
  json stages = json::array();
  for (const auto& s : p.summary.stages) stages.push_back({{"stage", s.stage}, {"seconds", s.seconds}});
  json doc{{"method", std::string(to_string(p.method))},
           {"classifier", std::string(to_string(p.classifier.kind))},
           {"class_count", p.class_count},
           {"channels", p.channels},
           {"feature_count", p.feature_count()},
           {"csp_invocations", p.summary.csp_invocations},
           {"stages", stages}};
  if (p.method == Method::Tfcsp) {
    doc["subject_freq_start"] = p.subject_freq_start;
    doc["selected_band_hz"] = {std::max(p.subject_freq_start, kMinBandEdgeHz),
                               p.subject_freq_start + p.config.grid.freq_band_width};
  } else if (p.method == Method::Tdcsp) {
    doc["selected_band_hz"] = {p.config.band_low_hz, p.config.band_high_hz};
  } else {
    json bands = json::array();
    for (const auto& b : p.config.filter_bank) bands.push_back({b.low_hz, b.high_hz});
    doc["bands"] = bands;
    doc["selected_features"] = p.fbcsp_selected;
  }
  return doc.dump(indent);
}

}  // namespace tfcsp
