#include "tfcsp/model_io.hpp"

#include "tfcsp/base64.hpp"
#include "tfcsp/errors.hpp"

#include <json.hpp>

#include <bit>
#include <fstream>
#include <sstream>

namespace tfcsp {
namespace {

using nlohmann::json;

constexpr const char* kFormatName = "tfcsp-model";

json encode(const Eigen::MatrixXd& m) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(static_cast<std::size_t>(m.size()) * 8);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const auto bits = std::bit_cast<std::uint64_t>(m(r, c));
      for (int b = 0; b < 8; ++b) bytes.push_back(static_cast<std::uint8_t>((bits >> (8 * b)) & 0xFF));
    }
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", base64_encode(bytes)}};
}

Eigen::MatrixXd decode(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  if (rows < 0 || cols < 0) throw FormatError("matrix with negative shape");
  const auto bytes = base64_decode(j.at("data").get<std::string>());
  if (bytes.size() != static_cast<std::size_t>(rows * cols) * 8) {
    throw FormatError("matrix payload is " + std::to_string(bytes.size()) + " bytes, expected " +
                      std::to_string(rows * cols * 8));
  }
  Eigen::MatrixXd m(rows, cols);
  std::size_t at = 0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      std::uint64_t bits = 0;
      for (int b = 0; b < 8; ++b) bits |= std::uint64_t(bytes[at++]) << (8 * b);
      m(r, c) = std::bit_cast<double>(bits);
    }
  }
  return m;
}

json encode_vec(const Eigen::VectorXd& v) { return encode(Eigen::MatrixXd(v)); }

Eigen::VectorXd decode_vec(const json& j) {
  Eigen::MatrixXd m = decode(j);
  if (m.cols() != 1 && m.size() != 0) throw FormatError("expected a column vector");
  return m.size() == 0 ? Eigen::VectorXd() : Eigen::VectorXd(m.col(0));
}

json encode_csp(const CspModel& m) {
  json covs = json::array();
  for (const auto& c : m.class_covariances) covs.push_back(encode(c));
  return {{"class_count", m.class_count},     {"selected_rows", m.selected_rows},
          {"whitening", encode(m.whitening)}, {"rotation", encode(m.rotation)},
          {"projection", encode(m.projection)}, {"class_eigen", encode(m.class_eigen)},
          {"composite", encode(m.composite)}, {"class_covariances", covs},
          {"jad_converged", m.jad_converged}};
}

CspModel decode_csp(const json& j) {
  CspModel m;
  m.class_count = j.at("class_count").get<int>();
  m.selected_rows = j.at("selected_rows").get<std::vector<int>>();
  m.whitening = decode(j.at("whitening"));
  m.rotation = decode(j.at("rotation"));
  m.projection = decode(j.at("projection"));
  m.class_eigen = decode(j.at("class_eigen"));
  m.composite = decode(j.at("composite"));
  for (const auto& c : j.at("class_covariances")) m.class_covariances.push_back(decode(c));
  m.jad_converged = j.at("jad_converged").get<bool>();
  for (int r : m.selected_rows) {
    if (r < 0 || r >= m.projection.rows()) throw FormatError("csp selected row out of range");
  }
  return m;
}

json encode_classifier(const Classifier& c) {
  json j{{"kind", std::string(to_string(c.kind))}};
  switch (c.kind) {
    case ClassifierKind::Lda: {
      const auto& m = std::get<LdaModel>(c.model);
      j["class_means"] = encode(m.class_means);
      j["shared_covariance_inverse"] = encode(m.shared_covariance_inverse);
      j["class_priors"] = encode_vec(m.class_priors);
      break;
    }
    case ClassifierKind::NaiveBayes: {
      const auto& m = std::get<GnbModel>(c.model);
      j["means"] = encode(m.means);
      j["variances"] = encode(m.variances);
      j["class_priors"] = encode_vec(m.class_priors);
      break;
    }
    case ClassifierKind::Svm: {
      const auto& m = std::get<SvmModel>(c.model);
      j["gamma"] = m.gamma;
      j["c"] = m.c;
      j["class_count"] = m.class_count;
      j["dims"] = m.dims;
      json machines = json::array();
      for (const auto& b : m.machines) {
        machines.push_back({{"class_pos", b.class_pos},
                            {"class_neg", b.class_neg},
                            {"support_vectors", encode(b.support_vectors)},
                            {"dual_coef", encode_vec(b.dual_coef)},
                            {"bias", b.bias},
                            {"converged", b.converged},
                            {"iterations", b.iterations}});
      }
      j["machines"] = machines;
      break;
    }
  }
  return j;
}

Classifier decode_classifier(const json& j) {
  const auto kind = parse_classifier(j.at("kind").get<std::string>());
  if (!kind) throw FormatError("unknown classifier kind");
  Classifier c;
  c.kind = *kind;
  switch (*kind) {
    case ClassifierKind::Lda: {
      LdaModel m;
      m.class_means = decode(j.at("class_means"));
      m.shared_covariance_inverse = decode(j.at("shared_covariance_inverse"));
      m.class_priors = decode_vec(j.at("class_priors"));
      c.model = std::move(m);
      break;
    }
    case ClassifierKind::NaiveBayes: {
      GnbModel m;
      m.means = decode(j.at("means"));
      m.variances = decode(j.at("variances"));
      m.class_priors = decode_vec(j.at("class_priors"));
      c.model = std::move(m);
      break;
    }
    case ClassifierKind::Svm: {
      SvmModel m;
      m.gamma = j.at("gamma").get<double>();
      m.c = j.at("c").get<double>();
      m.class_count = j.at("class_count").get<int>();
      m.dims = j.at("dims").get<Eigen::Index>();
      for (const auto& b : j.at("machines")) {
        BinarySvm s;
        s.class_pos = b.at("class_pos").get<int>();
        s.class_neg = b.at("class_neg").get<int>();
        s.support_vectors = decode(b.at("support_vectors"));
        s.dual_coef = decode_vec(b.at("dual_coef"));
        s.bias = b.at("bias").get<double>();
        s.converged = b.at("converged").get<bool>();
        s.iterations = b.at("iterations").get<int>();
        m.machines.push_back(std::move(s));
      }
      c.model = std::move(m);
      break;
    }
  }
  return c;
}

json encode_config(const PipelineConfig& c) {
  json bank = json::array();
  for (const auto& b : c.filter_bank) bank.push_back({b.low_hz, b.high_hz});
  const auto& g = c.grid;
  return {
      {"method", std::string(to_string(c.method))},
      {"classifier", std::string(to_string(c.classifier))},
      {"classifier_options",
       {{"lda_ridge", c.classifier_options.lda_ridge},
        {"gnb_variance_floor", c.classifier_options.gnb_variance_floor},
        {"svm_c", c.classifier_options.svm.c},
        {"svm_gamma", c.classifier_options.svm.gamma},
        {"svm_tolerance", c.classifier_options.svm.tolerance},
        {"svm_max_passes", c.classifier_options.svm.max_passes}}},
      {"epoch",
       {{"pre_s", c.epoch.pre_s}, {"imagery_s", c.epoch.imagery_s}, {"post_s", c.epoch.post_s}, {"cue_s", c.epoch.cue_s}}},
      {"filter", {{"order", c.filter_order}, {"low_hz", c.band_low_hz}, {"high_hz", c.band_high_hz}}},
      {"grid",
       {{"freq_band_width", g.freq_band_width},
        {"freq_start_step", g.freq_start_step},
        {"freq_start_min", g.freq_start_min},
        {"freq_start_max", g.freq_start_max},
        {"time_band_width", g.time_band_width},
        {"time_start_step", g.time_start_step},
        {"time_start_min", g.time_start_min},
        {"time_start_max", g.time_start_max}}},
      {"stft", {{"window_len", c.stft.window_len}, {"hop", c.stft.hop}}},
      {"selection_channels", c.selection_channels},
      {"n_features", c.n_features},
      {"filter_bank", bank},
      {"fbcsp_selected_features", c.fbcsp_selected_features},
      {"mi_bins", c.mi_bins},
  };
}

PipelineConfig decode_config(const json& j) {
  PipelineConfig c;
  const auto method = parse_method(j.at("method").get<std::string>());
  const auto clf = parse_classifier(j.at("classifier").get<std::string>());
  if (!method || !clf) throw FormatError("unknown method or classifier in config");
  c.method = *method;
  c.classifier = *clf;
  const auto& co = j.at("classifier_options");
  c.classifier_options.lda_ridge = co.at("lda_ridge").get<double>();
  c.classifier_options.gnb_variance_floor = co.at("gnb_variance_floor").get<double>();
  c.classifier_options.svm.c = co.at("svm_c").get<double>();
  c.classifier_options.svm.gamma = co.at("svm_gamma").get<double>();
  c.classifier_options.svm.tolerance = co.at("svm_tolerance").get<double>();
  c.classifier_options.svm.max_passes = co.at("svm_max_passes").get<int>();
  const auto& e = j.at("epoch");
  c.epoch = {e.at("pre_s").get<double>(), e.at("imagery_s").get<double>(), e.at("post_s").get<double>(),
             e.at("cue_s").get<double>()};
  const auto& f = j.at("filter");
  c.filter_order = f.at("order").get<int>();
  c.band_low_hz = f.at("low_hz").get<double>();
  c.band_high_hz = f.at("high_hz").get<double>();
  const auto& g = j.at("grid");
  c.grid.freq_band_width = g.at("freq_band_width").get<double>();
  c.grid.freq_start_step = g.at("freq_start_step").get<double>();
  c.grid.freq_start_min = g.at("freq_start_min").get<double>();
  c.grid.freq_start_max = g.at("freq_start_max").get<double>();
  c.grid.time_band_width = g.at("time_band_width").get<double>();
  c.grid.time_start_step = g.at("time_start_step").get<double>();
  c.grid.time_start_min = g.at("time_start_min").get<double>();
  c.grid.time_start_max = g.at("time_start_max").get<double>();
  c.stft.window_len = j.at("stft").at("window_len").get<int>();
  c.stft.hop = j.at("stft").at("hop").get<int>();
  c.selection_channels = j.at("selection_channels").get<std::vector<int>>();
  c.n_features = j.at("n_features").get<int>();
  c.filter_bank.clear();
  for (const auto& b : j.at("filter_bank")) c.filter_bank.push_back({b.at(0).get<double>(), b.at(1).get<double>()});
  c.fbcsp_selected_features = j.at("fbcsp_selected_features").get<int>();
  c.mi_bins = j.at("mi_bins").get<int>();
  return c;
}

}  // namespace

std::string pipeline_to_json(const TrainedPipeline& p) {
  json csp = json::array();
  for (const auto& m : p.csp) csp.push_back(encode_csp(m));
  json stages = json::array();
  for (const auto& s : p.summary.stages) stages.push_back({{"stage", s.stage}, {"seconds", s.seconds}});
  json doc{
      {"format", kFormatName},
      {"version", kModelFormatVersion},
      {"method", std::string(to_string(p.method))},
      {"sampling_rate", p.sampling_rate},
      {"channels", p.channels},
      {"class_count", p.class_count},
      {"subject_freq_start", p.subject_freq_start},
      {"config", encode_config(p.config)},
      {"csp", csp},
      {"fbcsp_selected", p.fbcsp_selected},
      {"classifier", encode_classifier(p.classifier)},
      {"summary", {{"csp_invocations", p.summary.csp_invocations}, {"stages", stages}}},
  };
  return doc.dump(1);
}

TrainedPipeline pipeline_from_json(const std::string& text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("format").get<std::string>() != kFormatName) throw FormatError("not a tfcsp model document");
    const int version = doc.at("version").get<int>();
    if (version != kModelFormatVersion) throw FormatError("unsupported model version " + std::to_string(version));
    TrainedPipeline p;
    const auto method = parse_method(doc.at("method").get<std::string>());
    if (!method) throw FormatError("unknown method");
    p.method = *method;
    p.sampling_rate = doc.at("sampling_rate").get<double>();
    p.channels = doc.at("channels").get<int>();
    p.class_count = doc.at("class_count").get<int>();
    p.subject_freq_start = doc.at("subject_freq_start").get<double>();
    p.config = decode_config(doc.at("config"));
    for (const auto& m : doc.at("csp")) p.csp.push_back(decode_csp(m));
    p.fbcsp_selected = doc.at("fbcsp_selected").get<std::vector<int>>();
    p.classifier = decode_classifier(doc.at("classifier"));
    const auto& s = doc.at("summary");
    p.summary.csp_invocations = s.at("csp_invocations").get<int>();
    for (const auto& st : s.at("stages")) {
      p.summary.stages.push_back({st.at("stage").get<std::string>(), st.at("seconds").get<double>()});
    }
    if (p.csp.empty()) throw FormatError("model has no CSP stage");
    for (const auto& m : p.csp) {
      if (m.channels() != p.channels) throw FormatError("CSP channel count disagrees with model");
    }
    if (p.classifier.dims() != p.feature_count()) {
      throw FormatError("classifier dimension disagrees with selected feature count");
    }
    p.prepare_filters();
    return p;
  } catch (const json::exception& e) {
    throw FormatError(std::string("model JSON: ") + e.what());
  } catch (const DesignError& e) {
    throw FormatError(std::string("model filter parameters: ") + e.what());
  }
}

void save_pipeline(const TrainedPipeline& p, const std::filesystem::path& path) {
  const std::string text = pipeline_to_json(p);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

TrainedPipeline load_pipeline(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return pipeline_from_json(ss.str());
}

}  // namespace tfcsp
