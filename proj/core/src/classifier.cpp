#include "tfcsp/classifier.hpp"

namespace tfcsp {

std::string_view to_string(ClassifierKind k) {
  switch (k) {
    case ClassifierKind::Lda: return "lda";
    case ClassifierKind::NaiveBayes: return "nvb";
    case ClassifierKind::Svm: return "svm";
  }
  return "?";
}

std::optional<ClassifierKind> parse_classifier(std::string_view s) {
  if (s == "lda") return ClassifierKind::Lda;
  if (s == "nvb" || s == "nb" || s == "gnb") return ClassifierKind::NaiveBayes;
  if (s == "svm") return ClassifierKind::Svm;
  return std::nullopt;
}

int Classifier::class_count() const {
  return std::visit([](const auto& m) -> int {
    if constexpr (std::is_same_v<std::decay_t<decltype(m)>, SvmModel>) return m.class_count;
    else return m.class_count();
  }, model);
}

Eigen::Index Classifier::dims() const {
  return std::visit([](const auto& m) -> Eigen::Index {
    if constexpr (std::is_same_v<std::decay_t<decltype(m)>, SvmModel>) return m.dims;
    else return m.dims();
  }, model);
}

Classifier train_classifier(ClassifierKind kind, const Eigen::MatrixXd& features, std::span<const int> labels,
                            int class_count, const ClassifierOptions& opts) {
  switch (kind) {
    case ClassifierKind::Lda:
      return {kind, lda_train(features, labels, class_count, opts.lda_ridge)};
    case ClassifierKind::NaiveBayes:
      return {kind, gnb_train(features, labels, class_count, opts.gnb_variance_floor)};
    case ClassifierKind::Svm:
      return {kind, svm_train(features, labels, class_count, opts.svm)};
  }
  return {};
}

int predict(const Classifier& clf, const Eigen::VectorXd& x) {
  switch (clf.kind) {
    case ClassifierKind::Lda: return lda_predict(std::get<LdaModel>(clf.model), x);
    case ClassifierKind::NaiveBayes: return gnb_predict(std::get<GnbModel>(clf.model), x);
    case ClassifierKind::Svm: return svm_predict(std::get<SvmModel>(clf.model), x);
  }
  return 0;
}

}  // namespace tfcsp
