#pragma once

#include "tfcsp/gnb.hpp"
#include "tfcsp/lda.hpp"
#include "tfcsp/svm.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>

namespace tfcsp {

enum class ClassifierKind { Lda, NaiveBayes, Svm };

std::string_view to_string(ClassifierKind k);
// Accepts "lda", "nvb" (also "nb", "gnb"), "svm".
std::optional<ClassifierKind> parse_classifier(std::string_view s);

struct ClassifierOptions {
  double lda_ridge{kLdaRidge};
  double gnb_variance_floor{kGnbVarianceFloor};
  SvmOptions svm;
};

struct Classifier {
  ClassifierKind kind{ClassifierKind::Lda};
  std::variant<LdaModel, GnbModel, SvmModel> model;

  int class_count() const;
  Eigen::Index dims() const;
};

Classifier train_classifier(ClassifierKind kind, const Eigen::MatrixXd& features, std::span<const int> labels,
                            int class_count, const ClassifierOptions& opts = {});
int predict(const Classifier& clf, const Eigen::VectorXd& x);

}  // namespace tfcsp
