#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace tfcsp {

inline constexpr int kMutualInfoBins = 10;

// Mutual information (nats) between one continuous feature and the class
// label, using equal-frequency binning of the feature: samples are ranked by
// value (stable on ties) and sample r of n lands in bin floor(r * bins / n).
double mutual_information(std::span<const double> feature, std::span<const int> labels, int class_count,
                          int bins = kMutualInfoBins);

// mutual_information for every column of an n x d feature matrix.
Eigen::VectorXd mutual_information_scores(const Eigen::MatrixXd& features, std::span<const int> labels,
                                          int class_count, int bins = kMutualInfoBins);

}  // namespace tfcsp
