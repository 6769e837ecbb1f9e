#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace tfcsp::detail {

// Validates shapes/labels and returns per-class sample counts; throws
// TrainingError when a class has no samples.
std::vector<int> check_training_set(const Eigen::MatrixXd& features, std::span<const int> labels, int class_count,
                                    const char* who);

// Index of the largest score; the lower index wins ties.
int argmax_lowest(const Eigen::VectorXd& scores);

}  // namespace tfcsp::detail
