#pragma once

#include "tfcsp/jad.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace tfcsp {

// Real symmetric N x N matrix (covariances and their whitened images).
using SymMatrix = Eigen::MatrixXd;

inline constexpr int kDefaultCspFeatures = 8;
inline constexpr double kCompositeRidge = 1e-9;       // times trace/N
inline constexpr double kMinWhitenedEigenvalue = 1e-10;

bool is_symmetric(const SymMatrix& m, double tol = 1e-10);

// Trace-normalized spatial covariance X X^T / trace(X X^T) of a channels x
// samples trial. Throws DegenerateTrialError for an all-zero trial and
// RangeError for fewer than 2 samples.
SymMatrix trial_covariance(const Eigen::MatrixXd& x);

// Elementwise mean. Throws ArgumentError on empty input, DimensionError on mismatch.
SymMatrix mean_covariance(std::span<const SymMatrix> covs);

struct Whitening {
  Eigen::MatrixXd transform;    // P, with P C P^T = I
  SymMatrix composite;          // C actually whitened (ridge included)
  Eigen::VectorXd eigenvalues;  // of `composite`, ascending
};

// Ridge added to the composite diagonal: kCompositeRidge * trace / N.
double composite_ridge(const SymMatrix& c);

// Eigendecomposes C + ridge*I = V diag(lambda) V^T and returns
// P = diag(lambda)^(-1/2) V^T. Throws ConditioningError if the smallest
// eigenvalue is still <= kMinWhitenedEigenvalue.
Whitening whitening_from_composite(const SymMatrix& c);

struct CspModel {
  Eigen::MatrixXd whitening;   // P
  Eigen::MatrixXd rotation;    // U (orthogonal)
  Eigen::MatrixXd projection;  // Q = U^T P; row j is spatial filter j
  Eigen::MatrixXd class_eigen; // M x N: diag(U^T P C_c P^T U) per class
  std::vector<int> selected_rows;
  int class_count{2};
  SymMatrix composite;                  // whitened composite (ridge included)
  std::vector<SymMatrix> class_covariances;  // conditioned class means, sum == composite
  bool jad_converged{true};

  Eigen::Index channels() const { return projection.cols(); }
  Eigen::Index feature_count() const { return static_cast<Eigen::Index>(selected_rows.size()); }
  // Rows of Q listed in selected_rows.
  Eigen::MatrixXd selected_filters() const;
};

// Per-filter class-eigenvalue dispersion sum_c (lambda_c,j - 1/M)^2.
Eigen::VectorXd dispersion_scores(const Eigen::MatrixXd& class_eigen);

// The n highest-scoring filter indices; scores equal to within 1e-12 tie and
// the lower index wins.
std::vector<int> select_by_score(const Eigen::VectorXd& scores, int n);

// Two-class CSP. Filters are ordered by descending left-class eigenvalue and
// class_eigen rows are (lambda_L, lambda_R = 1 - lambda_L up to rounding).
CspModel csp_two_class(const SymMatrix& left, const SymMatrix& right, int n_features = kDefaultCspFeatures);

// Multiclass CSP: whiten the summed class covariances, jointly diagonalize the
// whitened class covariances, select filters by dispersion_scores.
// Throws ArgumentError if fewer than 2 classes or n_features is not in [1, N].
CspModel multiclass_csp(std::span<const SymMatrix> class_covs, int n_features = kDefaultCspFeatures,
                        const JadOptions& jad_opts = {});

// log(var(z_j) / sum_k var(z_k)) over the selected filters z = Q x, using the
// unbiased sample variance along time. Throws DimensionError on a channel
// mismatch and DegenerateTrialError when any projected variance is zero.
Eigen::VectorXd extract_features(const CspModel& model, const Eigen::MatrixXd& x);

}  // namespace tfcsp
