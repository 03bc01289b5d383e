#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "embed.hpp"

namespace sfc {

/// Between-class and within-class scatter of a labeled sample.
///
///   between = sum_i (m_i - m)(m_i - m)^T          (unweighted by default)
///   within  = sum_i sum_{h in class i} (h - m_i)(h - m_i)^T
///
/// m_i are class means and m is the mean over all N samples. With
/// `weighted` the between term is multiplied by n_i per class.
struct ScatterPair {
  Matrix between;
  Matrix within;
  Matrix class_means;  // C x D, rows follow `classes`
  Vector global_mean;
  std::vector<std::size_t> class_counts;
  std::vector<std::string> classes;  // classes with at least one sample
};

struct LdaConfig {
  double shrinkage = 1e-4;  // gamma in within + gamma * (trace / D) * I
  double tolerance = 1e-7;
  std::optional<std::size_t> max_components;
  bool weighted_between = false;
};

struct LdaModel {
  Matrix directions;        // D x d', unit columns
  Vector eigenvalues;       // d', descending
  Matrix projected_means;   // C x d'
  std::vector<std::string> classes;
  Vector fisher_ratios;     // w^T between w / w^T within' w per column
  LdaConfig config;

  std::size_t input_dim() const {
    return static_cast<std::size_t>(directions.rows());
  }
  std::size_t components() const {
    return static_cast<std::size_t>(directions.cols());
  }
};

/// Classes listed in `classes` but absent from `labels` are dropped. Throws
/// ArgumentError for a label outside `classes` and DegenerateClassError when
/// fewer than two classes remain.
ScatterPair compute_scatter(const Matrix& x,
                            std::span<const std::string> labels,
                            std::span<const std::string> classes,
                            bool weighted = false);

/// Whitening solve of between * w = lambda * within' * w:
///   within' = U diag(mu) U^T,  P = U diag(mu^-1/2),
///   eig(P^T between P) = V diag(lambda),  W = P V.
/// Keeps the top min(C - 1, D, max_components) pairs. Throws
/// ConditioningError when within' is numerically singular.
LdaModel fit_lda(const Matrix& x, std::span<const std::string> labels,
                 std::span<const std::string> classes, const LdaConfig& config);
// Class order is order of first appearance.
LdaModel fit_lda(const Matrix& x, std::span<const std::string> labels,
                 const LdaConfig& config);

/// x * W. No centering: the stored projected means use the same map.
Matrix project(const LdaModel& model, const Matrix& x);

/// Nearest projected class mean; lowest class index wins ties.
std::size_t classify_index(const LdaModel& model, const Vector& x);
const std::string& classify(const LdaModel& model, const Vector& x);

OrderedJson lda_to_json(const LdaModel& model);
LdaModel lda_from_json(const Json& j);

}  // namespace sfc
