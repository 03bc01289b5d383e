#pragma once

#include "corpus.hpp"
#include "embed.hpp"

namespace sfc {

/// Principal directions of a centered sample matrix.
struct PcaModel {
  Vector mean;                  // D
  Matrix components;            // d x D, orthonormal rows
  Vector explained_variance;    // d, descending
  bool rank_deficient = false;  // centered rank < d; trailing rows carry no variance

  std::size_t input_dim() const { return static_cast<std::size_t>(mean.size()); }
  std::size_t output_dim() const {
    return static_cast<std::size_t>(components.rows());
  }
};

// Singular values below this fraction of the largest count as zero.
inline constexpr double kPcaRankTolerance = 1e-7;

/// Requires N >= 2 and 1 <= d <= min(D, N - 1). Components are the top-d
/// right singular vectors of the centered data; each is signed so that its
/// largest-magnitude entry (lowest index on ties) is positive.
PcaModel fit_pca(const Matrix& x, std::size_t d);

/// (x - mean) * components^T
Matrix transform_pca(const PcaModel& model, const Matrix& x);
Vector transform_pca(const PcaModel& model, const Vector& x);

/// reduced * components + mean
Matrix inverse_transform_pca(const PcaModel& model, const Matrix& reduced);

OrderedJson pca_to_json(const PcaModel& model);
PcaModel pca_from_json(const Json& j);

// Shared helpers for (de)serializing dense matrices as arrays of rows.
OrderedJson matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const char* what);
OrderedJson vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j, const char* what);

// Flips v so its largest-magnitude entry (first on ties) is positive.
void canonicalize_sign(Eigen::Ref<Vector> v);

}  // namespace sfc
