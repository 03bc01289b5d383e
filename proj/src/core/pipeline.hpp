#pragma once

#include <memory>
#include <string>
#include <vector>

#include "chain.hpp"
#include "corpus.hpp"
#include "embed.hpp"
#include "metrics.hpp"

namespace sfc {

inline constexpr const char* kEndpointEnv = "SFC_EMBED_ENDPOINT";

// SFC_EMBED_ENDPOINT when set and non-empty, else `configured`.
std::string resolve_endpoint(const std::string& configured);

/// Builds the encoder described by `spec`. Word-vector files are loaded here.
std::unique_ptr<Embedder> make_embedder(const EmbedderSpec& spec);

Matrix embed_records(const Embedder& embedder,
                     const std::vector<LabeledUtterance>& records);

struct TrainOptions {
  EmbedderSpec embedder;
  std::size_t pca_dim = 0;  // 0 selects min(50, D, N - 1)
  LdaConfig lda;
  Taxonomy taxonomy = Taxonomy::defaults();
  std::vector<Factor> order{kAllFactors.begin(), kAllFactors.end()};
};

/// A fitted chain together with the encoder it was trained with.
class Pipeline {
 public:
  static Pipeline train(const std::vector<LabeledUtterance>& records,
                        const TrainOptions& options);
  static Pipeline load(const std::string& model_path);
  explicit Pipeline(ChainModel model);

  const ChainModel& model() const { return model_; }

  LabelVector predict(const std::string& text) const;
  std::vector<LabelVector> predict(
      const std::vector<LabeledUtterance>& records) const;
  EvalReport evaluate(const std::vector<LabeledUtterance>& records) const;
  /// Projects records into the discriminant plane of `factor`'s head, using
  /// gold labels for the chain features exactly as during training.
  std::vector<ProjectionRow> project(const std::vector<LabeledUtterance>& records,
                                     Factor factor) const;

 private:
  const Embedder& embedder() const;

  ChainModel model_;
  mutable std::shared_ptr<Embedder> embedder_;
};

}  // namespace sfc
