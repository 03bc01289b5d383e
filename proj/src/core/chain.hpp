#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "embed.hpp"
#include "lda.hpp"
#include "pca.hpp"

namespace sfc {

inline constexpr std::string_view kModelFormat = "sfc-model/1";

/// How raw text becomes a vector; recorded in the model so prediction uses
/// the same encoder as training.
struct EmbedderSpec {
  std::string kind = "hash";  // hash | wordvec | remote
  std::size_t dim = 256;      // width of the embedding the encoder produces
  std::uint64_t seed = 1;     // hash embedder only
  std::string word_vectors;   // wordvec only
  std::string endpoint;       // remote only
  std::int64_t timeout_ms = 30000;
  std::size_t max_batch = 64;

  bool operator==(const EmbedderSpec&) const = default;
};

struct ChainConfig {
  std::vector<Factor> order{kAllFactors.begin(), kAllFactors.end()};
  std::size_t pca_dim = 32;
  LdaConfig lda;
  EmbedderSpec embedder;
};

struct ChainHead {
  Factor factor = Factor::duration;
  std::vector<std::string> classes;  // declared classes plus "absent", last
  std::size_t input_dim = 0;
  std::optional<LdaModel> lda;       // empty for a constant head
  std::string constant_class;        // used when lda is empty
};

class ChainModel {
 public:
  Taxonomy taxonomy = Taxonomy::defaults();
  ChainConfig config;
  PcaModel pca;
  std::vector<ChainHead> heads;  // chain order

  std::size_t input_dim() const { return pca.input_dim(); }

  /// PCA input width of head k: pca_dim + sum over earlier heads of their
  /// class count (absent included).
  std::size_t expected_head_dim(std::size_t k) const;

  /// Reduced features of one sample followed by the one-hot encodings of
  /// `prior` for every head before k.
  Vector head_features(std::size_t k, const Vector& reduced,
                       const LabelVector& prior) const;
  Matrix head_features(std::size_t k, const Matrix& reduced,
                       const std::vector<LabelVector>& prior) const;

  /// Index of a head by factor; throws ArgumentError when missing.
  std::size_t head_index(Factor f) const;
};

/// Fits PCA on x, then one LDA head per factor in chain order. Head k sees
/// the gold labels of heads before it. A factor whose training labels hold
/// fewer than two distinct classes becomes a constant head.
ChainModel fit_chain(const Matrix& x, const std::vector<LabelVector>& labels,
                     const Taxonomy& taxonomy, const ChainConfig& config);

/// Feeds each head the one-hot of the classes predicted by earlier heads.
LabelVector predict_chain(const ChainModel& model, const Vector& x);
std::vector<LabelVector> predict_chain(const ChainModel& model, const Matrix& x);

OrderedJson chain_to_json(const ChainModel& model);
// Validates the format tag and every head's input dimension.
ChainModel chain_from_json(const Json& j);

std::string serialize_chain(const ChainModel& model);
void save_chain(const std::string& path, const ChainModel& model);
ChainModel load_chain(const std::string& path);

}  // namespace sfc
