#pragma once

#include <Eigen/Dense>

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sfc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Pre-trained word vectors, one row per word in file order.
class WordVectorTable {
 public:
  explicit WordVectorTable(std::size_t dim);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }

  // Throws ValidationError when the word is already present or the values
  // do not form a finite vector of length dim().
  void add(std::string word, std::span<const double> values);
  // Empty span when the word is out of vocabulary.
  std::span<const double> find(std::string_view word) const;

  // Bitwise comparison of the stored components.
  bool operator==(const WordVectorTable& other) const;

 private:
  std::size_t dim_;
  std::vector<std::string> words_;
  std::vector<double> data_;
  std::unordered_map<std::string, std::size_t> index_;
};

enum class WordVectorFormat { text, binary };

/// Both formats start with the ASCII header "<count> <dim>\n". Text entries
/// are "<word> <f1> ... <fdim>\n"; binary entries are the word, one 0x20, then
/// dim little-endian float32 values and an optional 0x0A.
WordVectorTable parse_word_vectors(std::istream& in, WordVectorFormat format);
WordVectorTable read_word_vectors_file(const std::string& path);
void write_word_vectors(std::ostream& out, const WordVectorTable& table,
                        WordVectorFormat format);

// Files ending in ".bin" are binary, everything else text.
WordVectorFormat format_for_path(std::string_view path);

/// Mean of the in-vocabulary token vectors. Throws CoverageError naming
/// `id` when no token is known.
Vector embed_average(std::string_view text, const WordVectorTable& table,
                     std::string_view id = {});

/// Signed feature hashing followed by L2 normalization.
///
/// Each token t contributes sign(t) at index bucket(t) % dim where
///   bucket = FNV-1a-64(t) with offset basis 0xcbf29ce484222325 ^ splitmix64(seed)
///   sign   = top bit of FNV-1a-64(t) with basis 0xcbf29ce484222325 ^
///            splitmix64(seed ^ 0x5851f42d4c957f2d); set means -1.
/// If signed contributions cancel exactly, all signs are taken as +1 so the
/// result stays well defined.
Vector embed_hash(std::string_view text, std::size_t dim, std::uint64_t seed);

struct RemoteEndpointConfig {
  std::string base_url;
  std::chrono::milliseconds timeout{30000};
  std::size_t expected_dim = 1024;
  std::size_t max_batch = 64;
  // Number of batch requests allowed in flight at once.
  std::size_t max_concurrency = 1;
};

/// POST {base}/embed with {"texts":[...]} in batches of at most max_batch;
/// rows come back in input order.
Matrix embed_remote(const std::vector<std::string>& texts,
                    const RemoteEndpointConfig& config);

/// GET {base}/health; returns the advertised dimension.
std::size_t remote_health(const RemoteEndpointConfig& config);

/// Common interface used by the pipeline.
class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::size_t dim() const = 0;
  // Row i embeds texts[i]; ids are used in error messages only.
  virtual Matrix embed(const std::vector<std::string>& texts,
                       const std::vector<std::string>& ids) const = 0;
};

class HashEmbedder final : public Embedder {
 public:
  HashEmbedder(std::size_t dim, std::uint64_t seed);
  std::size_t dim() const override { return dim_; }
  Matrix embed(const std::vector<std::string>& texts,
               const std::vector<std::string>& ids) const override;

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

class AverageEmbedder final : public Embedder {
 public:
  explicit AverageEmbedder(std::shared_ptr<const WordVectorTable> table);
  std::size_t dim() const override { return table_->dim(); }
  Matrix embed(const std::vector<std::string>& texts,
               const std::vector<std::string>& ids) const override;

 private:
  std::shared_ptr<const WordVectorTable> table_;
};

class RemoteEmbedder final : public Embedder {
 public:
  explicit RemoteEmbedder(RemoteEndpointConfig config);
  std::size_t dim() const override { return config_.expected_dim; }
  Matrix embed(const std::vector<std::string>& texts,
               const std::vector<std::string>& ids) const override;

 private:
  RemoteEndpointConfig config_;
};

}  // namespace sfc
