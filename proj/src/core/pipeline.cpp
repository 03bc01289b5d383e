#include "pipeline.hpp"

#include <cstdlib>

#include "error.hpp"

namespace sfc {

std::string resolve_endpoint(const std::string& configured) {
  const char* env = std::getenv(kEndpointEnv);
  if (env != nullptr && *env != '\0') return env;
  return configured;
}

std::unique_ptr<Embedder> make_embedder(const EmbedderSpec& spec) {
  if (spec.kind == "hash") return std::make_unique<HashEmbedder>(spec.dim, spec.seed);
  if (spec.kind == "wordvec") {
    if (spec.word_vectors.empty())
      throw ArgumentError("wordvec embedder needs a word-vector file");
    auto table = std::make_shared<const WordVectorTable>(
        read_word_vectors_file(spec.word_vectors));
    return std::make_unique<AverageEmbedder>(std::move(table));
  }
  if (spec.kind == "remote") {
    RemoteEndpointConfig cfg;
    cfg.base_url = resolve_endpoint(spec.endpoint);
    if (cfg.base_url.empty())
      throw ArgumentError("remote embedder needs --endpoint or " +
                          std::string(kEndpointEnv));
    cfg.timeout = std::chrono::milliseconds(spec.timeout_ms);
    cfg.expected_dim = spec.dim;
    cfg.max_batch = spec.max_batch;
    return std::make_unique<RemoteEmbedder>(std::move(cfg));
  }
  throw ArgumentError("unknown embedder '" + spec.kind +
                      "' (expected hash, wordvec or remote)");
}

Matrix embed_records(const Embedder& embedder,
                     const std::vector<LabeledUtterance>& records) {
  std::vector<std::string> texts, ids;
  texts.reserve(records.size());
  ids.reserve(records.size());
  for (const auto& r : records) {
    texts.push_back(r.text);
    ids.push_back(r.id);
  }
  return embedder.embed(texts, ids);
}

namespace {

std::vector<LabelVector> gold_labels(const std::vector<LabeledUtterance>& records) {
  std::vector<LabelVector> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.labels);
  return out;
}

}  // namespace

Pipeline::Pipeline(ChainModel model) : model_(std::move(model)) {}

Pipeline Pipeline::train(const std::vector<LabeledUtterance>& records,
                         const TrainOptions& options) {
  if (records.size() < 4)
    throw ArgumentError("train: need at least 4 records, got " +
                        std::to_string(records.size()));
  std::shared_ptr<Embedder> embedder = make_embedder(options.embedder);

  ChainConfig config;
  config.order = options.order;
  config.lda = options.lda;
  config.embedder = options.embedder;
  config.embedder.dim = embedder->dim();

  const Matrix x = embed_records(*embedder, records);
  const std::size_t n = records.size();
  const std::size_t d = static_cast<std::size_t>(x.cols());
  config.pca_dim = options.pca_dim != 0
                       ? options.pca_dim
                       : std::min<std::size_t>({50, d, n - 1});

  Pipeline p(fit_chain(x, gold_labels(records), options.taxonomy, config));
  p.embedder_ = std::move(embedder);
  return p;
}

Pipeline Pipeline::load(const std::string& model_path) {
  return Pipeline(load_chain(model_path));
}

const Embedder& Pipeline::embedder() const {
  if (!embedder_) embedder_ = make_embedder(model_.config.embedder);
  if (embedder_->dim() != model_.input_dim())
    throw ValidationError("embedder dim " + std::to_string(embedder_->dim()) +
                          " != model input dim " +
                          std::to_string(model_.input_dim()));
  return *embedder_;
}

LabelVector Pipeline::predict(const std::string& text) const {
  const Matrix x = embedder().embed({text}, {"<text>"});
  return predict_chain(model_, Vector(x.row(0).transpose()));
}

std::vector<LabelVector> Pipeline::predict(
    const std::vector<LabeledUtterance>& records) const {
  if (records.empty()) return {};
  return predict_chain(model_, embed_records(embedder(), records));
}

EvalReport Pipeline::evaluate(const std::vector<LabeledUtterance>& records) const {
  for (const auto& r : records) model_.taxonomy.validate(r.labels);
  return sfc::evaluate(predict(records), gold_labels(records));
}

std::vector<ProjectionRow> Pipeline::project(
    const std::vector<LabeledUtterance>& records, Factor factor) const {
  const std::size_t k = model_.head_index(factor);
  const auto& head = model_.heads[k];
  if (!head.lda)
    throw ValidationError("head '" + std::string(factor_name(factor)) +
                          "' is constant and has no discriminant plane");
  if (records.empty()) return {};
  for (const auto& r : records) model_.taxonomy.validate(r.labels);

  const Matrix reduced =
      transform_pca(model_.pca, embed_records(embedder(), records));
  const auto golds = gold_labels(records);
  const Matrix features = model_.head_features(k, reduced, golds);

  std::vector<std::string> labels, ids;
  for (const auto& r : records) {
    labels.push_back(r.labels[factor]);
    ids.push_back(r.id);
  }
  return export_projection(*head.lda, features, labels, ids, factor_name(factor));
}

}  // namespace sfc
