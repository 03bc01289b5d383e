#include "sfc/sfc.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include "corpus.hpp"
#include "error.hpp"
#include "pipeline.hpp"
#include "text.hpp"
#include "weaklabel.hpp"

struct sfc_model {
  sfc::Pipeline pipeline;
};

namespace {

thread_local std::string g_last_error;

sfc_status to_status(sfc::ErrorKind kind) {
  switch (kind) {
    case sfc::ErrorKind::argument: return SFC_ERR_ARGUMENT;
    case sfc::ErrorKind::data: return SFC_ERR_DATA;
    case sfc::ErrorKind::endpoint: return SFC_ERR_ENDPOINT;
  }
  return SFC_ERR_INTERNAL;
}

template <class F>
sfc_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return SFC_OK;
  } catch (const sfc::Error& e) {
    g_last_error = e.what();
    return to_status(e.kind());
  } catch (const nlohmann::json::exception& e) {
    g_last_error = e.what();
    return SFC_ERR_DATA;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SFC_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SFC_ERR_INTERNAL;
  }
}

const char* require(const char* s, const char* what) {
  if (s == nullptr || *s == '\0')
    throw sfc::ArgumentError(std::string(what) + " is required");
  return s;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

void set_out(char** out, const std::string& s) {
  if (out == nullptr) throw sfc::ArgumentError("output pointer is NULL");
  *out = dup_string(s);
}

sfc::Lexicon lexicon_or_default(const char* path) {
  return (path == nullptr || *path == '\0') ? sfc::Lexicon::defaults()
                                            : sfc::Lexicon::read_file(path);
}

}  // namespace

extern "C" {

const char* sfc_version(void) { return "1.0.0"; }

const char* sfc_last_error(void) { return g_last_error.c_str(); }

void sfc_string_free(char* s) { std::free(s); }

sfc_status sfc_synthesize(uint64_t count, uint64_t seed,
                          int max_factors_per_sentence, const char* out_path) {
  return guarded([&] {
    sfc::SyntheticSpec spec;
    spec.count = static_cast<std::size_t>(count);
    spec.seed = seed;
    spec.max_factors_per_sentence = max_factors_per_sentence;
    const auto records =
        sfc::generate_synthetic(spec, sfc::Taxonomy::defaults());
    sfc::write_dataset_file(require(out_path, "output path"), records);
  });
}

sfc_status sfc_split(const char* in_path, double ratio, uint64_t seed,
                     const char* train_path, const char* test_path) {
  return guarded([&] {
    const auto records = sfc::read_dataset_file(require(in_path, "input path"),
                                                sfc::Taxonomy::defaults());
    auto [train, test] = sfc::split_train_test(records, ratio, seed);
    sfc::write_dataset_file(require(train_path, "train output path"), train);
    sfc::write_dataset_file(require(test_path, "test output path"), test);
  });
}

sfc_status sfc_weak_label(const char* in_path, const char* lexicon_path,
                          const char* out_path) {
  return guarded([&] {
    const auto taxonomy = sfc::Taxonomy::defaults();
    const auto lexicon = lexicon_or_default(lexicon_path);
    lexicon.validate(taxonomy);
    auto records = sfc::read_dataset_file(require(in_path, "input path"),
                                          taxonomy, /*require_labels=*/false);
    for (auto& r : records)
      r.labels = sfc::apply_lexicon(r.text, lexicon, taxonomy);
    sfc::write_dataset_file(require(out_path, "output path"), records);
  });
}

sfc_status sfc_weak_label_text(const char* text, const char* lexicon_path,
                               char** labels_json) {
  return guarded([&] {
    const auto taxonomy = sfc::Taxonomy::defaults();
    const auto lexicon = lexicon_or_default(lexicon_path);
    lexicon.validate(taxonomy);
    const auto labels =
        sfc::apply_lexicon(require(text, "text"), lexicon, taxonomy);
    set_out(labels_json, sfc::labels_to_json(labels).dump());
  });
}

void sfc_train_options_init(sfc_train_options* options) {
  if (options == nullptr) return;
  options->embedder = "hash";
  options->dim = 256;
  options->pca_dim = 0;
  options->seed = 1;
  options->word_vectors = nullptr;
  options->endpoint = nullptr;
  options->timeout_ms = 30000;
  options->max_batch = 64;
  options->shrinkage = 1e-4;
  options->weighted_between = 0;
}

sfc_status sfc_train(const char* train_path, const sfc_train_options* options,
                     const char* model_out_path) {
  return guarded([&] {
    if (options == nullptr) throw sfc::ArgumentError("options are required");
    sfc::TrainOptions opts;
    opts.embedder.kind = require(options->embedder, "embedder");
    opts.embedder.dim = options->dim;
    opts.embedder.seed = options->seed;
    if (options->word_vectors) opts.embedder.word_vectors = options->word_vectors;
    if (options->endpoint) opts.embedder.endpoint = options->endpoint;
    opts.embedder.timeout_ms = options->timeout_ms;
    opts.embedder.max_batch = options->max_batch;
    opts.pca_dim = options->pca_dim;
    opts.lda.shrinkage = options->shrinkage;
    opts.lda.weighted_between = options->weighted_between != 0;

    const auto records = sfc::read_dataset_file(
        require(train_path, "training data path"), opts.taxonomy);
    const auto pipeline = sfc::Pipeline::train(records, opts);
    sfc::save_chain(require(model_out_path, "model output path"),
                    pipeline.model());
  });
}

sfc_status sfc_model_load(const char* path, sfc_model** out) {
  return guarded([&] {
    if (out == nullptr) throw sfc::ArgumentError("output pointer is NULL");
    *out = nullptr;
    auto pipeline = sfc::Pipeline::load(require(path, "model path"));
    *out = new sfc_model{std::move(pipeline)};
  });
}

void sfc_model_free(sfc_model* model) { delete model; }

size_t sfc_model_input_dim(const sfc_model* model) {
  return model ? model->pipeline.model().input_dim() : 0;
}

sfc_status sfc_model_predict_text(const sfc_model* model, const char* text,
                                  char** labels_json) {
  return guarded([&] {
    if (model == nullptr) throw sfc::ArgumentError("model is NULL");
    const std::string t = require(text, "text");
    if (sfc::trim(t).empty()) throw sfc::ArgumentError("text is empty");
    set_out(labels_json,
            sfc::labels_to_json(model->pipeline.predict(t)).dump());
  });
}

sfc_status sfc_model_predict_vector(const sfc_model* model,
                                    const double* values, size_t n,
                                    char** labels_json) {
  return guarded([&] {
    if (model == nullptr) throw sfc::ArgumentError("model is NULL");
    if (values == nullptr) throw sfc::ArgumentError("values is NULL");
    const sfc::Vector x =
        Eigen::Map<const sfc::Vector>(values, static_cast<Eigen::Index>(n));
    if (!x.allFinite()) throw sfc::ArgumentError("non-finite input vector");
    set_out(labels_json,
            sfc::labels_to_json(sfc::predict_chain(model->pipeline.model(), x))
                .dump());
  });
}

sfc_status sfc_model_evaluate(const sfc_model* model, const char* test_path,
                              char** report_json) {
  return guarded([&] {
    if (model == nullptr) throw sfc::ArgumentError("model is NULL");
    const auto records = sfc::read_dataset_file(
        require(test_path, "test data path"), model->pipeline.model().taxonomy);
    const auto report = model->pipeline.evaluate(records);
    set_out(report_json, sfc::report_to_json(report).dump(2));
  });
}

sfc_status sfc_model_project(const sfc_model* model, const char* data_path,
                             const char* factor, const char* out_path) {
  return guarded([&] {
    if (model == nullptr) throw sfc::ArgumentError("model is NULL");
    sfc::Factor f;
    try {
      f = sfc::parse_factor(require(factor, "factor"));
    } catch (const sfc::ValidationError& e) {
      throw sfc::ArgumentError(e.what());
    }
    const auto records = sfc::read_dataset_file(
        require(data_path, "data path"), model->pipeline.model().taxonomy);
    const auto rows = model->pipeline.project(records, f);
    std::ofstream out(require(out_path, "output path"), std::ios::binary);
    if (!out) throw sfc::ArgumentError(std::string("cannot write '") + out_path + "'");
    sfc::write_projection_tsv(out, rows);
  });
}

}  // extern "C"
