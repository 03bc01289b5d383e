/*
 * sfc: symptom factor classification.
 *
 * C interface to the characterization pipeline. Every function returns an
 * sfc_status; on failure a description is available from sfc_last_error()
 * on the calling thread until the next call into the library.
 *
 * Strings returned through char** out-parameters are owned by the caller and
 * must be released with sfc_string_free().
 */
#ifndef SFC_SFC_H
#define SFC_SFC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SFC_BUILDING_LIBRARY)
#    define SFC_API __declspec(dllexport)
#  else
#    define SFC_API __declspec(dllimport)
#  endif
#else
#  define SFC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as CLI exit codes. */
typedef enum sfc_status {
  SFC_OK = 0,
  SFC_ERR_ARGUMENT = 2,
  SFC_ERR_DATA = 3,
  SFC_ERR_ENDPOINT = 4,
  SFC_ERR_INTERNAL = 5
} sfc_status;

typedef struct sfc_model sfc_model;

SFC_API const char* sfc_version(void);
SFC_API const char* sfc_last_error(void);
SFC_API void sfc_string_free(char* s);

/* ---- corpus ------------------------------------------------------------ */

/* Writes `count` templated utterances as labeled JSONL. */
SFC_API sfc_status sfc_synthesize(uint64_t count, uint64_t seed,
                                  int max_factors_per_sentence,
                                  const char* out_path);

/* Shuffles with xoshiro256** and writes floor(ratio * N) records to
 * train_path, the rest to test_path. */
SFC_API sfc_status sfc_split(const char* in_path, double ratio, uint64_t seed,
                             const char* train_path, const char* test_path);

/* Keyword-labels raw JSONL ({"id","text","parent"}). lexicon_path may be
 * NULL for the built-in lexicon. */
SFC_API sfc_status sfc_weak_label(const char* in_path, const char* lexicon_path,
                                  const char* out_path);

/* Labels a single text; result is a LabelVector JSON object. */
SFC_API sfc_status sfc_weak_label_text(const char* text,
                                       const char* lexicon_path,
                                       char** labels_json);

/* ---- training ---------------------------------------------------------- */

typedef struct sfc_train_options {
  const char* embedder;      /* "hash", "wordvec" or "remote" */
  size_t dim;                /* hash dim or expected remote dim */
  size_t pca_dim;            /* 0 = min(50, D, N - 1) */
  uint64_t seed;             /* hash embedder seed */
  const char* word_vectors;  /* wordvec only; may be NULL otherwise */
  const char* endpoint;      /* remote only; SFC_EMBED_ENDPOINT overrides */
  int64_t timeout_ms;
  size_t max_batch;
  double shrinkage;
  int weighted_between;      /* non-zero: class-size weighted between scatter */
} sfc_train_options;

SFC_API void sfc_train_options_init(sfc_train_options* options);

SFC_API sfc_status sfc_train(const char* train_path,
                             const sfc_train_options* options,
                             const char* model_out_path);

/* ---- fitted models ----------------------------------------------------- */

SFC_API sfc_status sfc_model_load(const char* path, sfc_model** out);
SFC_API void sfc_model_free(sfc_model* model);

/* Raw embedding width the model expects. */
SFC_API size_t sfc_model_input_dim(const sfc_model* model);

SFC_API sfc_status sfc_model_predict_text(const sfc_model* model,
                                          const char* text,
                                          char** labels_json);

/* Predicts from an already embedded vector of sfc_model_input_dim() values. */
SFC_API sfc_status sfc_model_predict_vector(const sfc_model* model,
                                            const double* values, size_t n,
                                            char** labels_json);

/* Evaluation report JSON for a labeled JSONL file. */
SFC_API sfc_status sfc_model_evaluate(const sfc_model* model,
                                      const char* test_path,
                                      char** report_json);

/* TSV projection of a labeled JSONL file onto one head's discriminant plane. */
SFC_API sfc_status sfc_model_project(const sfc_model* model,
                                     const char* data_path, const char* factor,
                                     const char* out_path);

#ifdef __cplusplus
}
#endif

#endif /* SFC_SFC_H */
