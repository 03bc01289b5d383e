// Command-line front end. Talks to the pipeline only through the C API.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "sfc/sfc.h"

namespace {

int report(sfc_status status) {
  if (status != SFC_OK) std::cerr << "sfc: " << sfc_last_error() << "\n";
  return static_cast<int>(status);
}

// Prints and frees a library-owned string.
int emit(sfc_status status, char* text) {
  if (status == SFC_OK && text != nullptr) std::cout << text << "\n";
  sfc_string_free(text);
  return report(status);
}

struct ModelHandle {
  sfc_model* model = nullptr;
  ~ModelHandle() { sfc_model_free(model); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Predict duration, frequency, severity and onset of a complaint"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sfc_version()));

  int rc = 0;

  // synth
  auto* synth = app.add_subcommand("synth", "Write a templated synthetic corpus");
  std::uint64_t synth_n = 500, synth_seed = 1;
  int synth_max = 4;
  std::string synth_out;
  synth->add_option("--n", synth_n, "Number of utterances")->required();
  synth->add_option("--seed", synth_seed, "Generator seed")->required();
  synth->add_option("--max-factors", synth_max, "Factors per sentence, 1-4")
      ->capture_default_str();
  synth->add_option("--out", synth_out, "Output JSONL")->required();
  synth->callback([&] {
    rc = report(sfc_synthesize(synth_n, synth_seed, synth_max, synth_out.c_str()));
  });

  // split
  auto* split = app.add_subcommand("split", "Shuffle and split a labeled corpus");
  std::string split_in, split_train, split_test;
  double split_ratio = 0.8;
  std::uint64_t split_seed = 7;
  split->add_option("--in", split_in, "Labeled JSONL")->required();
  split->add_option("--ratio", split_ratio, "Training fraction")->capture_default_str();
  split->add_option("--seed", split_seed, "Shuffle seed")->capture_default_str();
  split->add_option("--train-out", split_train, "Training JSONL")->required();
  split->add_option("--test-out", split_test, "Test JSONL")->required();
  split->callback([&] {
    rc = report(sfc_split(split_in.c_str(), split_ratio, split_seed,
                          split_train.c_str(), split_test.c_str()));
  });

  // label
  auto* label = app.add_subcommand("label", "Keyword-label raw utterances");
  std::string label_in, label_lexicon, label_out;
  label->add_option("--in", label_in, "Raw JSONL with id, text, parent")->required();
  label->add_option("--lexicon", label_lexicon, "Lexicon JSON (default: built in)");
  label->add_option("--out", label_out, "Labeled JSONL")->required();
  label->callback([&] {
    rc = report(sfc_weak_label(label_in.c_str(),
                               label_lexicon.empty() ? nullptr : label_lexicon.c_str(),
                               label_out.c_str()));
  });

  // train
  auto* train = app.add_subcommand("train", "Fit PCA and the classifier chain");
  sfc_train_options opts;
  sfc_train_options_init(&opts);
  std::string train_in, train_out, embedder = "hash", word_vectors, endpoint;
  train->add_option("--train", train_in, "Labeled JSONL")->required();
  train->add_option("--embedder", embedder, "hash|wordvec|remote")
      ->check(CLI::IsMember({"hash", "wordvec", "remote"}))
      ->capture_default_str();
  train->add_option("--dim", opts.dim, "Hash dim or expected remote dim")
      ->capture_default_str();
  train->add_option("--pca-dim", opts.pca_dim, "PCA output dim (0: min(50, D, N-1))")
      ->capture_default_str();
  train->add_option("--seed", opts.seed, "Hash embedder seed")->capture_default_str();
  train->add_option("--shrinkage", opts.shrinkage, "Within-scatter shrinkage gamma")
      ->capture_default_str();
  train->add_option("--word-vectors", word_vectors, "Word-vector file (.bin = binary)");
  train->add_option("--endpoint", endpoint, "Embedding service base URL");
  train->add_option("--out", train_out, "Model file")->required();
  train->callback([&] {
    opts.embedder = embedder.c_str();
    opts.word_vectors = word_vectors.empty() ? nullptr : word_vectors.c_str();
    opts.endpoint = endpoint.empty() ? nullptr : endpoint.c_str();
    rc = report(sfc_train(train_in.c_str(), &opts, train_out.c_str()));
  });

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate a model on labeled data");
  std::string eval_model, eval_test;
  eval->add_option("--model", eval_model, "Model file")->required();
  eval->add_option("--test", eval_test, "Labeled JSONL")->required();
  eval->callback([&] {
    ModelHandle h;
    if ((rc = report(sfc_model_load(eval_model.c_str(), &h.model))) != 0) return;
    char* json = nullptr;
    const auto status = sfc_model_evaluate(h.model, eval_test.c_str(), &json);
    rc = emit(status, json);
  });

  // predict
  auto* predict = app.add_subcommand("predict", "Characterize one utterance");
  std::string predict_model, predict_text;
  predict->add_option("--model", predict_model, "Model file")->required();
  predict->add_option("--text", predict_text, "Utterance")->required();
  predict->callback([&] {
    ModelHandle h;
    if ((rc = report(sfc_model_load(predict_model.c_str(), &h.model))) != 0) return;
    char* json = nullptr;
    const auto status =
        sfc_model_predict_text(h.model, predict_text.c_str(), &json);
    rc = emit(status, json);
  });

  // project
  auto* proj = app.add_subcommand("project", "Export a head's 2-D discriminant projection");
  std::string proj_model, proj_data, proj_factor, proj_out;
  proj->add_option("--model", proj_model, "Model file")->required();
  proj->add_option("--data", proj_data, "Labeled JSONL")->required();
  proj->add_option("--factor", proj_factor, "duration|frequency|severity|onset")
      ->required();
  proj->add_option("--out", proj_out, "TSV output")->required();
  proj->callback([&] {
    ModelHandle h;
    if ((rc = report(sfc_model_load(proj_model.c_str(), &h.model))) != 0) return;
    rc = report(sfc_model_project(h.model, proj_data.c_str(), proj_factor.c_str(),
                                  proj_out.c_str()));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return SFC_ERR_ARGUMENT;
  }
  return rc;
}
