#include "chain.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "error.hpp"

namespace sfc {

namespace {

std::size_t class_slot(const std::vector<std::string>& classes,
                       const std::string& cls) {
  auto it = std::find(classes.begin(), classes.end(), cls);
  if (it == classes.end())
    throw ArgumentError("class '" + cls + "' not in head class list");
  return static_cast<std::size_t>(it - classes.begin());
}

[[noreturn]] void rethrow_with_context(const Error& e, const std::string& ctx) {
  throw Error(e.kind(), ctx + ": " + e.what());
}

void check_order(const std::vector<Factor>& order) {
  if (order.size() != kFactorCount)
    throw ArgumentError("chain: factor order must list all 4 factors");
  std::array<bool, kFactorCount> seen{};
  for (Factor f : order) {
    auto& s = seen[static_cast<std::size_t>(f)];
    if (s) throw ArgumentError("chain: factor order repeats '" +
                               std::string(factor_name(f)) + "'");
    s = true;
  }
}

}  // namespace

std::size_t ChainModel::expected_head_dim(std::size_t k) const {
  std::size_t dim = pca.output_dim();
  for (std::size_t j = 0; j < k && j < heads.size(); ++j)
    dim += heads[j].classes.size();
  return dim;
}

Vector ChainModel::head_features(std::size_t k, const Vector& reduced,
                                 const LabelVector& prior) const {
  Vector out = Vector::Zero(static_cast<Eigen::Index>(expected_head_dim(k)));
  out.head(reduced.size()) = reduced;
  Eigen::Index offset = reduced.size();
  for (std::size_t j = 0; j < k; ++j) {
    const auto& h = heads[j];
    out[offset + static_cast<Eigen::Index>(class_slot(h.classes, prior[h.factor]))] =
        1.0;
    offset += static_cast<Eigen::Index>(h.classes.size());
  }
  return out;
}

Matrix ChainModel::head_features(std::size_t k, const Matrix& reduced,
                                 const std::vector<LabelVector>& prior) const {
  if (prior.size() != static_cast<std::size_t>(reduced.rows()))
    throw ArgumentError("chain: label count does not match sample count");
  Matrix out(reduced.rows(), static_cast<Eigen::Index>(expected_head_dim(k)));
  for (Eigen::Index r = 0; r < reduced.rows(); ++r)
    out.row(r) = head_features(k, Vector(reduced.row(r).transpose()),
                               prior[static_cast<std::size_t>(r)])
                     .transpose();
  return out;
}

std::size_t ChainModel::head_index(Factor f) const {
  for (std::size_t k = 0; k < heads.size(); ++k)
    if (heads[k].factor == f) return k;
  throw ArgumentError("chain: no head for factor '" +
                      std::string(factor_name(f)) + "'");
}

ChainModel fit_chain(const Matrix& x, const std::vector<LabelVector>& labels,
                     const Taxonomy& taxonomy, const ChainConfig& config) {
  if (labels.size() != static_cast<std::size_t>(x.rows()))
    throw ArgumentError("chain: " + std::to_string(labels.size()) +
                        " label vectors for " + std::to_string(x.rows()) +
                        " samples");
  if (labels.size() < 4)
    throw ArgumentError("chain: need at least 4 training samples");
  check_order(config.order);
  for (const auto& l : labels) taxonomy.validate(l);

  ChainModel model;
  model.taxonomy = taxonomy;
  model.config = config;
  try {
    model.pca = fit_pca(x, config.pca_dim);
  } catch (const Error& e) {
    rethrow_with_context(e, "pca");
  }
  const Matrix reduced = transform_pca(model.pca, x);

  for (std::size_t k = 0; k < config.order.size(); ++k) {
    ChainHead head;
    head.factor = config.order[k];
    head.classes = taxonomy.classes_with_absent(head.factor);
    head.input_dim = model.expected_head_dim(k);

    std::vector<std::string> y;
    y.reserve(labels.size());
    std::map<std::string, std::size_t> counts;
    for (const auto& l : labels) {
      y.push_back(l[head.factor]);
      ++counts[y.back()];
    }

    if (counts.size() < 2) {
      // Majority class; ties go to "absent", then to the earlier class.
      std::size_t best = 0;
      for (const auto& cls : head.classes) {
        auto it = counts.find(cls);
        const std::size_t c = it == counts.end() ? 0 : it->second;
        if (c > best || (c == best && c > 0 && cls == kAbsent)) {
          best = c;
          head.constant_class = cls;
        }
      }
    } else {
      const Matrix features = model.head_features(k, reduced, labels);
      try {
        head.lda = fit_lda(features, y, head.classes, config.lda);
      } catch (const Error& e) {
        rethrow_with_context(e, "head '" + std::string(factor_name(head.factor)) +
                                    "'");
      }
    }
    model.heads.push_back(std::move(head));
  }
  return model;
}

LabelVector predict_chain(const ChainModel& model, const Vector& x) {
  const Vector reduced = transform_pca(model.pca, x);
  LabelVector out;
  for (std::size_t k = 0; k < model.heads.size(); ++k) {
    const auto& head = model.heads[k];
    if (!head.lda) {
      out[head.factor] = head.constant_class;
      continue;
    }
    out[head.factor] = classify(*head.lda, model.head_features(k, reduced, out));
  }
  return out;
}

std::vector<LabelVector> predict_chain(const ChainModel& model,
                                       const Matrix& x) {
  std::vector<LabelVector> out;
  out.reserve(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index r = 0; r < x.rows(); ++r)
    out.push_back(predict_chain(model, Vector(x.row(r).transpose())));
  return out;
}

OrderedJson chain_to_json(const ChainModel& model) {
  const auto& cfg = model.config;
  OrderedJson order = OrderedJson::array();
  for (Factor f : cfg.order) order.push_back(factor_name(f));

  OrderedJson embedder;
  embedder["kind"] = cfg.embedder.kind;
  embedder["dim"] = cfg.embedder.dim;
  embedder["seed"] = cfg.embedder.seed;
  embedder["word_vectors"] = cfg.embedder.word_vectors;
  embedder["endpoint"] = cfg.embedder.endpoint;
  embedder["timeout_ms"] = cfg.embedder.timeout_ms;
  embedder["max_batch"] = cfg.embedder.max_batch;

  OrderedJson lda;
  lda["shrinkage"] = cfg.lda.shrinkage;
  lda["tolerance"] = cfg.lda.tolerance;
  lda["max_components"] = cfg.lda.max_components
                              ? OrderedJson(*cfg.lda.max_components)
                              : OrderedJson(nullptr);
  lda["weighted_between"] = cfg.lda.weighted_between;

  OrderedJson config;
  config["factor_order"] = std::move(order);
  config["pca_dim"] = cfg.pca_dim;
  config["lda"] = std::move(lda);
  config["embedder"] = std::move(embedder);

  OrderedJson heads = OrderedJson::array();
  for (std::size_t k = 0; k < model.heads.size(); ++k) {
    const auto& h = model.heads[k];
    if (h.input_dim != model.expected_head_dim(k))
      throw ValidationError("chain: head " + std::to_string(k) +
                            " input dim breaks the chain dimension formula");
    OrderedJson jh;
    jh["factor"] = factor_name(h.factor);
    jh["classes"] = h.classes;
    jh["input_dim"] = h.input_dim;
    if (h.lda) {
      jh["kind"] = "lda";
      jh["lda"] = lda_to_json(*h.lda);
    } else {
      jh["kind"] = "constant";
      jh["constant_class"] = h.constant_class;
    }
    heads.push_back(std::move(jh));
  }

  OrderedJson j;
  j["format"] = kModelFormat;
  j["taxonomy"] = model.taxonomy.to_json();
  j["config"] = std::move(config);
  j["pca"] = pca_to_json(model.pca);
  j["heads"] = std::move(heads);
  return j;
}

ChainModel chain_from_json(const Json& j) {
  if (!j.is_object() || j.value("format", "") != kModelFormat)
    throw ParseError("model: missing or unsupported format tag (want " +
                     std::string(kModelFormat) + ")");
  try {
    ChainModel model;
    model.taxonomy = Taxonomy::from_json(j.at("taxonomy"));

    const auto& cfg = j.at("config");
    model.config.order.clear();
    for (const auto& f : cfg.at("factor_order"))
      model.config.order.push_back(parse_factor(f.get<std::string>()));
    check_order(model.config.order);
    model.config.pca_dim = cfg.at("pca_dim").get<std::size_t>();
    const auto& lda = cfg.at("lda");
    model.config.lda.shrinkage = lda.at("shrinkage").get<double>();
    model.config.lda.tolerance = lda.at("tolerance").get<double>();
    if (!lda.at("max_components").is_null())
      model.config.lda.max_components = lda.at("max_components").get<std::size_t>();
    model.config.lda.weighted_between = lda.at("weighted_between").get<bool>();
    const auto& emb = cfg.at("embedder");
    auto& spec = model.config.embedder;
    spec.kind = emb.at("kind").get<std::string>();
    spec.dim = emb.at("dim").get<std::size_t>();
    spec.seed = emb.at("seed").get<std::uint64_t>();
    spec.word_vectors = emb.at("word_vectors").get<std::string>();
    spec.endpoint = emb.at("endpoint").get<std::string>();
    spec.timeout_ms = emb.at("timeout_ms").get<std::int64_t>();
    spec.max_batch = emb.at("max_batch").get<std::size_t>();

    model.pca = pca_from_json(j.at("pca"));
    if (model.pca.output_dim() != model.config.pca_dim)
      throw ParseError("model: pca output dim differs from config");

    const auto& heads = j.at("heads");
    if (heads.size() != kFactorCount)
      throw ParseError("model: expected 4 heads");
    for (std::size_t k = 0; k < heads.size(); ++k) {
      const auto& jh = heads[k];
      ChainHead h;
      h.factor = parse_factor(jh.at("factor").get<std::string>());
      if (h.factor != model.config.order[k])
        throw ParseError("model: head order differs from factor order");
      h.classes = jh.at("classes").get<std::vector<std::string>>();
      if (h.classes != model.taxonomy.classes_with_absent(h.factor))
        throw ParseError("model: head classes differ from taxonomy");
      h.input_dim = jh.at("input_dim").get<std::size_t>();
      if (h.input_dim != model.expected_head_dim(k))
        throw ParseError("model: head " + std::to_string(k) +
                         " input dim breaks the chain dimension formula");
      const auto kind = jh.at("kind").get<std::string>();
      if (kind == "lda") {
        h.lda = lda_from_json(jh.at("lda"));
        if (h.lda->input_dim() != h.input_dim)
          throw ParseError("model: lda dim differs from head dim");
        for (const auto& c : h.lda->classes)
          if (std::find(h.classes.begin(), h.classes.end(), c) == h.classes.end())
            throw ParseError("model: lda class '" + c + "' not in head");
      } else if (kind == "constant") {
        h.constant_class = jh.at("constant_class").get<std::string>();
        if (!model.taxonomy.contains(h.factor, h.constant_class))
          throw ParseError("model: unknown constant class");
      } else {
        throw ParseError("model: unknown head kind '" + kind + "'");
      }
      model.heads.push_back(std::move(h));
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model: ") + e.what());
  } catch (const ValidationError& e) {
    throw ParseError(std::string("model: ") + e.what());
  }
}

std::string serialize_chain(const ChainModel& model) {
  return chain_to_json(model).dump(1) + "\n";
}

void save_chain(const std::string& path, const ChainModel& model) {
  const std::string bytes = serialize_chain(model);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write model '" + path + "'");
  out << bytes;
}

ChainModel load_chain(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open model '" + path + "'");
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ParseError(path + ": malformed JSON");
  return chain_from_json(j);
}

}  // namespace sfc
