#include "lda.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "error.hpp"
#include "pca.hpp"

namespace sfc {

ScatterPair compute_scatter(const Matrix& x,
                            std::span<const std::string> labels,
                            std::span<const std::string> classes,
                            bool weighted) {
  const auto n = static_cast<std::size_t>(x.rows());
  const auto dim = x.cols();
  if (labels.size() != n)
    throw ArgumentError("lda: " + std::to_string(labels.size()) +
                        " labels for " + std::to_string(n) + " samples");
  if (n < 2) throw ArgumentError("lda: need at least 2 samples");
  if (!x.allFinite()) throw ArgumentError("lda: non-finite input");

  std::vector<std::size_t> label_index(n);
  std::vector<std::size_t> counts(classes.size(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    auto it = std::find(classes.begin(), classes.end(), labels[i]);
    if (it == classes.end())
      throw ArgumentError("lda: label '" + labels[i] + "' not in class list");
    label_index[i] = static_cast<std::size_t>(it - classes.begin());
    ++counts[label_index[i]];
  }

  ScatterPair s;
  std::vector<std::size_t> slot(classes.size(), 0);
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (counts[c] == 0) continue;
    slot[c] = s.classes.size();
    s.classes.push_back(classes[c]);
    s.class_counts.push_back(counts[c]);
  }
  if (s.classes.size() < 2)
    throw DegenerateClassError("lda: need at least 2 classes with samples, got " +
                               std::to_string(s.classes.size()));

  const auto c_count = static_cast<Eigen::Index>(s.classes.size());
  s.global_mean = x.colwise().mean().transpose();
  s.class_means = Matrix::Zero(c_count, dim);
  for (std::size_t i = 0; i < n; ++i)
    s.class_means.row(static_cast<Eigen::Index>(slot[label_index[i]])) +=
        x.row(static_cast<Eigen::Index>(i));
  for (Eigen::Index c = 0; c < c_count; ++c)
    s.class_means.row(c) /= static_cast<double>(s.class_counts[c]);

  // Deviations from the own class mean, stacked, give within = D^T D.
  Matrix dev(x.rows(), dim);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    dev.row(r) = x.row(r) -
                 s.class_means.row(static_cast<Eigen::Index>(slot[label_index[i]]));
  }
  s.within = dev.transpose() * dev;

  Matrix mean_dev = s.class_means.rowwise() - s.global_mean.transpose();
  if (weighted)
    for (Eigen::Index c = 0; c < c_count; ++c)
      mean_dev.row(c) *= std::sqrt(static_cast<double>(s.class_counts[c]));
  s.between = mean_dev.transpose() * mean_dev;

  // Exact symmetry.
  s.within = 0.5 * (s.within + s.within.transpose()).eval();
  s.between = 0.5 * (s.between + s.between.transpose()).eval();
  return s;
}

LdaModel fit_lda(const Matrix& x, std::span<const std::string> labels,
                 std::span<const std::string> classes, const LdaConfig& config) {
  if (!(config.shrinkage >= 0.0))
    throw ArgumentError("lda: shrinkage must be non-negative");
  if (!(config.tolerance > 0.0))
    throw ArgumentError("lda: tolerance must be positive");
  if (config.max_components && *config.max_components == 0)
    throw ArgumentError("lda: max_components must be positive");

  const ScatterPair s =
      compute_scatter(x, labels, classes, config.weighted_between);
  const auto dim = static_cast<std::size_t>(x.cols());
  const auto d = static_cast<Eigen::Index>(dim);

  const double trace = s.within.trace();
  Matrix within = s.within;
  within.diagonal().array() +=
      config.shrinkage * trace / static_cast<double>(dim);

  Eigen::SelfAdjointEigenSolver<Matrix> within_eig(within);
  if (within_eig.info() != Eigen::Success)
    throw ConditioningError("lda: eigensolver failed on within-class scatter");
  const Vector& mu = within_eig.eigenvalues();  // ascending
  const double mean_mu = mu.sum() / static_cast<double>(dim);
  if (!(mean_mu > 0.0) || mu[0] <= config.tolerance * mean_mu)
    throw ConditioningError(
        "lda: within-class scatter is singular (smallest eigenvalue " +
        std::to_string(mu[0]) + "); increase the shrinkage gamma");

  const Matrix whiten =
      within_eig.eigenvectors() * mu.cwiseSqrt().cwiseInverse().asDiagonal();
  Matrix m = whiten.transpose() * s.between * whiten;
  m = 0.5 * (m + m.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> between_eig(m);
  if (between_eig.info() != Eigen::Success)
    throw ConditioningError("lda: eigensolver failed on whitened scatter");

  std::size_t keep = std::min(s.classes.size() - 1, dim);
  if (config.max_components) keep = std::min(keep, *config.max_components);
  const auto k = static_cast<Eigen::Index>(keep);

  LdaModel model;
  model.config = config;
  model.classes = s.classes;
  model.directions.resize(d, k);
  model.eigenvalues.resize(k);
  model.fisher_ratios.resize(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const Eigen::Index src = d - 1 - j;  // eigenvalues come ascending
    Vector w = whiten * between_eig.eigenvectors().col(src);
    w.normalize();
    canonicalize_sign(w);
    model.directions.col(j) = w;
    model.eigenvalues[j] = std::max(0.0, between_eig.eigenvalues()[src]);
    model.fisher_ratios[j] =
        w.dot(s.between * w) / w.dot(within * w);
  }
  model.projected_means = s.class_means * model.directions;
  return model;
}

LdaModel fit_lda(const Matrix& x, std::span<const std::string> labels,
                 const LdaConfig& config) {
  std::vector<std::string> classes;
  for (const auto& l : labels)
    if (std::find(classes.begin(), classes.end(), l) == classes.end())
      classes.push_back(l);
  return fit_lda(x, labels, classes, config);
}

Matrix project(const LdaModel& model, const Matrix& x) {
  if (static_cast<std::size_t>(x.cols()) != model.input_dim())
    throw ArgumentError("lda: input dim " + std::to_string(x.cols()) +
                        " != model dim " + std::to_string(model.input_dim()));
  return x * model.directions;
}

std::size_t classify_index(const LdaModel& model, const Vector& x) {
  if (static_cast<std::size_t>(x.size()) != model.input_dim())
    throw ArgumentError("lda: input dim " + std::to_string(x.size()) +
                        " != model dim " + std::to_string(model.input_dim()));
  if (!x.allFinite()) throw ArgumentError("lda: non-finite input");
  const Vector z = model.directions.transpose() * x;
  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (Eigen::Index c = 0; c < model.projected_means.rows(); ++c) {
    const double dist = (model.projected_means.row(c).transpose() - z).squaredNorm();
    if (dist < best_dist) {
      best_dist = dist;
      best = static_cast<std::size_t>(c);
    }
  }
  return best;
}

const std::string& classify(const LdaModel& model, const Vector& x) {
  return model.classes[classify_index(model, x)];
}

OrderedJson lda_to_json(const LdaModel& model) {
  OrderedJson config;
  config["shrinkage"] = model.config.shrinkage;
  config["tolerance"] = model.config.tolerance;
  config["max_components"] = model.config.max_components
                                 ? OrderedJson(*model.config.max_components)
                                 : OrderedJson(nullptr);
  config["weighted_between"] = model.config.weighted_between;

  OrderedJson j;
  j["classes"] = model.classes;
  j["input_dim"] = model.input_dim();
  j["components"] = model.components();
  j["directions"] = matrix_to_json(model.directions);
  j["eigenvalues"] = vector_to_json(model.eigenvalues);
  j["fisher_ratios"] = vector_to_json(model.fisher_ratios);
  j["projected_means"] = matrix_to_json(model.projected_means);
  j["config"] = std::move(config);
  return j;
}

LdaModel lda_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("lda: expected object");
  LdaModel model;
  model.classes = j.at("classes").get<std::vector<std::string>>();
  model.directions = matrix_from_json(j.at("directions"), "lda.directions");
  model.eigenvalues = vector_from_json(j.at("eigenvalues"), "lda.eigenvalues");
  model.fisher_ratios =
      vector_from_json(j.at("fisher_ratios"), "lda.fisher_ratios");
  model.projected_means =
      matrix_from_json(j.at("projected_means"), "lda.projected_means");
  const auto& cfg = j.at("config");
  model.config.shrinkage = cfg.at("shrinkage").get<double>();
  model.config.tolerance = cfg.at("tolerance").get<double>();
  if (!cfg.at("max_components").is_null())
    model.config.max_components = cfg.at("max_components").get<std::size_t>();
  model.config.weighted_between = cfg.at("weighted_between").get<bool>();

  const std::size_t input_dim = j.at("input_dim").get<std::size_t>();
  const auto k = model.eigenvalues.size();
  if (k == 0 || static_cast<std::size_t>(model.directions.rows()) != input_dim ||
      model.directions.cols() != k || model.fisher_ratios.size() != k ||
      model.projected_means.rows() !=
          static_cast<Eigen::Index>(model.classes.size()) ||
      model.projected_means.cols() != k)
    throw ParseError("lda: inconsistent dimensions");
  return model;
}

}  // namespace sfc
