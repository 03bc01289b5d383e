#include "pca.hpp"

#include <cmath>

#include "error.hpp"

namespace sfc {

void canonicalize_sign(Eigen::Ref<Vector> v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  if (v.size() > 0 && v[best] < 0) v = -v;
}

PcaModel fit_pca(const Matrix& x, std::size_t d) {
  const auto n = static_cast<std::size_t>(x.rows());
  const auto dim = static_cast<std::size_t>(x.cols());
  if (n < 2) throw ArgumentError("pca: need at least 2 samples");
  if (d < 1 || d > std::min(dim, n - 1))
    throw ArgumentError("pca: output dim " + std::to_string(d) +
                        " outside [1, " + std::to_string(std::min(dim, n - 1)) +
                        "]");
  if (!x.allFinite()) throw ArgumentError("pca: non-finite input");

  PcaModel model;
  model.mean = x.colwise().mean().transpose();
  const Matrix centered = x.rowwise() - model.mean.transpose();

  Eigen::BDCSVD<Matrix> svd(centered, Eigen::ComputeThinV);
  const Vector& sigma = svd.singularValues();
  const Matrix& v = svd.matrixV();

  const auto k = static_cast<Eigen::Index>(d);
  model.components = v.leftCols(k).transpose();
  for (Eigen::Index r = 0; r < k; ++r) {
    Vector row = model.components.row(r).transpose();
    canonicalize_sign(row);
    model.components.row(r) = row.transpose();
  }

  model.explained_variance.resize(k);
  const double top = sigma.size() > 0 ? sigma[0] : 0.0;
  for (Eigen::Index r = 0; r < k; ++r) {
    const double var = sigma[r] * sigma[r] / static_cast<double>(n - 1);
    model.explained_variance[r] = var < 0 ? 0.0 : var;
    if (sigma[r] <= kPcaRankTolerance * top || top == 0.0)
      model.rank_deficient = true;
  }
  return model;
}

Matrix transform_pca(const PcaModel& model, const Matrix& x) {
  if (static_cast<std::size_t>(x.cols()) != model.input_dim())
    throw ArgumentError("pca: input dim " + std::to_string(x.cols()) +
                        " != model dim " + std::to_string(model.input_dim()));
  return (x.rowwise() - model.mean.transpose()) * model.components.transpose();
}

Vector transform_pca(const PcaModel& model, const Vector& x) {
  if (static_cast<std::size_t>(x.size()) != model.input_dim())
    throw ArgumentError("pca: input dim " + std::to_string(x.size()) +
                        " != model dim " + std::to_string(model.input_dim()));
  return model.components * (x - model.mean);
}

Matrix inverse_transform_pca(const PcaModel& model, const Matrix& reduced) {
  if (static_cast<std::size_t>(reduced.cols()) != model.output_dim())
    throw ArgumentError("pca: reduced dim mismatch");
  return (reduced * model.components).rowwise() + model.mean.transpose();
}

OrderedJson matrix_to_json(const Matrix& m) {
  OrderedJson rows = OrderedJson::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    OrderedJson row = OrderedJson::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + ": expected rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols =
      rows > 0 && j[0].is_array() ? static_cast<Eigen::Index>(j[0].size()) : 0;
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw ParseError(std::string(what) + ": ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) throw ParseError(std::string(what) + ": non-number");
      m(r, c) = v.get<double>();
    }
  }
  return m;
}

OrderedJson vector_to_json(const Vector& v) {
  OrderedJson out = OrderedJson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Vector vector_from_json(const Json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + ": expected array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ParseError(std::string(what) + ": non-number");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

OrderedJson pca_to_json(const PcaModel& model) {
  OrderedJson j;
  j["input_dim"] = model.input_dim();
  j["output_dim"] = model.output_dim();
  j["fit_on"] = "train";
  j["rank_deficient"] = model.rank_deficient;
  j["mean"] = vector_to_json(model.mean);
  j["components"] = matrix_to_json(model.components);
  j["explained_variance"] = vector_to_json(model.explained_variance);
  return j;
}

PcaModel pca_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("pca: expected object");
  PcaModel model;
  model.mean = vector_from_json(j.at("mean"), "pca.mean");
  model.components = matrix_from_json(j.at("components"), "pca.components");
  model.explained_variance =
      vector_from_json(j.at("explained_variance"), "pca.explained_variance");
  model.rank_deficient = j.value("rank_deficient", false);
  if (model.components.rows() == 0 ||
      model.components.cols() != model.mean.size() ||
      model.explained_variance.size() != model.components.rows())
    throw ParseError("pca: inconsistent dimensions");
  return model;
}

}  // namespace sfc
