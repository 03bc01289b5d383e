#include "metrics.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "error.hpp"

namespace sfc {

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

void count_slot(const std::string& gold, const std::string& pred,
                ConfusionCounts& c) {
  const bool gold_absent = gold == kAbsent;
  const bool pred_absent = pred == kAbsent;
  if (gold_absent && pred_absent) return;
  if (gold_absent) {
    ++c.fp;
  } else if (pred_absent) {
    ++c.fn;
  } else if (gold == pred) {
    ++c.tp;
  } else {
    ++c.fp;
    ++c.fn;
  }
}

void finish(SlotMetrics& m) {
  m.precision = ratio(m.counts.tp, m.counts.tp + m.counts.fp);
  m.recall = ratio(m.counts.tp, m.counts.tp + m.counts.fn);
  m.f1 = f1_score(m.precision, m.recall);
}

OrderedJson counts_json(const ConfusionCounts& c) {
  OrderedJson j;
  j["tp"] = c.tp;
  j["fp"] = c.fp;
  j["fn"] = c.fn;
  return j;
}

}  // namespace

double f1_score(double precision, double recall) {
  const double sum = precision + recall;
  return sum > 0 ? 2.0 * precision * recall / sum : 0.0;
}

EvalReport evaluate(const std::vector<LabelVector>& predictions,
                    const std::vector<LabelVector>& golds) {
  if (predictions.size() != golds.size())
    throw ArgumentError("evaluate: " + std::to_string(predictions.size()) +
                        " predictions for " + std::to_string(golds.size()) +
                        " gold vectors");
  if (golds.empty()) throw ArgumentError("evaluate: no samples");

  EvalReport r;
  r.samples = golds.size();
  std::size_t exact = 0;
  std::array<std::size_t, kFactorCount> slot_hits{};
  for (std::size_t i = 0; i < golds.size(); ++i) {
    bool all = true;
    for (Factor f : kAllFactors) {
      const auto s = static_cast<std::size_t>(f);
      count_slot(golds[i][f], predictions[i][f], r.per_factor[s].counts);
      if (golds[i][f] == predictions[i][f])
        ++slot_hits[s];
      else
        all = false;
    }
    if (all) ++exact;
  }
  for (std::size_t s = 0; s < kFactorCount; ++s) {
    auto& m = r.per_factor[s];
    m.accuracy = ratio(slot_hits[s], r.samples);
    finish(m);
    r.counts += m.counts;
  }
  r.accuracy = ratio(exact, r.samples);
  r.precision = ratio(r.counts.tp, r.counts.tp + r.counts.fp);
  r.recall = ratio(r.counts.tp, r.counts.tp + r.counts.fn);
  r.f1 = f1_score(r.precision, r.recall);
  return r;
}

OrderedJson report_to_json(const EvalReport& r) {
  OrderedJson per = OrderedJson::object();
  for (Factor f : kAllFactors) {
    const auto& m = r.per_factor[static_cast<std::size_t>(f)];
    OrderedJson jm;
    jm["accuracy"] = m.accuracy;
    jm["precision"] = m.precision;
    jm["recall"] = m.recall;
    jm["f1"] = m.f1;
    jm["counts"] = counts_json(m.counts);
    per[std::string(factor_name(f))] = std::move(jm);
  }
  OrderedJson j;
  j["n"] = r.samples;
  j["accuracy"] = r.accuracy;
  j["precision"] = r.precision;
  j["recall"] = r.recall;
  j["f1"] = r.f1;
  j["counts"] = counts_json(r.counts);
  j["per_factor"] = std::move(per);
  return j;
}

std::vector<ProjectionRow> export_projection(
    const LdaModel& head, const Matrix& x, const std::vector<std::string>& labels,
    const std::vector<std::string>& ids, std::string_view factor) {
  const auto n = static_cast<std::size_t>(x.rows());
  if (labels.size() != n || ids.size() != n)
    throw ArgumentError("projection: inconsistent lengths");
  const Matrix z = project(head, x);
  std::vector<ProjectionRow> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    ProjectionRow row;
    row.id = ids[i];
    row.x = z.cols() > 0 ? z(r, 0) : 0.0;
    row.y = z.cols() > 1 ? z(r, 1) : 0.0;
    row.factor = std::string(factor);
    row.cls = labels[i];
    if (!std::isfinite(row.x) || !std::isfinite(row.y))
      throw ArgumentError("projection: non-finite coordinate for '" + row.id + "'");
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_projection_tsv(std::ostream& out,
                          const std::vector<ProjectionRow>& rows) {
  out << "id\tx\ty\tclass\n";
  char buf[64];
  for (const auto& r : rows) {
    out << r.id << '\t';
    std::snprintf(buf, sizeof buf, "%.6f", r.x);
    out << buf << '\t';
    std::snprintf(buf, sizeof buf, "%.6f", r.y);
    out << buf << '\t' << r.cls << '\n';
  }
}

}  // namespace sfc
