#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "lda.hpp"

namespace sfc {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  ConfusionCounts& operator+=(const ConfusionCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
};

struct SlotMetrics {
  double accuracy = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  ConfusionCounts counts;
};

struct EvalReport {
  std::size_t samples = 0;
  double accuracy = 0;  // exact match on all four slots
  double precision = 0; // micro over slots
  double recall = 0;
  double f1 = 0;
  ConfusionCounts counts;
  std::array<SlotMetrics, kFactorCount> per_factor;
};

/// Slot counting: gold=c, pred=c (c != absent) is a TP; gold absent with a
/// prediction is a FP; a missed gold class is a FN; a wrong class is both a
/// FP and a FN. Zero denominators give 0.
EvalReport evaluate(const std::vector<LabelVector>& predictions,
                    const std::vector<LabelVector>& golds);

// 2 * p * r / (p + r), or 0 when p + r == 0.
double f1_score(double precision, double recall);

OrderedJson report_to_json(const EvalReport& report);

struct ProjectionRow {
  std::string id;
  double x = 0;
  double y = 0;
  std::string factor;
  std::string cls;
};

/// Coordinates on the head's first two discriminant directions; y is 0 when
/// the head has a single direction.
std::vector<ProjectionRow> export_projection(
    const LdaModel& head, const Matrix& x, const std::vector<std::string>& labels,
    const std::vector<std::string>& ids, std::string_view factor = {});

/// TSV with header "id\tx\ty\tclass", six decimals, LF endings.
void write_projection_tsv(std::ostream& out,
                          const std::vector<ProjectionRow>& rows);

}  // namespace sfc
