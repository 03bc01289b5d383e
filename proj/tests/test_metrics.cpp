#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "error.hpp"
#include "lda.hpp"
#include "metrics.hpp"
#include "oracles.hpp"

using namespace sfc;

namespace {

LabelVector labels(std::string d, std::string f, std::string s, std::string o) {
  LabelVector v;
  v[Factor::duration] = std::move(d);
  v[Factor::frequency] = std::move(f);
  v[Factor::severity] = std::move(s);
  v[Factor::onset] = std::move(o);
  return v;
}

LabelVector random_labels(Xoshiro256& rng) {
  const auto tax = Taxonomy::defaults();
  LabelVector v;
  for (auto f : kAllFactors) {
    const auto& cls = tax.classes_with_absent(f);
    v[f] = cls[rng.below(cls.size())];
  }
  return v;
}

}  // namespace

TEST_CASE("perfect predictions") {
  const std::vector<LabelVector> gold = {
      labels("days", "absent", "severe", "absent"),
      labels("absent", "on-off", "absent", "sudden"),
  };
  const auto r = evaluate(gold, gold);
  CHECK(r.accuracy == 1.0);
  CHECK(r.precision == 1.0);
  CHECK(r.recall == 1.0);
  CHECK(r.f1 == 1.0);
  CHECK(r.counts.tp == 4);
}

TEST_CASE("three sample example") {
  const std::vector<LabelVector> gold = {
      labels("days", "absent", "severe", "absent"),
      labels("absent", "absent", "absent", "sudden"),
      labels("absent", "absent", "absent", "absent"),
  };
  const std::vector<LabelVector> pred = {
      labels("days", "absent", "severe", "absent"),
      labels("absent", "absent", "absent", "gradual"),
      labels("absent", "absent", "mild", "absent"),
  };
  // TP: days, severe; FP: gradual, mild; FN: sudden
  const auto r = evaluate(pred, gold);
  CHECK(r.counts.tp == 2);
  CHECK(r.counts.fp == 2);
  CHECK(r.counts.fn == 1);
  CHECK(r.accuracy == doctest::Approx(1.0 / 3.0));
  CHECK(r.precision == doctest::Approx(0.5));
  CHECK(r.recall == doctest::Approx(2.0 / 3.0));
  CHECK(r.f1 == doctest::Approx(4.0 / 7.0));
}

TEST_CASE("larger hand counted example") {
  const std::vector<LabelVector> gold = {
      labels("days", "absent", "severe", "absent"),
      labels("hours", "absent", "mild", "absent"),
      labels("absent", "absent", "absent", "sudden"),
  };
  const std::vector<LabelVector> pred = {
      labels("days", "absent", "severe", "absent"),   // exact
      labels("hours", "absent", "moderate", "absent"), // wrong class: FP + FN
      labels("absent", "continuous", "absent", "absent"), // spurious FP, missed FN
  };
  // TP: days, severe, hours = 3; FP: moderate, continuous = 2; FN: mild, sudden = 2
  const auto r = evaluate(pred, gold);
  CHECK(r.counts.tp == 3);
  CHECK(r.counts.fp == 2);
  CHECK(r.counts.fn == 2);
  CHECK(r.accuracy == doctest::Approx(1.0 / 3.0));
  CHECK(r.precision == doctest::Approx(0.6));
  CHECK(r.recall == doctest::Approx(0.6));
  CHECK(r.f1 == doctest::Approx(0.6));

  const auto& sev = r.per_factor[static_cast<std::size_t>(Factor::severity)];
  CHECK(sev.counts.tp == 1);
  CHECK(sev.counts.fp == 1);
  CHECK(sev.counts.fn == 1);
  CHECK(sev.accuracy == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("second hand counted example") {
  const std::vector<LabelVector> gold = {
      labels("days", "absent", "severe", "absent"),
      labels("weeks", "on-off", "absent", "absent"),
      labels("absent", "absent", "mild", "absent"),
  };
  const std::vector<LabelVector> pred = {
      labels("days", "absent", "severe", "absent"),
      labels("months", "absent", "absent", "gradual"),
      labels("absent", "absent", "absent", "absent"),
  };
  // TP 2; FP months, gradual = 2; FN weeks, on-off, mild = 3
  const auto r = evaluate(pred, gold);
  CHECK(r.counts.tp == 2);
  CHECK(r.counts.fp == 2);
  CHECK(r.counts.fn == 3);
  CHECK(r.accuracy == doctest::Approx(1.0 / 3.0));
  CHECK(r.precision == doctest::Approx(0.5));
  CHECK(r.recall == doctest::Approx(0.4));
  CHECK(r.f1 == doctest::Approx(2 * 0.5 * 0.4 / 0.9));
}

TEST_CASE("empty slots give zero scores") {
  const std::vector<LabelVector> none(3);
  const auto r = evaluate(none, none);
  CHECK(r.accuracy == 1.0);
  CHECK(r.precision == 0.0);
  CHECK(r.recall == 0.0);
  CHECK(r.f1 == 0.0);
  CHECK(f1_score(0, 0) == 0.0);
  CHECK_THROWS_AS(evaluate({}, {}), ArgumentError);
}

TEST_CASE("length mismatch") {
  CHECK_THROWS_AS(evaluate(std::vector<LabelVector>(2), std::vector<LabelVector>(3)),
                  ArgumentError);
}

TEST_CASE("metric invariants on random label sets") {
  Xoshiro256 rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.below(30);
    std::vector<LabelVector> gold, pred;
    for (std::size_t i = 0; i < n; ++i) {
      gold.push_back(random_labels(rng));
      pred.push_back(rng.below(3) == 0 ? gold.back() : random_labels(rng));
    }
    const auto r = evaluate(pred, gold);
    for (double v : {r.accuracy, r.precision, r.recall, r.f1}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    const double want_f1 = r.precision + r.recall > 0
                               ? 2 * r.precision * r.recall / (r.precision + r.recall)
                               : 0.0;
    CHECK(std::abs(r.f1 - want_f1) <= 1e-12);
    double min_slot = 1.0;
    ConfusionCounts sum;
    for (const auto& s : r.per_factor) {
      min_slot = std::min(min_slot, s.accuracy);
      sum += s.counts;
    }
    CHECK(r.accuracy <= min_slot + 1e-12);
    CHECK(sum.tp == r.counts.tp);
    CHECK(sum.fp == r.counts.fp);
    CHECK(sum.fn == r.counts.fn);

    // Sample order does not matter.
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(std::span<std::size_t>(perm));
    std::vector<LabelVector> gp, pp;
    for (auto i : perm) {
      gp.push_back(gold[i]);
      pp.push_back(pred[i]);
    }
    const auto q = evaluate(pp, gp);
    CHECK(q.counts.tp == r.counts.tp);
    CHECK(q.accuracy == doctest::Approx(r.accuracy));
  }
}

TEST_CASE("report json keys") {
  const auto r = evaluate({labels("days", "absent", "absent", "absent")},
                          {labels("days", "absent", "absent", "absent")});
  const auto j = report_to_json(r);
  for (const char* key : {"n", "accuracy", "precision", "recall", "f1", "counts", "per_factor"})
    CHECK(j.contains(key));
  CHECK(j["per_factor"].contains("severity"));
}

TEST_CASE("projection export") {
  Xoshiro256 rng(8);
  SUBCASE("single direction gives y = 0") {
    Matrix x = oracle::random_matrix(rng, 30, 3);
    std::vector<std::string> y, ids;
    for (int i = 0; i < 30; ++i) {
      y.push_back(i % 2 ? "a" : "b");
      ids.push_back("r" + std::to_string(i));
      if (i % 2) x(i, 0) += 4;
    }
    const auto m = fit_lda(x, y, LdaConfig{});
    const auto rows = export_projection(m, x, y, ids, "severity");
    REQUIRE(rows.size() == 30);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(rows[i].y == 0.0);
      CHECK(rows[i].id == ids[i]);
      CHECK(rows[i].cls == y[i]);
    }
  }
  SUBCASE("separable classes score a high silhouette") {
    const std::vector<std::string> classes = {"mild", "moderate", "severe"};
    const Matrix centers = 6.0 * oracle::random_matrix(rng, 3, 5);
    Matrix x = 0.5 * oracle::random_matrix(rng, 90, 5);
    std::vector<std::string> y, ids;
    for (int i = 0; i < 90; ++i) {
      x.row(i) += centers.row(i % 3);
      y.push_back(classes[static_cast<std::size_t>(i % 3)]);
      ids.push_back(std::to_string(i));
    }
    const auto m = fit_lda(x, y, classes, LdaConfig{});
    const auto rows = export_projection(m, x, y, ids);
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : rows) pts.emplace_back(r.x, r.y);
    CHECK(oracle::silhouette(pts, y) > 0.5);
  }
  SUBCASE("tsv layout") {
    std::ostringstream out;
    write_projection_tsv(out, {{"u1", 1.0, -0.5, "severity", "mild"},
                               {"u2", 0.1234567, 2, "severity", "severe"}});
    CHECK(out.str() ==
          "id\tx\ty\tclass\n"
          "u1\t1.000000\t-0.500000\tmild\n"
          "u2\t0.123457\t2.000000\tsevere\n");
  }
}
