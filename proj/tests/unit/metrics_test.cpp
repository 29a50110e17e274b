#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_int.hpp>

#include "pavesat/error.hpp"
#include "pavesat/metrics/io.hpp"
#include "pavesat/metrics/metrics.hpp"
#include "pavesat/pmis/condition.hpp"
#include "pavesat/random.hpp"
#include "test_support.hpp"

using namespace pavesat;
using namespace pavesat::metrics;
using boost::multiprecision::cpp_rational;

namespace {

// Ensemble results as reported for the 775 test sections.
ConfusionMatrix reported_matrix() {
  ConfusionMatrix m(pmis::class_names());
  m.counts = {{121, 24, 12, 5, 2},
              {6, 142, 3, 0, 0},
              {0, 0, 160, 0, 0},
              {0, 0, 0, 147, 0},
              {0, 0, 0, 0, 153}};
  return m;
}

double to_double(const cpp_rational& r) { return static_cast<double>(r); }

// Per-class and weighted values from exact fractions.
struct Exact {
  std::vector<cpp_rational> precision, recall, f1;
  cpp_rational weighted_f1, weighted_precision, macro_f1;
};

Exact exact_metrics(const ConfusionMatrix& m) {
  Exact e;
  const std::size_t n = m.size();
  std::int64_t total = 0;
  for (const auto& row : m.counts) for (auto v : row) total += v;
  for (std::size_t i = 0; i < n; ++i) {
    std::int64_t row = 0, col = 0;
    for (std::size_t j = 0; j < n; ++j) {
      row += m.counts[i][j];
      col += m.counts[j][i];
    }
    const cpp_rational p = col ? cpp_rational(m.counts[i][i], col) : cpp_rational(0);
    const cpp_rational r = row ? cpp_rational(m.counts[i][i], row) : cpp_rational(0);
    const cpp_rational f = p + r == 0 ? cpp_rational(0) : cpp_rational(2 * p * r / (p + r));
    e.precision.push_back(p);
    e.recall.push_back(r);
    e.f1.push_back(f);
    e.weighted_f1 += f * row;
    e.weighted_precision += p * row;
    e.macro_f1 += f;
  }
  e.weighted_f1 /= total;
  e.weighted_precision /= total;
  e.macro_f1 /= static_cast<long long>(n);
  return e;
}

}  // namespace

TEST(Metrics, ReportedEnsembleMatrix) {
  const auto m = reported_matrix();
  EXPECT_EQ(m.total(), 775);
  EXPECT_EQ(m.trace(), 723);
  const auto s = summarize(m);
  EXPECT_EQ(s.accuracy, 723.0 / 775.0);
  EXPECT_NEAR(s.accuracy, 0.9329, 1e-4);
  EXPECT_NEAR(s.weighted.f1, 0.93, 0.005);
  EXPECT_NEAR(s.weighted.f1, 0.930387, 1e-6);
  EXPECT_EQ(s.per_class[2].precision, 160.0 / 175.0);
  EXPECT_EQ(s.per_class[3].recall, 1.0);
  EXPECT_EQ(s.per_class[4].recall, 1.0);
  EXPECT_EQ(s.per_class[0].recall, 121.0 / 164.0);
  EXPECT_EQ(s.per_class[0].support, 164);
  EXPECT_EQ(s.per_class[2].predicted, 175);
  EXPECT_EQ(s.weighted.recall, s.accuracy);
  EXPECT_EQ(&s.headline(), &s.weighted);
}

TEST(Metrics, AgreesWithExactFractionsOnRandomMatrices) {
  Rng rng(14);
  for (int t = 0; t < 200; ++t) {
    ConfusionMatrix m(pmis::class_names());
    for (auto& row : m.counts) {
      for (auto& v : row) v = rng.bernoulli(0.3) ? 0 : static_cast<std::int64_t>(rng.below(500));
    }
    m.counts[0][0] += 1;
    const auto s = summarize(m, Averaging::Macro);
    const auto e = exact_metrics(m);
    for (std::size_t i = 0; i < 5; ++i) {
      EXPECT_EQ(s.per_class[i].precision, to_double(e.precision[i]));
      EXPECT_EQ(s.per_class[i].recall, to_double(e.recall[i]));
      EXPECT_NEAR(s.per_class[i].f1, to_double(e.f1[i]), 4e-16);
    }
    EXPECT_NEAR(s.weighted.f1, to_double(e.weighted_f1), 1e-15);
    EXPECT_NEAR(s.weighted.precision, to_double(e.weighted_precision), 1e-15);
    EXPECT_NEAR(s.headline().f1, to_double(e.macro_f1), 1e-15);
  }
}

TEST(Metrics, ConfusionFromLabels) {
  const std::vector<int> truth = {0, 0, 1, 2, 4, 4};
  const std::vector<int> pred = {0, 1, 1, 2, 3, 4};
  const auto m = confusion(std::span<const int>(truth), std::span<const int>(pred), pmis::class_names());
  EXPECT_EQ(m.counts[0][1], 1);
  EXPECT_EQ(m.counts[4][3], 1);
  EXPECT_EQ(m.trace(), 4);

  const std::vector<std::string> ts = {"Fair", "Poor"}, ps = {"Fair", "Fair"};
  const auto n = confusion(std::span<const std::string>(ts), std::span<const std::string>(ps), pmis::class_names());
  EXPECT_EQ(n.counts[3][2], 1);
  const std::vector<std::string> unknown = {"Fair", "Excellent"};
  EXPECT_THROW(confusion(std::span<const std::string>(ts), std::span<const std::string>(unknown), pmis::class_names()),
               RangeError);
  const std::vector<int> bad = {0, 5, 1, 2, 3, 4};
  EXPECT_THROW(confusion(std::span<const int>(truth), std::span<const int>(bad), pmis::class_names()), RangeError);
  const std::vector<int> shorter = {0};
  EXPECT_THROW(confusion(std::span<const int>(truth), std::span<const int>(shorter), pmis::class_names()), ShapeError);
}

TEST(Metrics, UndefinedRatiosAndEmptyInput) {
  ConfusionMatrix m(pmis::class_names());
  m.counts[0][0] = 3;
  m.counts[1][0] = 1;
  const auto pr = precision_recall(m, 1);
  EXPECT_FALSE(pr.precision_defined);
  EXPECT_TRUE(pr.recall_defined);
  EXPECT_EQ(pr.recall, 0.0);
  EXPECT_FALSE(precision_recall(m, 2).recall_defined);
  EXPECT_EQ(f1(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(f1(0.5, 1.0), 2.0 / 3.0);
  EXPECT_THROW(precision_recall(m, 5), RangeError);
  EXPECT_THROW(accuracy(ConfusionMatrix(pmis::class_names())), DegenerateInputError);
  EXPECT_THROW(summarize(ConfusionMatrix(pmis::class_names())), DegenerateInputError);
  m.counts[2][2] = -1;
  EXPECT_THROW(summarize(m), FormatError);
  EXPECT_EQ(parse_averaging(to_string(Averaging::Macro)), Averaging::Macro);
  EXPECT_THROW(parse_averaging("micro"), ParameterError);
}

TEST(MetricsIo, ConfusionAndSummaryRoundTrip) {
  testutil::TempDir dir;
  const auto m = reported_matrix();
  write_confusion(m, dir / "confusion.csv");
  const auto back = read_confusion(dir / "confusion.csv");
  EXPECT_EQ(back.class_names, m.class_names);
  EXPECT_EQ(back.counts, m.counts);
  const auto text = testutil::read_file(dir / "confusion.csv");
  EXPECT_EQ(text.substr(0, text.find('\n')), "true\\predicted,VeryGood,Good,Fair,Poor,VeryPoor");

  const auto s = summarize(m, Averaging::Macro);
  write_summary(s, dir / "summary.json");
  const auto t = read_summary(dir / "summary.json");
  EXPECT_EQ(t.accuracy, s.accuracy);
  EXPECT_EQ(t.correct, 723);
  EXPECT_EQ(t.total, 775);
  EXPECT_EQ(t.averaging, Averaging::Macro);
  EXPECT_EQ(t.weighted.f1, s.weighted.f1);
  EXPECT_EQ(t.macro.precision, s.macro.precision);
  ASSERT_EQ(t.per_class.size(), 5u);
  EXPECT_EQ(t.per_class[2].name, "Fair");
  EXPECT_EQ(t.per_class[2].precision, s.per_class[2].precision);
  EXPECT_EQ(t.per_class[2].predicted, 175);

  testutil::write_file(dir / "ragged.csv", "true\\predicted,A,B\nA,1,2\nB,3\n");
  EXPECT_THROW(read_confusion(dir / "ragged.csv"), FormatError);
  testutil::write_file(dir / "bad.json", "{}");
  EXPECT_THROW(read_summary(dir / "bad.json"), FormatError);
}
