#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "pavesat/csv.hpp"
#include "pavesat/error.hpp"
#include "pavesat/random.hpp"
#include "pavesat/section_key.hpp"

using namespace pavesat;

TEST(Csv, QuotedFieldsAndBlankLines) {
  std::istringstream in("name,value\n\"a, b\",1.5\r\n\n\"say \"\"hi\"\"\", -2\n");
  const auto t = csv::parse(in, "t.csv");
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0][0], "a, b");
  EXPECT_EQ(t.rows[1][0], "say \"hi\"");
  EXPECT_DOUBLE_EQ(t.number(0, t.column("value")), 1.5);
  EXPECT_DOUBLE_EQ(t.number(1, 1), -2.0);
}

TEST(Csv, ErrorsNameFileLineAndColumn) {
  std::istringstream in("a,b\n1,x\n");
  const auto t = csv::parse(in, "bad.csv");
  try {
    t.number(0, 1);
    FAIL();
  } catch (const FormatError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("bad.csv"), std::string::npos);
    EXPECT_NE(msg.find("line 2"), std::string::npos);
    EXPECT_NE(msg.find("'b'"), std::string::npos);
  }
  EXPECT_THROW(t.column("missing"), FormatError);

  std::istringstream ragged("a,b\n1\n");
  EXPECT_THROW(csv::parse(ragged, "r.csv"), FormatError);
  std::istringstream empty("");
  EXPECT_THROW(csv::parse(empty, "e.csv"), FormatError);
}

TEST(Csv, WriteRowQuotesAndRoundTrips) {
  std::ostringstream out;
  csv::write_row(out, {"plain", "with,comma", "with\"quote"});
  EXPECT_EQ(out.str(), "plain,\"with,comma\",\"with\"\"quote\"\n");
  std::istringstream in("h1,h2,h3\n" + out.str());
  const auto t = csv::parse(in);
  EXPECT_EQ(t.rows[0][1], "with,comma");
  EXPECT_EQ(t.rows[0][2], "with\"quote");
}

TEST(Csv, FormatNumberIsShortestRoundTrip) {
  EXPECT_EQ(csv::format_number(0.1), "0.1");
  EXPECT_EQ(csv::format_number(12.0), "12");
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.uniform(-1e6, 1e6);
    std::istringstream in("v\n" + csv::format_number(v) + "\n");
    EXPECT_EQ(csv::parse(in).number(0, 0), v);
  }
}

TEST(Random, KnownVectors) {
  EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
  // The 10000th output of mt19937_64 with the default seed.
  Rng rng(5489);
  for (int i = 0; i < 9999; ++i) rng.next();
  EXPECT_EQ(rng.next(), 9981545732273789042ULL);
}

TEST(Random, DerivedSeedsAreDistinctAndStable) {
  std::set<std::uint64_t> seen;
  for (const char* tag : {"split", "oversample", "augment", "init", "epoch"}) seen.insert(derive_seed(42, tag));
  for (int i = 0; i < 100; ++i) seen.insert(derive_seed(42, "epoch", i));
  EXPECT_EQ(seen.size(), 105u);
  EXPECT_EQ(derive_seed(42, "split"), derive_seed(42, "split"));
  EXPECT_NE(derive_seed(42, "split"), derive_seed(43, "split"));
}

TEST(Random, UniformAndBelowRanges) {
  Rng rng(9);
  std::array<int, 7> counts{};
  for (int i = 0; i < 70000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ++counts[rng.below(7)];
  }
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
}

TEST(Random, ShuffleIsAPermutation) {
  Rng rng(1);
  std::vector<int> v(50);
  for (int i = 0; i < 50; ++i) v[i] = i;
  auto w = v;
  rng.shuffle(w.begin(), w.end());
  EXPECT_NE(v, w);
  std::sort(w.begin(), w.end());
  EXPECT_EQ(v, w);
}

TEST(SectionKey, MilliOffsetsAndIds) {
  const auto a = SectionKey::from_miles("FM 1960", 12.0, 12.5);
  const auto b = SectionKey::from_miles("FM 1960", 12.0000001, 12.4999999);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.id(), "FM-1960_12.000_12.500");
  EXPECT_DOUBLE_EQ(a.offset_to(), 12.5);
  EXPECT_LT(SectionKey::from_miles("A", 1, 2), SectionKey::from_miles("A", 2, 3));
}
