#include <gtest/gtest.h>

#include <map>
#include <set>

#include "pavesat/dataset/manifest.hpp"
#include "pavesat/dataset/samples.hpp"
#include "pavesat/error.hpp"
#include "test_support.hpp"

using namespace pavesat;
using namespace pavesat::dataset;
using pmis::ConditionClass;

namespace {

std::vector<LabeledSample> make_samples(const std::vector<int>& counts_per_class) {
  std::vector<LabeledSample> out;
  int id = 0;
  // Interleave classes so order preservation is observable.
  for (int round = 0;; ++round) {
    bool any = false;
    for (int c = 0; c < static_cast<int>(counts_per_class.size()); ++c) {
      if (round >= counts_per_class[c]) continue;
      any = true;
      const std::string name = "S" + std::to_string(id++);
      out.push_back({name, "crops/" + name + ".png", pmis::class_from_index(c)});
    }
    if (!any) break;
  }
  return out;
}

pmis::LabelRow label(const char* route, double from, double to, ConditionClass c) {
  return {SectionKey::from_miles(route, from, to), 50.0, c};
}

}  // namespace

TEST(JoinLabels, DisjointKeysRejectEverything) {
  const std::vector<SectionImageRef> images = {{SectionKey::from_miles("A", 0, 0.5), "a.png"}};
  const std::vector<pmis::LabelRow> rows = {label("B", 0, 0.5, ConditionClass::Good)};
  const auto r = join_labels(images, rows);
  EXPECT_TRUE(r.samples.empty());
  ASSERT_EQ(r.rejects.size(), 2u);
  EXPECT_EQ(r.rejects[0].reason, "image without PMIS record");
  EXPECT_EQ(r.rejects[1].reason, "PMIS record without image");
}

TEST(JoinLabels, OneToOneKeepsImageOrder) {
  const std::vector<SectionImageRef> images = {{SectionKey::from_miles("B", 1, 1.5), "b.png"},
                                               {SectionKey::from_miles("A", 0, 0.5), "a.png"}};
  const std::vector<pmis::LabelRow> rows = {label("A", 0, 0.5, ConditionClass::Poor),
                                            label("B", 1.0000001, 1.5, ConditionClass::Good)};
  const auto r = join_labels(images, rows);
  ASSERT_EQ(r.samples.size(), 2u);
  EXPECT_TRUE(r.rejects.empty());
  EXPECT_EQ(r.samples[0].sample_id, "B_1.000_1.500");
  EXPECT_EQ(r.samples[0].label, ConditionClass::Good);
  EXPECT_EQ(r.samples[1].image_ref, "a.png");
}

TEST(JoinLabels, DuplicatesAreAmbiguous) {
  const std::vector<SectionImageRef> images = {{SectionKey::from_miles("A", 0, 0.5), "a.png"}};
  const std::vector<pmis::LabelRow> rows = {label("A", 0, 0.5, ConditionClass::Poor),
                                            label("A", 0, 0.5, ConditionClass::Good)};
  try {
    join_labels(images, rows);
    FAIL();
  } catch (const AmbiguityError& e) {
    EXPECT_NE(std::string(e.what()).find("A [0.000, 0.500]"), std::string::npos);
  }
  const std::vector<SectionImageRef> twice = {images[0], images[0]};
  EXPECT_THROW(join_labels(twice, std::vector<pmis::LabelRow>{}), AmbiguityError);
}

TEST(Split, PlainFractionAndDeterminism) {
  const auto samples = make_samples({2, 2, 2, 2, 2});
  const auto a = split(samples, {0.8, 5, false});
  EXPECT_EQ(a.train.size(), 8u);
  EXPECT_EQ(a.test.size(), 2u);
  const auto b = split(samples, {0.8, 5, false});
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);
  EXPECT_THROW(split(samples, {1.0, 5, false}), ParameterError);
  EXPECT_THROW(split(std::span(samples).first(1), {0.8, 5, false}), ParameterError);
}

TEST(Split, StratifiedKeepsProportions) {
  const auto samples = make_samples({40, 30, 15, 10, 5});
  const auto r = split(samples, {0.8, 17, true});
  EXPECT_EQ(count_classes(r.train), (ClassCounts{32, 24, 12, 8, 4}));
  EXPECT_EQ(count_classes(r.test), (ClassCounts{8, 6, 3, 2, 1}));
  // Partition with preserved input order.
  std::vector<LabeledSample> merged;
  std::size_t i = 0, j = 0;
  for (const auto& s : samples) {
    if (i < r.train.size() && r.train[i] == s) merged.push_back(r.train[i++]);
    else if (j < r.test.size() && r.test[j] == s) merged.push_back(r.test[j++]);
  }
  EXPECT_EQ(merged, samples);
}

TEST(Split, StratifiedLargestRemainderOracle) {
  Rng rng(4);
  for (int t = 0; t < 200; ++t) {
    std::vector<int> counts(5);
    for (auto& c : counts) c = static_cast<int>(rng.below(30));
    counts[rng.below(5)] += 2;
    const auto samples = make_samples(counts);
    const double fraction = rng.uniform(0.05, 0.95);
    const auto r = split(samples, {fraction, t, true});
    const auto got = count_classes(r.train);
    const double n = static_cast<double>(samples.size());
    const auto total = static_cast<std::size_t>(std::llround(fraction * n));
    std::size_t sum = 0;
    for (int c = 0; c < 5; ++c) {
      const double exact = static_cast<double>(total) * counts[c] / n;
      EXPECT_LE(std::abs(static_cast<double>(got[c]) - exact), 1.0) << t;
      sum += got[c];
    }
    EXPECT_EQ(sum, total);
  }
}

TEST(Split, EmptyClassWarns) {
  const auto samples = make_samples({10, 0, 5, 0, 5});
  const auto r = split(samples, {0.8, 1, true});
  EXPECT_EQ(r.warnings.size(), 2u);
  EXPECT_EQ(r.train.size(), 16u);
}

TEST(Oversample, BalancesToLargestClass) {
  const auto balanced = make_samples({3, 3});
  EXPECT_EQ(oversample(balanced, 1), balanced);

  const auto two = make_samples({10, 4});
  const auto out = oversample(two, 1);
  EXPECT_EQ(count_classes(out), (ClassCounts{10, 10, 0, 0, 0}));
  EXPECT_TRUE(std::equal(two.begin(), two.end(), out.begin()));

  const auto five = make_samples({7, 5, 3, 2, 1});
  const auto all = oversample(five, 99);
  EXPECT_EQ(all.size(), 35u);
  EXPECT_EQ(count_classes(all), (ClassCounts{7, 7, 7, 7, 7}));
  std::set<std::string> original;
  for (const auto& s : five) original.insert(s.sample_id);
  for (const auto& s : all) EXPECT_TRUE(original.count(s.sample_id));
  EXPECT_EQ(oversample(five, 99), all);
}

TEST(Manifest, BuildWriteReadRoundTrip) {
  testutil::TempDir dir;
  const auto samples = make_samples({40, 30, 15, 10, 5});
  const auto m = build_manifest(samples, {0.8, 3, true}, 4);
  EXPECT_EQ(m.train_counts_before, (ClassCounts{32, 24, 12, 8, 4}));
  EXPECT_EQ(m.train_counts_after, (ClassCounts{32, 32, 32, 32, 32}));
  EXPECT_EQ(m.test_counts, (ClassCounts{8, 6, 3, 2, 1}));
  EXPECT_EQ(m.config_hash.size(), 16u);
  write_manifest(dir / "m.json", m);
  const auto back = read_manifest(dir / "m.json");
  EXPECT_EQ(back.train, m.train);
  EXPECT_EQ(back.test, m.test);
  EXPECT_EQ(back.config_hash, m.config_hash);
  EXPECT_EQ(back.oversample_seed, 4u);
  write_manifest(dir / "again.json", back);
  EXPECT_EQ(testutil::read_file(dir / "m.json"), testutil::read_file(dir / "again.json"));
  ASSERT_NE(back.find(m.test.front().sample_id), nullptr);
  EXPECT_EQ(back.find("nope"), nullptr);

  const auto other = build_manifest(samples, {0.8, 3, true}, 5);
  EXPECT_NE(other.config_hash, m.config_hash);
}

TEST(Manifest, ValidationCatchesLeaksAndImbalance) {
  DatasetManifest m;
  m.train = {{"a", "a.png", ConditionClass::Good}};
  m.test = {{"a", "a.png", ConditionClass::Good}};
  EXPECT_THROW(m.validate(), ParameterError);
  m.test.clear();
  m.train_counts_after = {3, 2, 0, 0, 0};
  EXPECT_THROW(m.validate(), ParameterError);

  testutil::TempDir dir;
  testutil::write_file(dir / "bad.json", "{\"format\": \"pavesat-manifest\"}");
  EXPECT_THROW(read_manifest(dir / "bad.json"), FormatError);
}

TEST(Manifest, RejectsCsv) {
  testutil::TempDir dir;
  const std::vector<Reject> rejects = {{SectionKey::from_miles("A", 0, 0.5), "image without PMIS record"}};
  write_rejects(dir / "r.csv", rejects);
  EXPECT_EQ(testutil::read_file(dir / "r.csv"),
            "route_name,offset_from,offset_to,reason\nA,0,0.5,image without PMIS record\n");
}
