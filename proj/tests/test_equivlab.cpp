#include <gtest/gtest.h>

#include "germkit/equivlab.hpp"
#include "germkit/invariants.hpp"
#include "germkit/parse.hpp"
#include "germkit/report.hpp"

using namespace germkit;

TEST(Equivlab, CorpusIsDeterministicAndInRange) {
  const CorpusSpec spec;
  for (std::size_t i = 0; i < spec.count; ++i) {
    const auto f = random_germ(spec, i);
    EXPECT_EQ(f, random_germ(spec, i));
    EXPECT_GE(f.nvars(), 1u);
    EXPECT_LE(f.nvars(), 3u);
    EXPECT_LE(f.size(), 2u);
    EXPECT_FALSE(f.is_zero());
    for (const auto& c : f.components()) {
      EXPECT_EQ(c.constant_term(), 0);
      EXPECT_LE(c.degree(), 5);
    }
  }
  CorpusSpec other = spec;
  other.seed = 7;
  std::size_t differ = 0;
  for (std::size_t i = 0; i < 20; ++i) differ += random_germ(spec, i) != random_germ(other, i);
  EXPECT_GT(differ, 10u);
}

TEST(Equivlab, SeedStreamsAreIndependent) {
  EXPECT_NE(derive_seed(42, 1, 0), derive_seed(42, 2, 0));
  EXPECT_NE(derive_seed(42, 1, 0), derive_seed(42, 1, 1));
  EXPECT_EQ(derive_seed(42, 1, 5), derive_seed(42, 1, 5));
}

TEST(Equivlab, MovesAreInvertibleAtTheOrigin) {
  const CorpusSpec spec;
  for (std::size_t i = 1; i <= 100; ++i) {
    const auto m = random_move(spec, i, 1 + i % 3, 1 + i % 2);
    EXPECT_TRUE(is_valid_move(m));
  }
  const auto id = identity_move(2, 2);
  const auto f = random_germ(spec, 3);
  EXPECT_EQ(apply_contact_move(f, identity_move(f.nvars(), f.size())), f);
  EXPECT_TRUE(is_valid_move(id));
}

TEST(Equivlab, MovesPreserveOrderAndRankOnCorpus) {
  const CorpusSpec spec;
  for (std::size_t i = 0; i < spec.count; ++i) {
    const auto f = random_germ(spec, i);
    const auto g = apply_contact_move(f, random_move(spec, 1000 * i + 1, f.nvars(), f.size()));
    EXPECT_EQ(order(f), order(g)) << i;
    EXPECT_EQ(rank(f), rank(g)) << i;
  }
}

TEST(Equivlab, SmallCampaignHasNoViolations) {
  CorpusSpec spec;
  spec.count = 30;
  const auto rep = invariance_report(spec, 2, BoardmanOptions{});
  EXPECT_EQ(rep.cases.size(), 60u);
  EXPECT_EQ(rep.violations, 0u);
  for (const auto& c : rep.cases) {
    EXPECT_GE(c.compared_steps, 16u);
    EXPECT_FALSE(c.violation);
  }
}

TEST(Equivlab, CampaignReportIsReproducible) {
  CorpusSpec spec;
  spec.count = 10;
  auto dump = [&] {
    std::string out;
    for (const auto& c : invariance_report(spec, 1, BoardmanOptions{}).cases) {
      out += to_json(c.before).dump() + to_json(c.after).dump();
    }
    return out;
  };
  EXPECT_EQ(dump(), dump());
}

TEST(Equivlab, RedundantCombinationsLieInTheIdeal) {
  const CorpusSpec spec;
  const auto f = random_germ(spec, 8);
  const auto extra = redundant_combinations(spec, 8, f);
  ASSERT_EQ(extra.size(), 3u);
  for (const auto& e : extra) {
    EXPECT_EQ(e.constant_term(), 0);
    EXPECT_GE(e.lowest_degree(), static_cast<long>(order(f)));
  }
}
