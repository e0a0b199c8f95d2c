#include <gtest/gtest.h>

#include "germkit/boardman.hpp"
#include "germkit/equivlab.hpp"
#include "germkit/invariants.hpp"
#include "germkit/parse.hpp"
#include "germkit/presets.hpp"
#include "germkit/report.hpp"
#include "oracles.hpp"

using namespace germkit;

namespace {

MapGerm germ(std::size_t n, std::initializer_list<const char*> comps) {
  const auto vars = default_var_names(n);
  std::vector<Polynomial> ps;
  for (auto c : comps) ps.push_back(parse_polynomial(c, vars));
  return MapGerm(n, std::move(ps));
}

std::string json(const BoardmanSymbol& s) { return to_json(s).dump(); }

}  // namespace

TEST(Invariants, TwoComponentExample) {
  const auto f = germ(2, {"x^2 + y^3", "x^2*y"});
  EXPECT_EQ(order(f), 2u);
  EXPECT_EQ(rank(f), 0u);
  EXPECT_EQ(first_homogeneous_part(f), germ(2, {"x^2", "0"}));
}

TEST(Invariants, IdentityAndZero) {
  const auto id = MapGerm::identity(3);
  EXPECT_EQ(order(id), 1u);
  EXPECT_EQ(rank(id), 3u);
  EXPECT_EQ(first_homogeneous_part(id), id);
  EXPECT_THROW(order(germ(2, {"0"})), UndefinedInvariantError);
  EXPECT_EQ(rank(germ(2, {"0"})), 0u);
}

TEST(Invariants, GraphMapIsImmersion) {
  const auto g = graph_map(germ(2, {"x^3 - y^2"}));
  EXPECT_EQ(g.size(), 3u);
  EXPECT_EQ(rank(g), 2u);
}

TEST(Boardman, PaperGoldens) {
  EXPECT_EQ(json(boardman_symbol(preset_germ("paper-f0").germ)),
            R"({"runs":[[2,3],[1,5],[0,null]],"status":"stabilized_zero"})");
  EXPECT_EQ(json(boardman_symbol(preset_germ("paper-f1").germ)),
            R"({"runs":[[2,3],[1,4],[0,null]],"status":"stabilized_zero"})");
  EXPECT_EQ(json(boardman_symbol(preset_germ("paper-f").germ)),
            R"({"runs":[[2,3],[1,1],[0,null]],"status":"stabilized_zero"})");
  EXPECT_EQ(json(boardman_symbol(preset_germ("paper-g").germ)),
            R"({"runs":[[2,3],[1,1],[0,null]],"status":"stabilized_zero"})");
}

TEST(Boardman, TextNotation) {
  EXPECT_EQ(symbol_text(boardman_symbol(preset_germ("paper-f0").germ)), "(2, 2, 2, 1, 1, 1, 1, 1, 0, ...)");
  EXPECT_EQ(symbol_text(boardman_symbol(germ(2, {"x^2"}))), "(2, 1, ...)");
}

TEST(Boardman, SquareSteadyTailFollowsHandTrace) {
  const std::vector<std::string> xy = {"x", "y"};
  GeneratorSet g(germ(2, {"x^2"}));
  for (const auto& step : oracle::x_squared_trace()) {
    std::vector<std::string> printed;
    for (const auto& p : g.gens()) printed.push_back(print_polynomial(monic(p), xy));
    EXPECT_EQ(printed, step.ideal);
    const auto i = critical_index(g);
    EXPECT_EQ(i, step.value);
    g = jacobian_extension(g, 2 - i + 1);
  }
  const auto s = boardman_symbol(germ(2, {"x^2"}));
  EXPECT_EQ(json(s), R"({"runs":[[2,1],[1,null]],"status":"steady_tail"})");
  EXPECT_EQ(s.expand(5), (std::vector<std::size_t>{2, 1, 1, 1, 1}));
}

TEST(Boardman, ImmersionsAndSubmersions) {
  EXPECT_EQ(json(boardman_symbol(MapGerm::identity(2))), R"({"runs":[[0,null]],"status":"stabilized_zero"})");
  EXPECT_EQ(json(boardman_symbol(germ(2, {"x"}))), R"({"runs":[[1,null]],"status":"steady_tail"})");
  EXPECT_EQ(boardman_symbol(germ(1, {"x^5"})).expand(6), (std::vector<std::size_t>{1, 1, 1, 1, 0, 0}));
}

TEST(Boardman, ExtensionKeepsOriginalsFirst) {
  GeneratorSet g(germ(2, {"x^3", "y^2"}));
  const auto e = jacobian_extension(g, 1);
  ASSERT_GE(e.size(), 2u);
  EXPECT_EQ(e.provenance()[0], GeneratorSet::kOriginal);
  EXPECT_EQ(e.provenance().back(), 1u);
  EXPECT_THROW(jacobian_extension(g, 3), StructuralError);
}

TEST(Boardman, GeneratorCapRaisesWithPrefix) {
  BoardmanOptions opts;
  opts.generator_cap = 2;
  try {
    boardman_symbol(germ(3, {"x^3 + y^3 + z^3", "x*y*z"}), opts);
    FAIL();
  } catch (const GeneratorBlowup& e) {
    EXPECT_FALSE(e.partial().expand(64).empty());
    EXPECT_EQ(e.partial().status(), SymbolStatus::truncated);
  }
}

TEST(Boardman, ReducePruningMatchesMultiplesPruning) {
  const CorpusSpec spec;
  for (std::size_t i = 0; i < 40; ++i) {
    const auto f = random_germ(spec, i);
    const auto a = boardman_symbol(GeneratorSet(f, Pruning::reduce));
    BoardmanSymbol b;
    try {
      b = boardman_symbol(GeneratorSet(f, Pruning::multiples));
    } catch (const SymbolResourceError& e) {
      b = e.partial();
    }
    const auto k = comparable_prefix(a, b, 64);
    EXPECT_EQ(a.expand(k), b.expand(k)) << "germ " << i;
  }
}

TEST(Boardman, JetPrefixAgreesWithIterationOnCorpus) {
  const CorpusSpec spec;
  for (std::size_t i = 0; i < spec.count; ++i) {
    const auto f = random_germ(spec, i);
    const auto a = boardman_symbol(f);
    const auto b = boardman_prefix_deepening(f);
    EXPECT_EQ(a.expand(64), b.expand(64)) << "germ " << i;
  }
}

TEST(Boardman, JetPrefixIsInvariantUnderSmoothMoves) {
  const auto f = preset_germ("paper-f0").germ;
  const CorpusSpec spec;
  for (std::size_t m = 1; m <= 3; ++m) {
    const auto g = apply_contact_move(f, random_move(spec, m, 2, 1));
    EXPECT_EQ(json(boardman_prefix_deepening(g)), json(boardman_symbol(f)));
  }
}

TEST(Boardman, WorkBudgetKeepsAnExactPrefix) {
  const auto f = apply_contact_move(germ(2, {"x^2*y + y^4", "x^3"}), random_move(CorpusSpec{}, 3, 2, 2));
  const auto full = boardman_prefix(f, 16).expand(16);
  try {
    boardman_prefix(f, 16, 512, 2000);
    FAIL() << "budget not hit";
  } catch (const WorkBudgetExceeded& e) {
    const auto part = e.partial().expand(16);
    EXPECT_LT(part.size(), 16u);
    EXPECT_EQ(part, std::vector<std::size_t>(full.begin(), full.begin() + static_cast<long>(part.size())));
  }
}

TEST(Boardman, PropertyOneOnCorpus) {
  const CorpusSpec spec;
  for (std::size_t i = 0; i < spec.count; ++i) {
    const auto f = random_germ(spec, i);
    EXPECT_EQ(boardman_symbol(f).expand(1).at(0), f.nvars() - rank(f)) << "germ " << i;
  }
}

TEST(Boardman, PropertyTwoOnRankZeroCorpus) {
  const CorpusSpec spec;
  std::size_t seen = 0;
  for (std::size_t i = 0; i < spec.count; ++i) {
    const auto f = random_germ(spec, i);
    if (rank(f) != 0) continue;
    ++seen;
    const auto s = boardman_symbol(f);
    EXPECT_EQ(s.runs().front().count.value_or(64), order(f) - 1) << "germ " << i;
  }
  EXPECT_GT(seen, 50u);
}

TEST(Boardman, RedundantGeneratorsChangeNothing) {
  const CorpusSpec spec;
  const auto germs = corpus(spec);
  const auto rep = independence_report(germs, spec, BoardmanOptions{});
  EXPECT_EQ(rep.violations, 0u);
  EXPECT_EQ(rep.incomplete, 0u);
  for (const auto& c : rep.cases) EXPECT_EQ(c.augmented.size(), germs[c.germ_index].size() + 3);
}
