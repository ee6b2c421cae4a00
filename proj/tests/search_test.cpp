#include <gtest/gtest.h>

#include "oracle.hpp"
#include "zsf/search.hpp"

using namespace zsf;

namespace {

std::vector<std::vector<Flat>> all_zsf(const GroupSpec& G, unsigned k) {
  std::vector<std::vector<Flat>> out;
  enumerate_zsf_subsets(G, k, [&](std::span<const Flat> S, std::uint32_t) { out.emplace_back(S.begin(), S.end()); });
  return out;
}

bool has_witness(const SearchReport& r, std::vector<Flat> S) {
  std::sort(S.begin(), S.end());
  return std::any_of(r.witnesses.begin(), r.witnesses.end(), [&](const Witness& w) { return w.elements == S; });
}

}  // namespace

TEST(Enumerate, SmallExamples) {
  EXPECT_EQ(all_zsf(parse_group("Z5"), 2), (std::vector<std::vector<Flat>>{{1, 2}, {1, 3}, {2, 4}, {3, 4}}));
  EXPECT_EQ(all_zsf(parse_group("Z2"), 1), std::vector<std::vector<Flat>>{{1}});
  EXPECT_TRUE(all_zsf(parse_group("Z9"), 8).empty());
}

TEST(Enumerate, SigmaReportedMatchesOracle) {
  auto G = parse_group("Z2xZ6");
  oracle::Group O{G.moduli()};
  std::uint64_t n = enumerate_zsf_subsets(G, 4, [&](std::span<const Flat> S, std::uint32_t sigma) {
    std::vector<std::uint32_t> v(S.begin(), S.end());
    EXPECT_EQ(sigma, oracle::sigma(O, v).size());
    EXPECT_TRUE(std::is_sorted(S.begin(), S.end()));
  });
  EXPECT_EQ(n, oracle::zsf_count(O, 4));
}

TEST(Enumerate, KOutOfRange) {
  auto G = parse_group("Z5");
  auto noop = [](std::span<const Flat>, std::uint32_t) {};
  for (unsigned k : {0U, 5U, 9U}) {
    try {
      enumerate_zsf_subsets(G, k, noop);
      ADD_FAILURE() << k;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::invalid_argument);
    }
  }
}

TEST(Enumerate, SequencesMatchOracle) {
  auto G = parse_group("Z7");
  oracle::Group O{G.moduli()};
  std::uint64_t count = 0;
  enumerate_zsf_sequences(G, 2, 6, [&](std::span<const Flat> seq, std::uint32_t h, std::uint32_t sigma) {
    std::vector<std::uint32_t> v(seq.begin(), seq.end());
    auto sums = oracle::sigma(O, v);
    EXPECT_EQ(sums.count(0), 0U);
    EXPECT_EQ(sigma, sums.size());
    std::uint32_t best = 0;
    for (auto x : v) best = std::max<std::uint32_t>(best, static_cast<std::uint32_t>(std::count(v.begin(), v.end(), x)));
    EXPECT_EQ(h, best);
    ++count;
  });
  // oracle: non-decreasing sequences of nonzero elements, lengths 2..6
  std::uint64_t expect = 0;
  std::vector<std::uint32_t> seq;
  auto rec = [&](auto&& self, std::uint32_t start) -> void {
    if (seq.size() >= 2 && !oracle::sigma(O, seq).count(0)) ++expect;
    if (seq.size() == 6) return;
    for (std::uint32_t g = start; g < 7; ++g) {
      seq.push_back(g);
      self(self, g);
      seq.pop_back();
    }
  };
  rec(rec, 1);
  EXPECT_EQ(count, expect);
}

TEST(MinSigma, Examples) {
  auto z20 = min_sigma(parse_group("Z20"), 6);
  EXPECT_EQ(z20.min_sigma, 19U);
  EXPECT_EQ(z20.conjectured(), 19U);
  EXPECT_TRUE(has_witness(z20, {1, 3, 4, 5, 6, 18}));
  EXPECT_TRUE(has_witness(z20, {1, 4, 5, 9, 12, 17}));
  EXPECT_EQ(min_sigma(parse_group("Z9"), 4).min_sigma, 8U);
  EXPECT_EQ(min_sigma(parse_group("Z14"), 5).min_sigma, 13U);
  auto z7 = min_sigma(parse_group("Z7"), 3);
  EXPECT_EQ(z7.min_sigma, 6U);
  EXPECT_TRUE(has_witness(z7, {1, 2, 3}));
  auto none = min_sigma(parse_group("Z9"), 8);
  EXPECT_EQ(none.zsf_count, 0U);
  EXPECT_FALSE(none.min_sigma.has_value());
  EXPECT_TRUE(none.witnesses.empty());
}

TEST(MinSigma, MatchesOracle) {
  for (const char* g : {"Z7", "Z8", "Z2xZ4", "Z3xZ3", "Z10", "Z2xZ6"}) {
    auto G = parse_group(g);
    oracle::Group O{G.moduli()};
    for (unsigned k = 1; k <= 4 && k < G.order(); ++k) {
      auto r = min_sigma(G, k);
      auto count = oracle::zsf_count(O, k);
      EXPECT_EQ(r.zsf_count, count) << g << " k=" << k;
      if (count) {
        EXPECT_EQ(*r.min_sigma, oracle::min_sigma(O, k)) << g << " k=" << k;
      }
    }
  }
}

TEST(MinSigma, WitnessesCarryFamilies) {
  auto r = min_sigma(parse_group("Z20"), 6);
  for (const auto& w : r.witnesses) EXPECT_FALSE(w.forms.empty());
  auto bare = min_sigma(parse_group("Z20"), 6, {1, false, false});
  for (const auto& w : bare.witnesses) EXPECT_TRUE(w.forms.empty());
}

TEST(MinSigma, FastCyclicIgnoredOffCyclicGroups) {
  auto G = parse_group("Z2xZ10");
  auto fast = min_sigma(G, 6, {1, true, true});
  EXPECT_FALSE(fast.fast_cyclic);
  EXPECT_EQ(fast.zsf_count, min_sigma(G, 6).zsf_count);
}

TEST(Classify, ExtremalExamples) {
  auto z20 = classify_extremal(parse_group("Z20"), 6, 19);
  EXPECT_TRUE(z20.outcome.passed);
  EXPECT_EQ(z20.outcome.stat("valid_s6-v"), 0);
  EXPECT_GT(z20.outcome.stat("match_s6-iii"), 0);
  EXPECT_GT(z20.outcome.stat("match_s6-iv"), 0);
  for (const auto& w : z20.witnesses) {
    for (const auto& m : w.forms) EXPECT_NE(m.form, FormId::S6_V);
  }
  auto z9 = classify_extremal(parse_group("Z9"), 4, 8);
  EXPECT_TRUE(z9.outcome.passed);
  EXPECT_EQ(z9.outcome.claim, "lemma-s4-classify");
  for (const auto& w : z9.witnesses) {
    ASSERT_FALSE(w.forms.empty());
    EXPECT_EQ(parse_group("Z9").order_of(w.forms.front().params.front()), 9U);
  }
  auto z2z10 = classify_extremal(parse_group("Z2xZ10"), 6, 19);
  EXPECT_TRUE(z2z10.outcome.passed);
  EXPECT_GT(z2z10.outcome.stat("match_s6-i"), 0);
  EXPECT_GT(z2z10.outcome.stat("match_s6-ii"), 0);
  EXPECT_GT(z2z10.outcome.stat("match_s6-v"), 0);
  EXPECT_THROW(classify_extremal(parse_group("Z20"), 6, 18), Error);
}

TEST(Classify, GroupsWithoutOrderNine) {
  auto r = classify_extremal(parse_group("Z13"), 4, 8);
  EXPECT_EQ(r.outcome.checked, oracle::zsf_count(oracle::Group{{13}}, 4));
  EXPECT_TRUE(r.outcome.passed);
  auto z10 = classify_extremal(parse_group("Z2xZ5"), 4, 8);
  EXPECT_TRUE(z10.outcome.passed);
}

TEST(Bounds, SmallGroups) {
  for (const char* g : {"Z13", "Z16", "Z2xZ8", "Z3", "Z3xZ5"}) {
    for (const auto& o : verify_lower_bounds(parse_group(g), 1, 7)) {
      EXPECT_TRUE(o.passed) << o.claim << ' ' << g;
    }
  }
  auto odd = verify_lower_bounds(parse_group("Z13"), 1, 7);
  ASSERT_EQ(odd.size(), 7U);
  EXPECT_EQ(odd[5].claim, "cor-odd-20");
  EXPECT_EQ(verify_lower_bounds(parse_group("Z16"), 1, 7).size(), 5U);
  EXPECT_THROW(verify_lower_bounds(parse_group("Z16"), 0, 3), Error);
}

TEST(Bounds, OrderTwoCaseInZ16) {
  auto G = parse_group("Z16");
  std::uint32_t best = UINT32_MAX;
  enumerate_zsf_subsets(G, 4, [&](std::span<const Flat> S, std::uint32_t sigma) {
    if (std::find(S.begin(), S.end(), 8U) != S.end()) best = std::min(best, sigma);
  });
  EXPECT_GE(best, 9U);
  auto G3 = parse_group("Z3");
  EXPECT_EQ(min_sigma(G3, 1).min_sigma, 1U);
}

TEST(Lemmas, AdditivityAndDuplicates) {
  for (const char* g : {"Z12", "Z2xZ6", "Z3xZ3", "Z15"}) {
    auto G = parse_group(g);
    EXPECT_TRUE(verify_additivity(G, 5).passed) << g;
    auto d = verify_duplicate_sums(G, 5);
    EXPECT_TRUE(d.passed) << g;
    EXPECT_GT(d.stat("clause2_checks"), 0) << g;
  }
}

TEST(Quotient, ExampleSplitIsTight) {
  auto G = parse_group("Z8");
  std::vector<Flat> s1{4}, s2{1, 2};
  auto sides = quotient_bound_sides(G, s1, s2);
  EXPECT_EQ(sides.s1, 1U);
  EXPECT_EQ(sides.q, 3U);
  EXPECT_EQ(sides.rhs(), 7U);
  EXPECT_EQ(sides.lhs, 7U);
}

TEST(Quotient, DegenerateSplit) {
  auto G = parse_group("Z20");
  std::vector<Flat> S{18, 1, 3, 4, 5, 6};
  auto sides = quotient_bound_sides(G, S, {});
  EXPECT_EQ(sides.q, 0U);
  EXPECT_EQ(sides.rhs(), sides.s1);
  EXPECT_EQ(sides.lhs, 19U);
  EXPECT_THROW(quotient_bound_sides(G, {}, S), Error);
}

TEST(Quotient, RandomSplitsOfFamilyThree) {
  auto G = parse_group("Z20");
  std::vector<Flat> S{18, 1, 3, 4, 5, 6};
  std::mt19937 rng(11);
  for (int t = 0; t < 100; ++t) {
    std::vector<Flat> s1, s2;
    for (Flat x : S) (rng() & 1U ? s1 : s2).push_back(x);
    if (s1.empty()) continue;
    auto sides = quotient_bound_sides(G, s1, s2);
    EXPECT_GE(sides.lhs, sides.rhs());
  }
}

TEST(Quotient, LiteralCountingHasCounterexample) {
  auto G = parse_group("Z6");
  std::vector<Flat> s1{1, 3}, s2{4};
  auto sides = quotient_bound_sides(G, s1, s2);
  EXPECT_EQ(sides.lhs, 5U);
  EXPECT_LT(sides.lhs, sides.literal_rhs());
  EXPECT_GE(sides.lhs, sides.rhs());
}

TEST(Quotient, FuzzPasses) {
  auto o = verify_quotient_bound(parse_group("Z20"), 500, 3);
  EXPECT_TRUE(o.passed);
  EXPECT_EQ(o.checked, 500U);
}

TEST(Shapes, GroupsWithSixSubsets) {
  for (const char* g : {"Z20", "Z21", "Z2xZ10", "Z22", "Z3xZ9"}) {
    auto o = verify_class_shapes(parse_group(g));
    EXPECT_TRUE(o.passed) << g << ' ' << (o.counterexample ? o.counterexample->details : "");
    EXPECT_GT(o.checked, 0U) << g;
  }
}

TEST(Multiplicity, SmallCyclic) {
  auto o = verify_multiplicity_bound(11);
  EXPECT_TRUE(o.passed);
  EXPECT_THROW(verify_multiplicity_bound(16), Error);
}
