#include <gtest/gtest.h>

#include <random>

#include "asp/decide.hpp"
#include "corpus.hpp"
#include "generators.hpp"

using namespace asp;
using asp::testing::corpus_def;
using asp::testing::parse_one;

namespace {

DecideConfig exact_only() {
  DecideConfig cfg;
  cfg.tier3 = false;
  return cfg;
}

int rank(ChainVerdict v) {
  switch (v) {
    case ChainVerdict::NotAlmostSure:
      return 0;
    case ChainVerdict::Unknown:
      return 1;
    case ChainVerdict::AlmostSure:
      return 2;
  }
  return -1;
}

std::size_t count(const GroundChain& g, EdgeKind k) {
  return static_cast<std::size_t>(
      std::count_if(g.edges.begin(), g.edges.end(), [&](const ChainEdge& e) { return e.kind == k; }));
}

Definition stream_with(const char* shape, const Rational& p) {
  std::string text = shape;
  text.replace(text.find('P'), 1, to_string(p));
  return parse_one(text);
}

}  // namespace

TEST(GroundChain, FairStreamShape) {
  const Definition d = corpus_def("p12");
  const Ppda p = translate(d);
  const Tier2Evidence ev = analyze_exact(d);
  const GroundChain& g = ev.chain;
  EXPECT_EQ(g.nodes.size(), 4u);
  EXPECT_EQ(g.nodes[g.initial], p.initial());
  EXPECT_EQ(std::count(g.output.begin(), g.output.end(), true), 1);
  EXPECT_EQ(count(g, EdgeKind::Direct), 4u);  // choice x2, cons -> rec, rec -> body
  EXPECT_EQ(count(g, EdgeKind::ExcursionReturn), 1u);
  EXPECT_EQ(count(g, EdgeKind::Divergence), 0u);
  const auto it = std::find_if(g.edges.begin(), g.edges.end(),
                               [](const ChainEdge& e) { return e.kind == EdgeKind::ExcursionReturn; });
  EXPECT_EQ(g.nodes[it->from], p.index_of(Term::tail(Term::rec())));
  EXPECT_EQ(g.nodes[it->to], p.rec_state());
  EXPECT_EQ(it->head, (Head{p.rec_state(), Symbol::Tl}));
  EXPECT_FALSE(ev.summary.divergence_reachable_pessimistic);
  EXPECT_EQ(ev.summary.bottom_sccs.size(), 1u);
  EXPECT_EQ(ev.summary.verdict, ChainVerdict::AlmostSure);
}

TEST(GroundChain, NegativeDriftReachesDivergence) {
  const Tier2Evidence ev = analyze_exact(corpus_def("p14"));
  EXPECT_EQ(count(ev.chain, EdgeKind::Divergence), 1u);
  EXPECT_EQ(count(ev.chain, EdgeKind::ExcursionReturn), 1u);
  EXPECT_TRUE(ev.summary.divergence_reachable_optimistic);
  EXPECT_EQ(ev.summary.bottom_sccs, (std::vector<std::vector<std::size_t>>{{ev.chain.divergence()}}));
  EXPECT_EQ(ev.summary.verdict, ChainVerdict::NotAlmostSure);
}

TEST(GroundChain, LoopIsASilentSelfLoop) {
  const Tier2Evidence ev = analyze_exact(corpus_def("loop"));
  ASSERT_EQ(ev.chain.nodes.size(), 1u);
  ASSERT_EQ(ev.chain.edges.size(), 1u);
  EXPECT_EQ(ev.chain.edges[0].from, 0u);
  EXPECT_EQ(ev.chain.edges[0].to, 0u);
  EXPECT_FALSE(ev.chain.output[0]);
  EXPECT_FALSE(ev.summary.divergence_reachable_optimistic);
  EXPECT_EQ(ev.summary.verdict, ChainVerdict::NotAlmostSure);
}

TEST(GroundChain, TrapReturnsOnlyThroughSilentStates) {
  // tail(a : trap) pushes tl and enters the constructor, which pops it at
  // once: the excursion always returns, but the constructor is never seen
  // with an empty stack. The chain is a silent two-cycle.
  const Definition d = corpus_def("trap");
  const Ppda p = translate(d);
  const Tier2Evidence ev = analyze_exact(d);
  EXPECT_EQ(ev.surviving, 1u);
  ASSERT_EQ(ev.chain.nodes.size(), 2u);
  EXPECT_EQ(std::count(ev.chain.output.begin(), ev.chain.output.end(), true), 0);
  EXPECT_EQ(count(ev.chain, EdgeKind::ExcursionReturn), 1u);
  EXPECT_EQ(count(ev.chain, EdgeKind::Divergence), 0u);
  const auto it = std::find_if(ev.chain.edges.begin(), ev.chain.edges.end(),
                               [](const ChainEdge& e) { return e.kind == EdgeKind::ExcursionReturn; });
  EXPECT_EQ(it->head, (Head{p.index_of(Term::cons("a", Term::rec())), Symbol::Tl}));
  EXPECT_FALSE(ev.summary.divergence_reachable_pessimistic);
  EXPECT_EQ(ev.summary.bottom_sccs.size(), 1u);
  EXPECT_EQ(ev.summary.verdict, ChainVerdict::NotAlmostSure);
}

TEST(Buchi, HandBuiltChains) {
  GroundChain g;
  g.nodes = {0, 1};
  g.output = {false, true};
  g.edges = {{0, 1, EdgeKind::Direct, {}, false}, {1, 0, EdgeKind::Direct, {}, false}};
  EXPECT_EQ(buchi_verdict(g), ChainVerdict::AlmostSure);

  g.edges.push_back({0, 2, EdgeKind::Divergence, Head{1, Symbol::Tl}, true});
  EXPECT_EQ(buchi_verdict(g), ChainVerdict::Unknown);
  g.edges.back().unknown = false;
  EXPECT_EQ(buchi_verdict(g), ChainVerdict::NotAlmostSure);

  g.edges.pop_back();
  g.edges.push_back({1, 1, EdgeKind::Direct, {}, false});
  g.output = {true, false};  // node 1 can still return to 0
  EXPECT_EQ(buchi_verdict(g), ChainVerdict::AlmostSure);
  g.edges = {{0, 1, EdgeKind::Direct, {}, false}, {1, 1, EdgeKind::Direct, {}, false}};
  EXPECT_EQ(buchi_verdict(g), ChainVerdict::NotAlmostSure);  // absorbed in a silent node
}

TEST(Buchi, UnreachableBadComponentsAreIgnored) {
  GroundChain g;
  g.nodes = {0, 1};
  g.output = {true, false};
  g.edges = {{0, 0, EdgeKind::Direct, {}, false}, {1, 2, EdgeKind::Divergence, Head{0, Symbol::Tl}, false}};
  EXPECT_EQ(buchi_verdict(g), ChainVerdict::AlmostSure);
}

TEST(Buchi, AntitoneInPessimism) {
  // Turning any subset of return edges into unknown D edges, or unknown D
  // edges into certified ones, never raises the verdict.
  std::mt19937_64 rng(5);
  for (const auto& d : asp::testing::generated_definitions(150, 41)) {
    const Tier2Evidence ev = analyze_exact(d);
    const int base = rank(ev.summary.verdict);
    GroundChain g = ev.chain;
    for (std::size_t step = 0; step < 3; ++step) {
      std::vector<ChainEdge> extra;
      for (const auto& e : g.edges)
        if (e.kind == EdgeKind::ExcursionReturn && rng() % 2)
          extra.push_back({e.from, g.divergence(), EdgeKind::Divergence, e.head, true});
      for (auto& e : g.edges)
        if (e.kind == EdgeKind::Divergence && e.unknown && rng() % 2) e.unknown = false;
      g.edges.insert(g.edges.end(), extra.begin(), extra.end());
      EXPECT_LE(rank(buchi_verdict(g)), base) << d.name;
    }
  }
}

TEST(Decide, ReferenceVerdicts) {
  const DecideConfig cfg = exact_only();
  const auto v = [&](const char* n) { return decide_asp(corpus_def(n), cfg); };
  EXPECT_EQ(v("p34").result, Result::Asp);
  EXPECT_EQ(v("p34").tier, Tier::Measure);
  EXPECT_EQ(v("p12").result, Result::Asp);
  EXPECT_EQ(v("p12").tier, Tier::Exact);
  EXPECT_EQ(v("p12").tier1, Tier1::Abstain);
  EXPECT_EQ(v("p14").result, Result::NotAsp);
  EXPECT_EQ(v("loop").result, Result::NotAsp);
  EXPECT_EQ(v("trap").result, Result::NotAsp);
  EXPECT_EQ(v("trap").measure, 0);
  EXPECT_EQ(v("ones").result, Result::Asp);
  EXPECT_EQ(v("e1").result, Result::Asp);
  EXPECT_EQ(v("e1").tier, Tier::Measure);
  EXPECT_EQ(v("e2").result, Result::Asp);
  EXPECT_EQ(v("e2").tier, Tier::Exact);
  EXPECT_FALSE(v("e2").tier3.has_value());
}

TEST(Decide, CoinFamilyIsAlwaysProductive) {
  for (const Rational& p : {Rational(1, 10), Rational(1, 2), Rational(9, 10)}) {
    const Verdict v = decide_asp(stream_with("stream s = (a : s) (+ P) s", p), exact_only());
    EXPECT_EQ(v.result, Result::Asp) << p;
    EXPECT_EQ(v.tier, Tier::Measure) << p;
  }
}

TEST(Decide, ParametricMonotonicity) {
  const std::vector<Rational> ps{Rational(1, 10), Rational(1, 4), Rational(2, 5), Rational(1, 2),
                                 Rational(3, 5),  Rational(3, 4), Rational(9, 10)};
  Result prev = Result::NotAsp;
  for (const Rational& p : ps) {
    const Verdict v = decide_asp(stream_with("stream s = (a : s) (+ P) tail(s)", p), exact_only());
    EXPECT_EQ(v.measure, 2 * p - 1);
    EXPECT_EQ(v.result, p >= Rational(1, 2) ? Result::Asp : Result::NotAsp) << p;
    if (prev == Result::Asp) {
      EXPECT_EQ(v.result, Result::Asp) << p;
    }
    prev = v.result;
  }
}

TEST(Decide, TiersAgreeOnGenerated) {
  for (const auto& d : asp::testing::generated_definitions(300, 43)) {
    Verdict v;
    ASSERT_NO_THROW(v = decide_asp(d, exact_only())) << d.name;
    ASSERT_TRUE(v.tier2.has_value());
    if (v.tier1 == Tier1::Asp) {
      EXPECT_EQ(v.result, Result::Asp);
      EXPECT_NE(v.tier2->summary.verdict, ChainVerdict::NotAlmostSure) << d.name;
    }
    if (v.result == Result::Unknown) {
      EXPECT_EQ(v.tier, Tier::Exact);
    }
  }
}

TEST(Decide, VerdictsAgreeWithSimulation) {
  // p12 is excluded: it is ASP but null recurrent, so a finite horizon
  // routinely ends inside a long silent excursion.
  McConfig mc;
  mc.runs = 200;
  mc.horizon = 10000;
  for (const char* name : {"p34", "p14", "loop", "coin", "trap", "ones", "e1", "e2"}) {
    const Verdict v = decide_asp(corpus_def(name), exact_only());
    const McReport r = monte_carlo(corpus_def(name), mc);
    ASSERT_NE(v.result, Result::Unknown) << name;
    EXPECT_EQ(v.result == Result::Asp, r.hint == McHint::NoEvidenceAgainstAsp) << name;
  }
}

TEST(Decide, ConfirmationRunsMonteCarloWithoutChangingTheVerdict) {
  DecideConfig cfg;
  cfg.confirm_with_mc = true;
  cfg.mc.runs = 20;
  cfg.mc.horizon = 1000;
  const Verdict v = decide_asp(corpus_def("p14"), cfg);
  ASSERT_TRUE(v.tier3.has_value());
  EXPECT_EQ(v.result, Result::NotAsp);
  EXPECT_EQ(v.tier, Tier::Exact);
}

TEST(Decide, ResourceLimits) {
  DecideConfig cfg = exact_only();
  cfg.max_states = 2;
  EXPECT_THROW(analyze_exact(corpus_def("p12"), cfg), ResourceLimitExceeded);
  EXPECT_THROW(decide_asp(corpus_def("p12"), cfg), ResourceLimitExceeded);
  // Tier 1 already decides p34; the skipped cross-check is not an error.
  const Verdict v = decide_asp(corpus_def("p34"), cfg);
  EXPECT_EQ(v.result, Result::Asp);
  EXPECT_FALSE(v.tier2.has_value());
  cfg.max_states = 512;
  cfg.max_variables = 3;
  EXPECT_THROW(analyze_exact(corpus_def("p12"), cfg), ResourceLimitExceeded);
}

TEST(Decide, Names) {
  EXPECT_EQ(to_string(Result::NotAsp), "NotASP");
  EXPECT_EQ(to_string(Tier::StatisticalOnly), "Statistical-only");
  EXPECT_EQ(to_string(ChainVerdict::NotAlmostSure), "NotAlmostSure");
}
