#include <gtest/gtest.h>

#include "asp/measure.hpp"
#include "corpus.hpp"
#include "generators.hpp"

using namespace asp;
using asp::testing::corpus_def;
using asp::testing::parse_one;

TEST(Measure, BiasedStreamIsTwoPMinusOne) {
  for (const Rational& p : {Rational(1, 4), Rational(1, 2), Rational(3, 4)}) {
    const Term body = Term::choice(p, Term::cons("a", Term::rec()), Term::tail(Term::rec()));
    EXPECT_EQ(measure(body, Kind::Stream), 2 * p - 1) << to_string(p);
  }
}

TEST(Measure, ExampleTrees) {
  EXPECT_EQ(measure(corpus_def("e1")), Rational(1, 2));
  EXPECT_EQ(measure(corpus_def("e2")), Rational(-1, 4));
}

TEST(Measure, Leaves) {
  EXPECT_EQ(measure(corpus_def("loop")), 0);
  EXPECT_EQ(measure(corpus_def("ones")), 1);
  EXPECT_EQ(measure(corpus_def("trap")), 0);
  EXPECT_EQ(measure(corpus_def("coin")), Rational(1, 2));
}

TEST(Measure, MkTakesTheMinimum) {
  EXPECT_EQ(measure(parse_one("tree t = mk(x, t, left(t))")), 0);
  EXPECT_EQ(measure(parse_one("tree t = mk(x, mk(y, t, t), t)")), 1);
  EXPECT_EQ(measure(parse_one("tree t = right(left(t))")), -2);
}

TEST(Measure, TierOneIsStrictPositivity) {
  EXPECT_EQ(tier1_verdict(corpus_def("p34")), Tier1::Asp);
  EXPECT_EQ(tier1_verdict(corpus_def("p12")), Tier1::Abstain);
  EXPECT_EQ(tier1_verdict(corpus_def("p14")), Tier1::Abstain);
  for (const auto& d : asp::testing::generated_definitions(200, 5))
    EXPECT_EQ(tier1_verdict(d) == Tier1::Asp, measure(d) > 0) << d.name;
}

TEST(Measure, AffineInEachChoice) {
  // m(e1 (+p) e2) is the p-mixture of the branch measures.
  asp::testing::DefinitionGenerator gen(17, 4, 6);
  for (int i = 0; i < 100; ++i) {
    const Definition a = gen.next(Kind::Tree), b = gen.next(Kind::Tree);
    const Rational p(2, 7);
    EXPECT_EQ(measure(Term::choice(p, a.body, b.body), Kind::Tree),
              p * measure(a.body, Kind::Tree) + (1 - p) * measure(b.body, Kind::Tree));
  }
}
