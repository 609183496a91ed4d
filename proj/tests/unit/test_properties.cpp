#include <gtest/gtest.h>

#include <set>

#include "asp/syntax.hpp"
#include "generators.hpp"
#include "properties.hpp"

using namespace asp;
using namespace asp::testing;

namespace {

const std::vector<Definition>& defs() {
  static const std::vector<Definition> d = generated_definitions(250, 2024);
  return d;
}

void expect_ok(const PropertyResult& r) {
  EXPECT_GE(r.cases, 200u) << r.name;
  EXPECT_EQ(r.failures, 0u) << r.name << ": " << r.first_failure;
}

}  // namespace

TEST(Generator, ProducesValidVariedDefinitions) {
  std::set<Term> bodies;
  std::size_t streams = 0, trees = 0;
  for (const auto& d : defs()) {
    EXPECT_LE(term_depth(d.body), 6u) << d.name;
    EXPECT_NO_THROW(parse_file(pretty_print(d))) << pretty_print(d);
    bodies.insert(d.body);
    (d.kind == Kind::Stream ? streams : trees) += 1;
  }
  EXPECT_GT(bodies.size(), 150u);
  EXPECT_GT(streams, 50u);
  EXPECT_GT(trees, 50u);
}

TEST(Generator, DeterministicInSeed) {
  const auto a = generated_definitions(20, 9), b = generated_definitions(20, 9);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].body, b[i].body);
}

TEST(Invariants, StepNormalization) { expect_ok(check_step_normalization(defs(), 1)); }

TEST(Invariants, KleeneMonotone) { expect_ok(check_kleene_monotone(defs())); }

TEST(Invariants, CleanPreservesLfp) { expect_ok(check_clean_preserves_lfp(defs())); }

TEST(Invariants, PrefixMarginals) { expect_ok(check_prefix_marginals(defs(), 4)); }

TEST(Invariants, ParserRoundTrip) { expect_ok(check_parser_round_trip(defs())); }

TEST(Invariants, FailuresAreReported) {
  PropertyResult r;
  r.cases = 3;
  EXPECT_TRUE(r.ok());
  r.fail("first");
  r.fail("second");
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.failures, 2u);
  EXPECT_EQ(r.first_failure, "first");
  EXPECT_FALSE(PropertyResult{}.ok());
}
