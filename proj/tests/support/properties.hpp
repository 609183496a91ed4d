#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "asp/term.hpp"

namespace asp::testing {

struct PropertyResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;

  bool ok() const { return cases > 0 && failures == 0; }
  void fail(const std::string& what);
};

/// Every reachable step distribution has positive weights summing to 1.
PropertyResult check_step_normalization(const std::vector<Definition>& defs, std::uint64_t seed);
/// Kleene iterates are nondecreasing and bounded by 1.
PropertyResult check_kleene_monotone(const std::vector<Definition>& defs);
/// Kleene on the cleaned system matches Kleene on the full system restricted to survivors.
PropertyResult check_clean_preserves_lfp(const std::vector<Definition>& defs);
/// The depth-(k+1) prefix distribution marginalizes to the depth-k one.
PropertyResult check_prefix_marginals(const std::vector<Definition>& defs, std::size_t depth);
/// parse(pretty_print(d)) == d.
PropertyResult check_parser_round_trip(const std::vector<Definition>& defs);

}  // namespace asp::testing
