#include "properties.hpp"

#include <cmath>
#include <map>
#include <random>

#include "asp/eqsys.hpp"
#include "asp/ppda.hpp"
#include "asp/semantics.hpp"
#include "asp/syntax.hpp"

namespace asp::testing {

void PropertyResult::fail(const std::string& what) {
  if (failures++ == 0) first_failure = what;
}

PropertyResult check_step_normalization(const std::vector<Definition>& defs, std::uint64_t seed) {
  PropertyResult r{"step distribution normalization"};
  std::mt19937_64 rng(seed);
  for (const auto& d : defs) {
    ++r.cases;
    Term t = d.body;
    for (int k = 0; k < 12; ++k) {
      const StepDist dist = step(d, t);
      Rational total = 0;
      bool positive = true;
      for (const auto& [o, p] : dist) {
        total += p;
        positive = positive && p > 0;
        for (const auto& n : o.next)
          if (!fits_kind(n, d.kind)) positive = false;
      }
      if (total != 1 || !positive || dist.empty()) {
        r.fail(pretty_print(d) + ": bad step distribution from " + print_term(t, d.name));
        break;
      }
      auto it = dist.begin();
      std::advance(it, std::uniform_int_distribution<std::size_t>(0, dist.size() - 1)(rng));
      const auto& next = it->first.next;
      t = next[std::uniform_int_distribution<std::size_t>(0, next.size() - 1)(rng)];
    }
  }
  return r;
}

PropertyResult check_kleene_monotone(const std::vector<Definition>& defs) {
  PropertyResult r{"Kleene monotonicity"};
  for (const auto& d : defs) {
    ++r.cases;
    const EqSystem s = build_system(translate(d));
    std::vector<double> prev(s.size(), 0.0);
    for (std::size_t k = 1; k <= 20; ++k) {
      const auto cur = kleene_solve(s, 0.0, k).values;
      bool ok = true;
      for (std::size_t i = 0; i < s.size(); ++i) ok = ok && prev[i] <= cur[i] && cur[i] <= 1.0;
      if (!ok) {
        r.fail(pretty_print(d) + ": iterate " + std::to_string(k) + " not monotone");
        break;
      }
      prev = cur;
    }
  }
  return r;
}

PropertyResult check_clean_preserves_lfp(const std::vector<Definition>& defs) {
  PropertyResult r{"clean preserves LFP"};
  for (const auto& d : defs) {
    ++r.cases;
    const EqSystem full = build_system(translate(d));
    const Cleaned c = clean(full);
    const auto kf = kleene_solve(full, 1e-12, 20000).values;
    const auto kc = kleene_solve(c.system, 1e-12, 20000).values;
    for (std::size_t i = 0; i < full.size(); ++i) {
      const double expected = c.index[i] ? kc[*c.index[i]] : 0.0;
      if (std::abs(kf[i] - expected) > 1e-9) {
        r.fail(pretty_print(d) + ": " + full.var_name(i) + " differs after cleaning");
        break;
      }
    }
  }
  return r;
}

PropertyResult check_prefix_marginals(const std::vector<Definition>& defs, std::size_t depth) {
  PropertyResult r{"prefix distribution marginals"};
  for (const auto& d : defs) {
    ++r.cases;
    const auto policy = DirectionPolicy::uniform();
    const auto shallow = prefix_distribution(d, depth, policy);
    const auto deep = prefix_distribution(d, depth + 1, policy);
    std::map<EventSeq, Rational> marginal;
    Rational total = 0;
    for (const auto& [seq, p] : deep) {
      total += p;
      marginal[EventSeq(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(depth))] += p;
    }
    if (total != 1 || marginal != shallow) r.fail(pretty_print(d) + ": marginal mismatch at depth " + std::to_string(depth));
  }
  return r;
}

PropertyResult check_parser_round_trip(const std::vector<Definition>& defs) {
  PropertyResult r{"parser round trip"};
  for (const auto& d : defs) {
    ++r.cases;
    const std::string text = pretty_print(d);
    try {
      const auto back = parse_file(text);
      if (back.size() != 1 || !(back[0] == d) || pretty_print(back[0]) != text) r.fail(text + ": round trip differs");
    } catch (const std::exception& e) {
      r.fail(text + ": " + e.what());
    }
  }
  return r;
}

}  // namespace asp::testing
