#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "asp/eqsys.hpp"
#include "asp/measure.hpp"
#include "asp/ppda.hpp"
#include "asp/semantics.hpp"

namespace asp {

enum class EdgeKind { Direct, ExcursionReturn, Divergence };

struct ChainEdge {
  std::size_t from = 0;
  std::size_t to = 0;  // node index; GroundChain::divergence() for D
  EdgeKind kind = EdgeKind::Direct;
  std::optional<Head> head;  // excursion edges only
  bool unknown = false;      // D edge caused by an Unknown head
};

/// Embedded chain of empty-stack states plus the divergence sink D. Node i
/// stands for automaton state nodes[i]; D has index nodes.size().
struct GroundChain {
  std::vector<StateId> nodes;
  std::vector<bool> output;  // per node, D excluded
  std::vector<ChainEdge> edges;
  std::size_t initial = 0;

  std::size_t divergence() const { return nodes.size(); }
  /// Pessimistic keeps unknown-marked D edges, optimistic drops them.
  Adjacency adjacency(bool pessimistic) const;
};

/// Nodes are the states reachable with an empty stack from the initial state.
GroundChain ground_chain(const Ppda& p, const EqSystem& cleaned, const std::map<Head, HeadClass>& classes);

enum class ChainVerdict { AlmostSure, NotAlmostSure, Unknown };

std::string_view to_string(ChainVerdict v);

struct ChainSummary {
  ChainVerdict verdict = ChainVerdict::Unknown;
  bool divergence_reachable_optimistic = false;
  bool divergence_reachable_pessimistic = false;
  /// Reachable bottom SCCs of the pessimistic graph, as node lists (D is node divergence()).
  std::vector<std::vector<std::size_t>> bottom_sccs;
};

ChainSummary analyze_chain(const GroundChain& g);

/// Almost-sure Büchi acceptance of the output nodes.
ChainVerdict buchi_verdict(const GroundChain& g);

enum class Result { Asp, NotAsp, Unknown };
enum class Tier { Measure, Exact, StatisticalOnly };

std::string_view to_string(Result r);
std::string_view to_string(Tier t);

struct Tier2Evidence {
  std::size_t states = 0;
  std::size_t variables = 0;
  std::size_t surviving = 0;
  EqSystem system;  // cleaned
  Classification classification;
  GroundChain chain;
  ChainSummary summary;
};

struct Verdict {
  Result result = Result::Unknown;
  Tier tier = Tier::Exact;
  Rational measure;
  Tier1 tier1 = Tier1::Abstain;
  std::optional<Tier2Evidence> tier2;
  std::optional<McReport> tier3;
};

struct DecideConfig {
  ClassifyOptions classify;
  McConfig mc;
  bool tier3 = true;           // Monte Carlo when Tier 2 is inconclusive
  bool confirm_with_mc = false;  // Monte Carlo regardless
  std::size_t max_states = 512;
  std::size_t max_variables = 1u << 21;
};

/// Tier 1 and Tier 2 disagree. Always a bug in the analyzer.
class InternalInconsistency : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ResourceLimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Measure first, then the exact automaton analysis, then (if that is
/// inconclusive) Monte Carlo evidence. A Monte Carlo result never changes
/// the verdict.
Verdict decide_asp(const Definition& d, const DecideConfig& cfg = {});

/// The Tier 2 pipeline alone. Throws ResourceLimitExceeded.
Tier2Evidence analyze_exact(const Definition& d, const DecideConfig& cfg = {});

}  // namespace asp
