#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asp/term.hpp"

namespace asp {

enum class Dir : std::uint8_t { L, R };

/// Result of one step: either an output (stream: one successor; tree: left
/// and right children) or a silent unfold with a single successor.
struct StepOutcome {
  bool output = false;
  std::string label;
  std::vector<Term> next;

  static StepOutcome unfold(Term t);
  static StepOutcome out(std::string label, Term tail);
  static StepOutcome out(std::string label, Term left, Term right);

  friend bool operator==(const StepOutcome&, const StepOutcome&) = default;
  friend std::strong_ordering operator<=>(const StepOutcome&, const StepOutcome&) = default;
};

/// Finite distribution over outcomes; probabilities are positive and sum to 1.
using StepDist = std::map<StepOutcome, Rational>;

/// One small step of `t` in the context of definition `d`. Destructor
/// contexts are pushed through choices and cancelled against constructors;
/// a bare constructor outputs its head; anything else unfolds the recursion
/// variable. Throws std::invalid_argument if `t` is not of d's kind.
StepDist step(const Definition& d, const Term& t);

struct TraceEvent {
  bool output = false;
  std::string label;

  static TraceEvent out(std::string label) { return {true, std::move(label)}; }
  static TraceEvent unfold() { return {false, {}}; }
  std::string str() const { return output ? "Out " + label : "Unf"; }

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
  friend auto operator<=>(const TraceEvent&, const TraceEvent&) = default;
};

using EventSeq = std::vector<TraceEvent>;

std::string to_string(const EventSeq& events);

/// How a path through an output tree picks a child at each output node:
/// uniformly at random, or by an ultimately periodic word u v^ω over {L,R}.
class DirectionPolicy {
 public:
  static DirectionPolicy uniform();
  static DirectionPolicy periodic(std::vector<Dir> prefix, std::vector<Dir> cycle);
  /// Accepts `uniform`, or words such as `L^w`, `(LR)^w`, `RR(LR)^w`.
  static DirectionPolicy parse(std::string_view text);

  bool is_uniform() const { return cycle_.empty(); }
  /// Direction for the i-th output (0-based). Requires !is_uniform().
  Dir at(std::size_t i) const;
  std::string str() const;

 private:
  std::vector<Dir> prefix_;
  std::vector<Dir> cycle_;
};

inline constexpr std::size_t kDefaultPrefixDepthBound = 16;

/// Exact distribution of the first `depth` events. Trees require a policy:
/// with Uniform each output splits 1/2-1/2 over the two children.
/// Throws std::out_of_range when depth exceeds `depth_bound`.
std::map<EventSeq, Rational> prefix_distribution(const Definition& d, std::size_t depth,
                                                 std::optional<DirectionPolicy> policy = std::nullopt,
                                                 std::size_t depth_bound = kDefaultPrefixDepthBound);

struct Trace {
  EventSeq events;
  std::vector<Dir> directions;  // one per output event, trees only
};

/// Samples `horizon` steps. Deterministic in `seed`.
Trace sample_run(const Definition& d, std::size_t horizon, std::uint64_t seed,
                 const DirectionPolicy& policy = DirectionPolicy::uniform());

enum class McHint { NoEvidenceAgainstAsp, EvidenceAgainstAsp };

std::string_view to_string(McHint h);

struct McConfig {
  std::size_t runs = 200;
  std::size_t horizon = 10000;
  std::uint64_t seed = 0xA5F;
  DirectionPolicy policy = DirectionPolicy::uniform();
  double silence_threshold = 0.05;
  double slope_threshold = 1e-3;
  unsigned jobs = 0;  // 0: hardware concurrency
};

struct McReport {
  std::size_t runs = 0;
  std::size_t horizon = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> output_counts;
  double mean_rate = 0;     // outputs per step, averaged over runs
  double tail_silence = 0;  // fraction of runs silent in the final half
  double tail_slope = 0;    // mean least-squares slope of cumulative outputs over the final half
  McHint hint = McHint::NoEvidenceAgainstAsp;
};

/// Statistical falsifier: EvidenceAgainstAsp when tail_silence exceeds the
/// silence threshold or tail_slope falls below the slope threshold. Run i
/// uses seed + i. Never a proof either way.
McReport monte_carlo(const Definition& d, const McConfig& cfg = {});

}  // namespace asp
