#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asp/semantics.hpp"
#include "asp/term.hpp"

namespace asp {

/// Stack symbols: `tl` for streams, `lt`/`rt` for trees. The empty-stack
/// marker ⊥ is not a symbol; rows read it as std::nullopt.
enum class Symbol : std::uint8_t { Tl, Lt, Rt };

std::string_view to_string(Symbol s);

using StateId = std::size_t;
using Top = std::optional<Symbol>;

/// One transition: consume the top symbol (if any), push `push` (top
/// first), move to `next`. At ⊥ the push string has length <= 1; at a
/// symbol X it is empty (pop), [X] (keep) or [Y, X] (push Y).
struct Move {
  Rational prob;
  StateId next = 0;
  std::vector<Symbol> push;

  friend bool operator==(const Move&, const Move&) = default;
};

/// Probabilistic pushdown automaton over the subterms of a definition.
class Ppda {
 public:
  explicit Ppda(const Definition& d);

  const std::string& name() const { return name_; }
  Kind kind() const { return kind_; }
  const std::vector<Term>& states() const { return states_; }
  std::size_t num_states() const { return states_.size(); }
  const std::vector<Symbol>& alphabet() const { return alphabet_; }
  StateId initial() const { return 0; }
  StateId rec_state() const { return rec_; }
  StateId index_of(const Term& t) const;

  /// Outgoing moves of (state, top). Probabilities sum to exactly 1.
  const std::vector<Move>& row(StateId q, Top top) const;

  bool is_constructor_state(StateId q) const { return is_constructor(states_[q].op()); }
  /// Printed term of a state.
  std::string state_text(StateId q) const;

 private:
  std::size_t slot(Top top) const;

  std::string name_;
  Kind kind_;
  std::vector<Term> states_;
  std::vector<Symbol> alphabet_;
  StateId rec_ = 0;
  std::vector<std::vector<std::vector<Move>>> rows_;  // [state][slot]
};

/// Builds the automaton for `d`: states are subterms(d), initial state d.body.
Ppda translate(const Definition& d);

/// Configuration. The stack is stored with its top at the back.
struct Config {
  StateId state = 0;
  std::vector<Symbol> stack;

  Top top() const { return stack.empty() ? Top{} : Top{stack.back()}; }
  friend bool operator==(const Config&, const Config&) = default;
  friend auto operator<=>(const Config&, const Config&) = default;
};

/// Initial configuration: (d.body, empty stack).
Config initial_config(const Ppda& p);

std::map<Config, Rational> ppda_step(const Ppda& p, const Config& c);

/// Constructor state with an empty stack.
bool is_outputting(const Ppda& p, const Config& c);

struct PpdaRun {
  std::vector<Config> configs;    // configs[0] is the initial configuration
  std::vector<bool> outputting;   // parallel to configs
};

/// Samples `horizon` configurations (the initial one plus horizon-1 moves).
PpdaRun sample_ppda_run(const Ppda& p, std::size_t horizon, std::uint64_t seed);

struct CrossValidation {
  bool equal = false;
  std::map<EventSeq, Rational> from_semantics;
  std::map<EventSeq, Rational> from_ppda;
  std::string details;
};

inline constexpr std::size_t kCrossValidateDepthBound = 12;

/// Exact depth-k event distributions computed independently from the term
/// semantics (Uniform tree policy) and from the automaton. Automaton moves
/// are grouped so that each group ends in an output move (from an
/// outputting configuration) or an unfold move (from the recursion state).
CrossValidation cross_validate(const Definition& d, std::size_t depth);

/// Fraction of `trials` excursions from head (q, X) that pop X within
/// `horizon` moves. Trial i uses seed + i.
double excursion_return_fraction(const Ppda& p, StateId q, Symbol x, std::size_t trials,
                                 std::size_t horizon, std::uint64_t seed);

enum class ExportFormat { Graphviz, Json };

/// Throws std::invalid_argument for an unknown format name.
ExportFormat parse_export_format(std::string_view name);

/// Deterministic serialization.
std::string export_ppda(const Ppda& p, ExportFormat format);

}  // namespace asp
