#include "asp/ppda.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "asp/random.hpp"
#include "asp/syntax.hpp"

namespace asp {

std::string_view to_string(Symbol s) {
  switch (s) {
    case Symbol::Tl: return "tl";
    case Symbol::Lt: return "lt";
    case Symbol::Rt: return "rt";
  }
  return "?";
}

namespace {

void add_move(std::vector<Move>& row, Move m) {
  for (auto& existing : row) {
    if (existing.next == m.next && existing.push == m.push) {
      existing.prob += m.prob;
      return;
    }
  }
  row.push_back(std::move(m));
}

std::vector<Symbol> keep(Top top) {
  if (top) return {*top};
  return {};
}

std::vector<Symbol> push_over(Symbol y, Top top) {
  if (top) return {y, *top};
  return {y};
}

Symbol destructor_symbol(Op op) {
  switch (op) {
    case Op::Tail: return Symbol::Tl;
    case Op::Left: return Symbol::Lt;
    default: return Symbol::Rt;
  }
}

}  // namespace

Ppda::Ppda(const Definition& d) : name_(d.name), kind_(d.kind), states_(subterms(d)) {
  alphabet_ = kind_ == Kind::Stream ? std::vector<Symbol>{Symbol::Tl} : std::vector<Symbol>{Symbol::Lt, Symbol::Rt};
  rec_ = index_of(Term::rec());

  std::vector<Top> tops{std::nullopt};
  for (Symbol s : alphabet_) tops.push_back(s);

  rows_.assign(states_.size(), std::vector<std::vector<Move>>(tops.size()));
  for (StateId q = 0; q < states_.size(); ++q) {
    const Term& t = states_[q];
    for (std::size_t sl = 0; sl < tops.size(); ++sl) {
      const Top top = tops[sl];
      auto& row = rows_[q][sl];
      switch (t.op()) {
        case Op::Rec:
          add_move(row, {Rational(1), initial(), keep(top)});
          break;
        case Op::Choice:
          add_move(row, {t.prob(), index_of(t.child(0)), keep(top)});
          add_move(row, {1 - t.prob(), index_of(t.child(1)), keep(top)});
          break;
        case Op::Cons:
          // Output move at ⊥, pop under tl; both land on the tail.
          add_move(row, {Rational(1), index_of(t.child(0)), {}});
          break;
        case Op::Mk:
          if (!top) {
            add_move(row, {Rational(1, 2), index_of(t.child(0)), {}});
            add_move(row, {Rational(1, 2), index_of(t.child(1)), {}});
          } else {
            add_move(row, {Rational(1), index_of(t.child(*top == Symbol::Lt ? 0 : 1)), {}});
          }
          break;
        case Op::Tail:
        case Op::Left:
        case Op::Right:
          add_move(row, {Rational(1), index_of(t.child(0)), push_over(destructor_symbol(t.op()), top)});
          break;
      }
    }
  }
}

StateId Ppda::index_of(const Term& t) const {
  auto it = std::find(states_.begin(), states_.end(), t);
  if (it == states_.end()) throw std::out_of_range("Ppda::index_of: not a subterm");
  return static_cast<StateId>(it - states_.begin());
}

std::size_t Ppda::slot(Top top) const {
  if (!top) return 0;
  auto it = std::find(alphabet_.begin(), alphabet_.end(), *top);
  if (it == alphabet_.end()) throw std::out_of_range("Ppda::row: symbol not in alphabet");
  return 1 + static_cast<std::size_t>(it - alphabet_.begin());
}

const std::vector<Move>& Ppda::row(StateId q, Top top) const { return rows_.at(q)[slot(top)]; }

std::string Ppda::state_text(StateId q) const { return print_term(states_.at(q), name_); }

Ppda translate(const Definition& d) { return Ppda(d); }

Config initial_config(const Ppda& p) { return {p.initial(), {}}; }

namespace {

Config apply(const Config& c, const Move& m) {
  Config out{m.next, c.stack};
  if (!out.stack.empty()) out.stack.pop_back();
  for (auto it = m.push.rbegin(); it != m.push.rend(); ++it) out.stack.push_back(*it);
  return out;
}

}  // namespace

std::map<Config, Rational> ppda_step(const Ppda& p, const Config& c) {
  std::map<Config, Rational> out;
  for (const Move& m : p.row(c.state, c.top())) {
    auto [it, inserted] = out.try_emplace(apply(c, m), m.prob);
    if (!inserted) it->second += m.prob;
  }
  return out;
}

bool is_outputting(const Ppda& p, const Config& c) { return c.stack.empty() && p.is_constructor_state(c.state); }

namespace {

// Rows with cumulative double probabilities for sampling.
class CompiledRows {
 public:
  explicit CompiledRows(const Ppda& p) : width_(1 + p.alphabet().size()) {
    for (std::size_t i = 0; i < p.alphabet().size(); ++i)
      slot_of_[static_cast<std::size_t>(p.alphabet()[i])] = 1 + i;
    rows_.resize(p.num_states() * width_);
    for (StateId q = 0; q < p.num_states(); ++q) {
      for (std::size_t sl = 0; sl < width_; ++sl) {
        Top top = sl == 0 ? Top{} : Top{p.alphabet()[sl - 1]};
        double acc = 0;
        for (const Move& m : p.row(q, top)) {
          acc += to_double(m.prob);
          rows_[q * width_ + sl].push_back({acc, &m});
        }
      }
    }
  }

  const Move& draw(StateId q, Top top, Rng& rng) const {
    const std::size_t sl = top ? slot_of_[static_cast<std::size_t>(*top)] : 0;
    const auto& row = rows_[q * width_ + sl];
    if (row.size() == 1) return *row.front().second;
    double u = rng.uniform() * row.back().first;
    for (const auto& [cum, m] : row)
      if (u < cum) return *m;
    return *row.back().second;
  }

 private:
  std::size_t width_;
  std::array<std::size_t, 3> slot_of_{};
  std::vector<std::vector<std::pair<double, const Move*>>> rows_;
};

void apply_in_place(Config& c, const Move& m) {
  c.state = m.next;
  if (!c.stack.empty()) c.stack.pop_back();
  for (auto it = m.push.rbegin(); it != m.push.rend(); ++it) c.stack.push_back(*it);
}

}  // namespace

PpdaRun sample_ppda_run(const Ppda& p, std::size_t horizon, std::uint64_t seed) {
  CompiledRows rows(p);
  Rng rng(seed);
  PpdaRun run;
  Config c = initial_config(p);
  for (std::size_t i = 0; i < horizon; ++i) {
    run.configs.push_back(c);
    run.outputting.push_back(is_outputting(p, c));
    if (i + 1 < horizon) apply_in_place(c, rows.draw(c.state, c.top(), rng));
  }
  return run;
}

double excursion_return_fraction(const Ppda& p, StateId q, Symbol x, std::size_t trials, std::size_t horizon,
                                 std::uint64_t seed) {
  if (trials == 0) return 0;
  CompiledRows rows(p);
  std::size_t returned = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(seed + t);
    Config c{q, {x}};
    for (std::size_t i = 0; i < horizon && !c.stack.empty(); ++i) apply_in_place(c, rows.draw(c.state, c.top(), rng));
    if (c.stack.empty()) ++returned;
  }
  return static_cast<double>(returned) / static_cast<double>(trials);
}

namespace {

struct Pending {
  EventSeq events;
  Config config;
  friend bool operator==(const Pending&, const Pending&) = default;
  friend auto operator<=>(const Pending&, const Pending&) = default;
};

// Runs automaton moves from `c` until an output or unfold move has been taken.
void macro_step(const Ppda& p, const EventSeq& events, const Config& c, const Rational& prob,
                std::map<Pending, Rational>& out) {
  const bool emits = is_outputting(p, c);
  const bool unfolds = c.state == p.rec_state();
  for (const auto& [next, q] : ppda_step(p, c)) {
    if (emits || unfolds) {
      EventSeq ev = events;
      ev.push_back(emits ? TraceEvent::out(p.states()[c.state].label()) : TraceEvent::unfold());
      auto [it, inserted] = out.try_emplace(Pending{std::move(ev), next}, prob * q);
      if (!inserted) it->second += prob * q;
    } else {
      macro_step(p, events, next, prob * q, out);
    }
  }
}

std::string describe(const std::map<EventSeq, Rational>& dist) {
  std::ostringstream os;
  for (const auto& [seq, prob] : dist) os << "  " << to_string(seq) << " : " << to_string(prob) << "\n";
  return os.str();
}

}  // namespace

CrossValidation cross_validate(const Definition& d, std::size_t depth) {
  if (depth > kCrossValidateDepthBound)
    throw std::out_of_range("cross_validate: depth " + std::to_string(depth) + " exceeds bound " +
                            std::to_string(kCrossValidateDepthBound));
  CrossValidation cv;
  cv.from_semantics = prefix_distribution(d, depth, DirectionPolicy::uniform(), kCrossValidateDepthBound);

  Ppda p = translate(d);
  std::map<Pending, Rational> frontier{{Pending{{}, initial_config(p)}, Rational(1)}};
  for (std::size_t k = 0; k < depth; ++k) {
    std::map<Pending, Rational> next;
    for (const auto& [pending, prob] : frontier) macro_step(p, pending.events, pending.config, prob, next);
    frontier = std::move(next);
  }
  for (const auto& [pending, prob] : frontier) {
    auto [it, inserted] = cv.from_ppda.try_emplace(pending.events, prob);
    if (!inserted) it->second += prob;
  }

  cv.equal = cv.from_semantics == cv.from_ppda;
  if (!cv.equal)
    cv.details = "semantics:\n" + describe(cv.from_semantics) + "automaton:\n" + describe(cv.from_ppda);
  else
    cv.details = std::to_string(cv.from_semantics.size()) + " event sequences agree at depth " + std::to_string(depth);
  return cv;
}

ExportFormat parse_export_format(std::string_view name) {
  if (name == "graphviz" || name == "dot") return ExportFormat::Graphviz;
  if (name == "json") return ExportFormat::Json;
  throw std::invalid_argument("unknown export format '" + std::string(name) + "'");
}

namespace {

std::string push_text(const std::vector<Symbol>& push) {
  if (push.empty()) return "ε";
  std::string s;
  for (std::size_t i = 0; i < push.size(); ++i) {
    if (i) s += "·";
    s += to_string(push[i]);
  }
  return s;
}

std::string top_text(Top top) { return top ? std::string(to_string(*top)) : "⊥"; }

}  // namespace

std::string export_ppda(const Ppda& p, ExportFormat format) {
  std::vector<Top> tops{std::nullopt};
  for (Symbol s : p.alphabet()) tops.push_back(s);

  if (format == ExportFormat::Json) {
    using nlohmann::json;
    json j;
    j["name"] = p.name();
    j["kind"] = std::string(to_string(p.kind()));
    j["states"] = json::array();
    for (StateId q = 0; q < p.num_states(); ++q) j["states"].push_back({{"id", q}, {"term", p.state_text(q)}});
    j["alphabet"] = json::array();
    for (Symbol s : p.alphabet()) j["alphabet"].push_back(std::string(to_string(s)));
    j["transitions"] = json::array();
    for (StateId q = 0; q < p.num_states(); ++q) {
      for (Top top : tops) {
        json moves = json::array();
        for (const Move& m : p.row(q, top)) {
          json push = json::array();
          for (Symbol s : m.push) push.push_back(std::string(to_string(s)));
          moves.push_back({{"prob", to_string(m.prob)}, {"next", m.next}, {"push", push}});
        }
        j["transitions"].push_back({{"state", q}, {"top", top_text(top)}, {"moves", moves}});
      }
    }
    j["outputting"] = json::array();
    for (StateId q = 0; q < p.num_states(); ++q)
      if (p.is_constructor_state(q)) j["outputting"].push_back(q);
    return j.dump(2) + "\n";
  }

  std::ostringstream os;
  os << "digraph \"" << p.name() << "\" {\n";
  os << "  rankdir=LR;\n";
  for (StateId q = 0; q < p.num_states(); ++q) {
    os << "  s" << q << " [label=\"" << p.state_text(q) << "\"";
    if (p.is_constructor_state(q)) os << ", peripheries=2";
    if (q == p.initial()) os << ", style=bold";
    os << "];\n";
  }
  for (StateId q = 0; q < p.num_states(); ++q)
    for (Top top : tops)
      for (const Move& m : p.row(q, top))
        os << "  s" << q << " -> s" << m.next << " [label=\"" << top_text(top) << " / " << push_text(m.push)
           << " : " << to_string(m.prob) << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace asp
