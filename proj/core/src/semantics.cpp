#include "asp/semantics.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <utility>

#include "asp/random.hpp"
#include "asp/syntax.hpp"

namespace asp {

StepOutcome StepOutcome::unfold(Term t) { return {false, {}, {std::move(t)}}; }

StepOutcome StepOutcome::out(std::string label, Term tail) {
  return {true, std::move(label), {std::move(tail)}};
}

StepOutcome StepOutcome::out(std::string label, Term left, Term right) {
  return {true, std::move(label), {std::move(left), std::move(right)}};
}

namespace {

// ctx holds pending destructors, outermost first; back() is applied first.
Term wrap(const std::vector<Op>& ctx, Term t) {
  for (auto it = ctx.rbegin(); it != ctx.rend(); ++it) t = Term::destruct(*it, std::move(t));
  return t;
}

void add(StepDist& dist, StepOutcome o, const Rational& p) {
  auto [it, inserted] = dist.try_emplace(std::move(o), p);
  if (!inserted) it->second += p;
}

void step_into(const Definition& d, std::vector<Op> ctx, Term core, const Rational& scale, StepDist& dist) {
  for (;;) {
    switch (core.op()) {
      case Op::Choice: {
        const Rational& p = core.prob();
        step_into(d, ctx, core.child(0), scale * p, dist);
        step_into(d, std::move(ctx), core.child(1), scale * (1 - p), dist);
        return;
      }
      case Op::Cons:
      case Op::Mk: {
        if (ctx.empty()) {
          if (core.op() == Op::Cons)
            add(dist, StepOutcome::out(core.label(), core.child(0)), scale);
          else
            add(dist, StepOutcome::out(core.label(), core.child(0), core.child(1)), scale);
          return;
        }
        Op innermost = ctx.back();
        ctx.pop_back();
        if (core.op() == Op::Cons && innermost == Op::Tail)
          core = core.child(0);
        else if (core.op() == Op::Mk && innermost == Op::Left)
          core = core.child(0);
        else if (core.op() == Op::Mk && innermost == Op::Right)
          core = core.child(1);
        else
          throw std::invalid_argument("step: kind mismatch between destructor and constructor");
        break;
      }
      case Op::Tail:
      case Op::Left:
      case Op::Right: {
        ctx.push_back(core.op());
        Term inner = core.child(0);
        core = std::move(inner);
        break;
      }
      case Op::Rec:
        add(dist, StepOutcome::unfold(wrap(ctx, d.body)), scale);
        return;
    }
  }
}

}  // namespace

StepDist step(const Definition& d, const Term& t) {
  if (!fits_kind(t, d.kind)) throw std::invalid_argument("step: kind mismatch");
  StepDist dist;
  step_into(d, {}, t, Rational(1), dist);
  return dist;
}

std::string to_string(const EventSeq& events) {
  std::string s = "[";
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (i) s += ", ";
    s += events[i].str();
  }
  return s + "]";
}

DirectionPolicy DirectionPolicy::uniform() { return {}; }

DirectionPolicy DirectionPolicy::periodic(std::vector<Dir> prefix, std::vector<Dir> cycle) {
  if (cycle.empty()) throw std::invalid_argument("direction policy: empty cycle");
  DirectionPolicy p;
  p.prefix_ = std::move(prefix);
  p.cycle_ = std::move(cycle);
  return p;
}

DirectionPolicy DirectionPolicy::parse(std::string_view text) {
  if (text == "uniform" || text == "U") return uniform();
  auto letters = [&](std::string_view s) {
    std::vector<Dir> out;
    for (char c : s) {
      if (c == 'L') out.push_back(Dir::L);
      else if (c == 'R') out.push_back(Dir::R);
      else throw std::invalid_argument("direction policy: bad letter in '" + std::string(text) + "'");
    }
    return out;
  };
  auto hat = text.find('^');
  if (hat == std::string_view::npos || text.substr(hat) != "^w")
    throw std::invalid_argument("direction policy: expected 'uniform' or a word ending in ^w");
  auto body = text.substr(0, hat);
  if (!body.empty() && body.back() == ')') {
    auto open = body.rfind('(');
    if (open == std::string_view::npos) throw std::invalid_argument("direction policy: unbalanced '('");
    return periodic(letters(body.substr(0, open)), letters(body.substr(open + 1, body.size() - open - 2)));
  }
  if (body.empty()) throw std::invalid_argument("direction policy: empty word");
  // "RL^w" reads as prefix R, cycle L.
  return periodic(letters(body.substr(0, body.size() - 1)), letters(body.substr(body.size() - 1)));
}

Dir DirectionPolicy::at(std::size_t i) const {
  if (i < prefix_.size()) return prefix_[i];
  return cycle_[(i - prefix_.size()) % cycle_.size()];
}

std::string DirectionPolicy::str() const {
  if (is_uniform()) return "uniform";
  auto word = [](const std::vector<Dir>& w) {
    std::string s;
    for (Dir d : w) s += d == Dir::L ? 'L' : 'R';
    return s;
  };
  return word(prefix_) + "(" + word(cycle_) + ")^w";
}

std::map<EventSeq, Rational> prefix_distribution(const Definition& d, std::size_t depth,
                                                 std::optional<DirectionPolicy> policy,
                                                 std::size_t depth_bound) {
  if (depth > depth_bound)
    throw std::out_of_range("prefix_distribution: depth " + std::to_string(depth) + " exceeds bound " +
                            std::to_string(depth_bound));
  if (d.kind == Kind::Tree && !policy)
    throw std::invalid_argument("prefix_distribution: tree definitions need a direction policy");

  struct Entry {
    std::size_t outputs = 0;
    EventSeq events;
    Term term;
    bool operator==(const Entry&) const = default;
    auto operator<=>(const Entry&) const = default;
  };
  std::map<Entry, Rational> frontier{{Entry{0, {}, d.body}, Rational(1)}};

  for (std::size_t k = 0; k < depth; ++k) {
    std::map<Entry, Rational> next;
    auto push = [&](Entry e, const Rational& p) {
      auto [it, inserted] = next.try_emplace(std::move(e), p);
      if (!inserted) it->second += p;
    };
    for (const auto& [entry, prob] : frontier) {
      for (const auto& [outcome, q] : step(d, entry.term)) {
        Entry e{entry.outputs, entry.events, {}};
        if (!outcome.output) {
          e.events.push_back(TraceEvent::unfold());
          e.term = outcome.next[0];
          push(std::move(e), prob * q);
          continue;
        }
        e.events.push_back(TraceEvent::out(outcome.label));
        e.outputs += 1;
        if (outcome.next.size() == 1) {
          e.term = outcome.next[0];
          push(std::move(e), prob * q);
        } else if (policy->is_uniform()) {
          Entry other = e;
          e.term = outcome.next[0];
          other.term = outcome.next[1];
          const Rational half = prob * q / 2;
          push(std::move(e), half);
          push(std::move(other), half);
        } else {
          e.term = outcome.next[policy->at(entry.outputs) == Dir::L ? 0 : 1];
          push(std::move(e), prob * q);
        }
      }
    }
    frontier = std::move(next);
  }

  std::map<EventSeq, Rational> out;
  for (auto& [entry, prob] : frontier) {
    auto [it, inserted] = out.try_emplace(entry.events, prob);
    if (!inserted) it->second += prob;
  }
  return out;
}

namespace {

// Index-based copy of a definition for fast sampling. Runtime state is a
// destructor stack plus a subterm index; the step rules are the ones above.
class Sampler {
 public:
  Sampler(const Definition& d, const DirectionPolicy& policy) : policy_(policy) {
    auto subs = subterms(d);
    std::unordered_map<Term, std::uint32_t> index;
    for (std::uint32_t i = 0; i < subs.size(); ++i) index.emplace(subs[i], i);
    nodes_.resize(subs.size());
    for (std::uint32_t i = 0; i < subs.size(); ++i) {
      const Term& t = subs[i];
      Node& n = nodes_[i];
      n.op = t.op();
      if (t.op() == Op::Choice) n.p = to_double(t.prob());
      if (is_constructor(t.op())) n.label = t.label();
      for (std::size_t c = 0; c < t.arity(); ++c) n.kid[c] = index.at(t.child(c));
    }
    root_ = index.at(d.body);
  }

  void reset() {
    ctx_.clear();
    core_ = root_;
    outputs_ = 0;
  }

  // Returns the emitted label or nullptr for an unfold step.
  const std::string* advance(Rng& rng, Dir* dir_taken) {
    for (;;) {
      const Node& n = nodes_[core_];
      switch (n.op) {
        case Op::Choice:
          core_ = rng.uniform() < n.p ? n.kid[0] : n.kid[1];
          break;
        case Op::Cons:
          if (ctx_.empty()) {
            core_ = n.kid[0];
            ++outputs_;
            return &n.label;
          }
          ctx_.pop_back();
          core_ = n.kid[0];
          break;
        case Op::Mk:
          if (ctx_.empty()) {
            Dir d = policy_.is_uniform() ? (rng.bit() ? Dir::R : Dir::L) : policy_.at(outputs_);
            if (dir_taken) *dir_taken = d;
            core_ = d == Dir::L ? n.kid[0] : n.kid[1];
            ++outputs_;
            return &n.label;
          }
          core_ = ctx_.back() == Op::Right ? n.kid[1] : n.kid[0];
          ctx_.pop_back();
          break;
        case Op::Tail:
        case Op::Left:
        case Op::Right:
          ctx_.push_back(n.op);
          core_ = n.kid[0];
          break;
        case Op::Rec:
          core_ = root_;
          return nullptr;
      }
    }
  }

 private:
  struct Node {
    Op op = Op::Rec;
    double p = 0;
    std::uint32_t kid[2] = {0, 0};
    std::string label;
  };
  std::vector<Node> nodes_;
  std::uint32_t root_ = 0;
  DirectionPolicy policy_;
  std::vector<Op> ctx_;
  std::uint32_t core_ = 0;
  std::size_t outputs_ = 0;
};

struct RunStats {
  std::size_t outputs = 0;
  std::size_t tail_outputs = 0;
  double tail_slope = 0;
};

RunStats simulate(Sampler& s, std::size_t horizon, std::uint64_t seed) {
  Rng rng(seed);
  s.reset();
  RunStats st;
  const std::size_t half = horizon / 2;
  // Least-squares fit of cumulative outputs against step index over [half, horizon).
  double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < horizon; ++i) {
    bool out = s.advance(rng, nullptr) != nullptr;
    if (out) {
      ++st.outputs;
      if (i >= half) ++st.tail_outputs;
    }
    if (i >= half) {
      double x = static_cast<double>(i - half);
      double y = static_cast<double>(st.tail_outputs);
      n += 1;
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
  }
  double denom = n * sxx - sx * sx;
  st.tail_slope = denom > 0 ? (n * sxy - sx * sy) / denom : 0.0;
  return st;
}

}  // namespace

Trace sample_run(const Definition& d, std::size_t horizon, std::uint64_t seed, const DirectionPolicy& policy) {
  Sampler s(d, policy);
  s.reset();
  Rng rng(seed);
  Trace trace;
  trace.events.reserve(horizon);
  for (std::size_t i = 0; i < horizon; ++i) {
    Dir dir = Dir::L;
    if (const std::string* label = s.advance(rng, &dir)) {
      trace.events.push_back(TraceEvent::out(*label));
      if (d.kind == Kind::Tree) trace.directions.push_back(dir);
    } else {
      trace.events.push_back(TraceEvent::unfold());
    }
  }
  return trace;
}

std::string_view to_string(McHint h) {
  return h == McHint::NoEvidenceAgainstAsp ? "NoEvidenceAgainstASP" : "EvidenceAgainstASP";
}

McReport monte_carlo(const Definition& d, const McConfig& cfg) {
  if (cfg.runs < 1) throw std::invalid_argument("monte_carlo: runs must be >= 1");
  if (cfg.horizon < 100) throw std::invalid_argument("monte_carlo: horizon must be >= 100");

  std::vector<RunStats> stats(cfg.runs);
  unsigned jobs = cfg.jobs ? cfg.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, cfg.runs));
  auto worker = [&](unsigned w) {
    Sampler s(d, cfg.policy);
    for (std::size_t r = w; r < cfg.runs; r += jobs) stats[r] = simulate(s, cfg.horizon, cfg.seed + r);
  };
  if (jobs <= 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(worker, w);
    for (auto& t : pool) t.join();
  }

  McReport rep;
  rep.runs = cfg.runs;
  rep.horizon = cfg.horizon;
  rep.seed = cfg.seed;
  std::size_t silent = 0;
  double total = 0, slope = 0;
  for (const auto& st : stats) {
    rep.output_counts.push_back(st.outputs);
    total += static_cast<double>(st.outputs);
    slope += st.tail_slope;
    if (st.tail_outputs == 0) ++silent;
  }
  const auto runs = static_cast<double>(cfg.runs);
  rep.mean_rate = total / (runs * static_cast<double>(cfg.horizon));
  rep.tail_silence = static_cast<double>(silent) / runs;
  rep.tail_slope = slope / runs;
  bool against = rep.tail_silence > cfg.silence_threshold || rep.tail_slope < cfg.slope_threshold;
  rep.hint = against ? McHint::EvidenceAgainstAsp : McHint::NoEvidenceAgainstAsp;
  return rep;
}

}  // namespace asp
