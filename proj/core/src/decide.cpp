#include "asp/decide.hpp"

#include <algorithm>
#include <tuple>

namespace asp {

Adjacency GroundChain::adjacency(bool pessimistic) const {
  Adjacency g(nodes.size() + 1);
  for (const auto& e : edges) {
    if (e.unknown && !pessimistic) continue;
    g[e.from].push_back(e.to);
  }
  for (auto& out : g) {
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  return g;
}

GroundChain ground_chain(const Ppda& p, const EqSystem& cleaned, const std::map<Head, HeadClass>& classes) {
  GroundChain g;
  std::map<StateId, std::size_t> node_of;
  std::vector<StateId> work;
  auto node = [&](StateId q) {
    auto [it, inserted] = node_of.emplace(q, g.nodes.size());
    if (inserted) {
      g.nodes.push_back(q);
      g.output.push_back(p.is_constructor_state(q));
      work.push_back(q);
    }
    return it->second;
  };
  g.initial = node(p.initial());

  // D gets its final index once all nodes are known; mark with a sentinel.
  constexpr std::size_t kD = static_cast<std::size_t>(-1);
  while (!work.empty()) {
    const StateId q = work.back();
    work.pop_back();
    const std::size_t from = node_of.at(q);
    for (const Move& m : p.row(q, std::nullopt)) {
      if (m.push.empty()) {
        g.edges.push_back({from, node(m.next), EdgeKind::Direct, std::nullopt, false});
        continue;
      }
      const Head h{m.next, m.push[0]};
      for (std::size_t v : cleaned.head_variables(h))
        g.edges.push_back({from, node(cleaned.var(v).exit), EdgeKind::ExcursionReturn, h, false});
      const ReturnClass c = classes.at(h).kind;
      if (c != ReturnClass::AlmostSure)
        g.edges.push_back({from, kD, EdgeKind::Divergence, h, c == ReturnClass::Unknown});
    }
  }
  for (auto& e : g.edges)
    if (e.to == kD) e.to = g.divergence();
  std::sort(g.edges.begin(), g.edges.end(), [](const ChainEdge& a, const ChainEdge& b) {
    return std::tie(a.from, a.to, a.kind, a.head, a.unknown) < std::tie(b.from, b.to, b.kind, b.head, b.unknown);
  });
  return g;
}

std::string_view to_string(ChainVerdict v) {
  switch (v) {
    case ChainVerdict::AlmostSure:
      return "AlmostSure";
    case ChainVerdict::NotAlmostSure:
      return "NotAlmostSure";
    case ChainVerdict::Unknown:
      return "Unknown";
  }
  return "?";
}

namespace {

struct BottomInfo {
  bool divergence_reachable = false;
  bool all_bottoms_output = true;
  std::vector<std::vector<std::size_t>> bottoms;
};

BottomInfo bottoms(const GroundChain& g, const Adjacency& adj) {
  BottomInfo info;
  const auto reach = reachable_from(adj, {g.initial});
  info.divergence_reachable = reach[g.divergence()];
  for (const auto& comp : strongly_connected_components(adj)) {
    if (!reach[comp[0]]) continue;
    std::vector<bool> in(adj.size(), false);
    for (std::size_t v : comp) in[v] = true;
    bool bottom = true;
    for (std::size_t v : comp)
      for (std::size_t w : adj[v])
        if (!in[w]) bottom = false;
    if (!bottom) continue;
    bool has_output = std::any_of(comp.begin(), comp.end(),
                                  [&](std::size_t v) { return v != g.divergence() && g.output[v]; });
    if (!has_output) info.all_bottoms_output = false;
    info.bottoms.push_back(comp);
  }
  std::sort(info.bottoms.begin(), info.bottoms.end());
  return info;
}

}  // namespace

ChainSummary analyze_chain(const GroundChain& g) {
  ChainSummary s;
  // D is a bottom SCC without output nodes, so "D reachable" is covered by
  // the bottom-SCC test in both graphs.
  const auto opt = bottoms(g, g.adjacency(false));
  const auto pes = bottoms(g, g.adjacency(true));
  s.divergence_reachable_optimistic = opt.divergence_reachable;
  s.divergence_reachable_pessimistic = pes.divergence_reachable;
  s.bottom_sccs = pes.bottoms;
  if (!opt.all_bottoms_output) s.verdict = ChainVerdict::NotAlmostSure;
  else if (pes.all_bottoms_output) s.verdict = ChainVerdict::AlmostSure;
  else s.verdict = ChainVerdict::Unknown;
  return s;
}

ChainVerdict buchi_verdict(const GroundChain& g) { return analyze_chain(g).verdict; }

std::string_view to_string(Result r) {
  switch (r) {
    case Result::Asp:
      return "ASP";
    case Result::NotAsp:
      return "NotASP";
    case Result::Unknown:
      return "Unknown";
  }
  return "?";
}

std::string_view to_string(Tier t) {
  switch (t) {
    case Tier::Measure:
      return "Measure";
    case Tier::Exact:
      return "Exact";
    case Tier::StatisticalOnly:
      return "Statistical-only";
  }
  return "?";
}

Tier2Evidence analyze_exact(const Definition& d, const DecideConfig& cfg) {
  Tier2Evidence ev;
  Ppda p = translate(d);
  ev.states = p.num_states();
  const std::size_t vars = ev.states * ev.states * p.alphabet().size();
  if (ev.states > cfg.max_states || vars > cfg.max_variables)
    throw ResourceLimitExceeded("definition '" + d.name + "': " + std::to_string(ev.states) + " states and " +
                                std::to_string(vars) + " variables exceed the configured limits");
  EqSystem full = build_system(p);
  ev.variables = full.size();
  ev.system = clean(full).system;
  ev.surviving = ev.system.size();
  ev.classification = classify_heads(ev.system, cfg.classify);
  ev.chain = ground_chain(p, ev.system, ev.classification.heads);
  ev.summary = analyze_chain(ev.chain);
  return ev;
}

Verdict decide_asp(const Definition& d, const DecideConfig& cfg) {
  Verdict v;
  v.measure = measure(d);
  v.tier1 = tier1_verdict(d);

  if (v.tier1 == Tier1::Asp) {
    v.result = Result::Asp;
    v.tier = Tier::Measure;
    try {
      v.tier2 = analyze_exact(d, cfg);
    } catch (const ResourceLimitExceeded&) {
      // Tier 1 already settled it; the cross-check is skipped.
    }
    if (v.tier2 && v.tier2->summary.verdict == ChainVerdict::NotAlmostSure)
      throw InternalInconsistency("definition '" + d.name + "': measure " + to_string(v.measure) +
                                  " > 0 but the exact analysis says not almost surely productive");
  } else {
    v.tier2 = analyze_exact(d, cfg);
    v.tier = Tier::Exact;
    switch (v.tier2->summary.verdict) {
      case ChainVerdict::AlmostSure:
        v.result = Result::Asp;
        break;
      case ChainVerdict::NotAlmostSure:
        v.result = Result::NotAsp;
        break;
      case ChainVerdict::Unknown:
        v.result = Result::Unknown;
        break;
    }
  }

  const bool inconclusive = v.result == Result::Unknown;
  if ((inconclusive && cfg.tier3) || cfg.confirm_with_mc) {
    v.tier3 = monte_carlo(d, cfg.mc);
    if (inconclusive) v.tier = Tier::StatisticalOnly;
  }
  return v;
}

}  // namespace asp
