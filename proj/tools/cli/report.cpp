#include "report.hpp"

#include <cstdio>
#include <sstream>

namespace asp::cli {

namespace {

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

json chain_json(const Tier2Evidence& ev) {
  const GroundChain& g = ev.chain;
  auto node_name = [&](std::size_t n) -> std::string {
    if (n == g.divergence()) return "D";
    return ev.system.state_names()[g.nodes[n]];
  };
  json nodes = json::array(), outputs = json::array(), edges = json::array(), bottoms = json::array();
  for (std::size_t n = 0; n < g.nodes.size(); ++n) {
    nodes.push_back(node_name(n));
    if (g.output[n]) outputs.push_back(node_name(n));
  }
  for (const auto& e : g.edges) {
    json edge{{"from", node_name(e.from)}, {"to", node_name(e.to)}};
    switch (e.kind) {
      case EdgeKind::Direct:
        edge["kind"] = "Direct";
        break;
      case EdgeKind::ExcursionReturn:
        edge["kind"] = "ExcursionReturn";
        break;
      case EdgeKind::Divergence:
        edge["kind"] = e.unknown ? "DivergenceUnknown" : "Divergence";
        break;
    }
    if (e.head) edge["head"] = ev.system.head_name(*e.head);
    edges.push_back(std::move(edge));
  }
  for (const auto& comp : ev.summary.bottom_sccs) {
    json c = json::array();
    for (std::size_t n : comp) c.push_back(node_name(n));
    bottoms.push_back(std::move(c));
  }
  return {{"nodes", nodes},
          {"outputNodes", outputs},
          {"initial", node_name(g.initial)},
          {"edges", edges},
          {"bottomSCCs", bottoms},
          {"divergenceReachable",
           {{"optimistic", ev.summary.divergence_reachable_optimistic},
            {"pessimistic", ev.summary.divergence_reachable_pessimistic}}}};
}

}  // namespace

json mc_json(const McReport& r) {
  return {{"runs", r.runs},
          {"horizon", r.horizon},
          {"seed", r.seed},
          {"meanRate", r.mean_rate},
          {"tailSilence", r.tail_silence},
          {"tailSlope", r.tail_slope},
          {"hint", std::string(to_string(r.hint))}};
}

json diagnostic_json(const std::string& file, const Diagnostic& d) {
  return {{"file", file}, {"line", d.line}, {"column", d.column}, {"message", d.message}};
}

json outcome_json(const Outcome& o, bool timing) {
  json j{{"name", o.definition.name}, {"kind", std::string(to_string(o.definition.kind))}};
  if (timing) j["timing"] = {{"ms", o.millis}};
  if (!o.verdict) {
    j["verdict"] = "Unknown";
    j["error"] = o.error;
    return j;
  }
  const Verdict& v = *o.verdict;
  j["measure"] = to_string(v.measure);
  j["tier1"] = v.tier1 == Tier1::Asp ? "ASP" : "Abstain";
  j["verdict"] = std::string(to_string(v.result));
  j["tier"] = std::string(to_string(v.tier));
  if (v.tier2) {
    const Tier2Evidence& ev = *v.tier2;
    json heads = json::array(), certificates = json::object();
    for (const auto& [h, c] : ev.classification.heads) {
      json hj{{"head", ev.system.head_name(h)}, {"class", std::string(to_string(c.kind))}, {"basis", c.basis}};
      if (c.bound) {
        hj["bound"] = to_string(*c.bound);
        if (!c.certificate.empty()) certificates[ev.system.head_name(h)] = to_string(*c.bound);
      }
      if (c.kind == ReturnClass::Unknown) {
        hj["kleeneLower"] = c.kleene_lower;
        hj["iterations"] = c.iterations;
      }
      heads.push_back(std::move(hj));
    }
    j["tier2"] = {{"verdict", std::string(to_string(ev.summary.verdict))},
                  {"states", ev.states},
                  {"variables", ev.variables},
                  {"surviving", ev.surviving},
                  {"singleExit", ev.classification.single_exit},
                  {"headClasses", heads},
                  {"certificates", certificates},
                  {"groundChain", chain_json(ev)}};
  } else {
    j["tier2"] = nullptr;
  }
  j["tier3"] = v.tier3 ? mc_json(*v.tier3) : json(nullptr);
  return j;
}

std::string head_class_text(const HeadClass& c) {
  switch (c.kind) {
    case ReturnClass::AlmostSure:
      return "AlmostSureReturn";
    case ReturnClass::Sub:
      if (c.basis == "no-exit") return "SubReturn(no exit)";
      if (c.bound) return "SubReturn(cert " + to_string(*c.bound) + ")";
      return "SubReturn(" + c.basis + ")";
    case ReturnClass::Unknown:
      return "Unknown(kleene >= " + fixed(c.kleene_lower, 6) + ")";
  }
  return "?";
}

std::string outcome_text(const Outcome& o, bool verbose, bool timing) {
  std::ostringstream os;
  os << o.definition.name << ": ";
  if (!o.verdict) {
    os << "Unknown (error: " << o.error << ")";
  } else {
    const Verdict& v = *o.verdict;
    os << to_string(v.result) << " [" << to_string(v.tier) << "] measure " << to_string(v.measure);
    if (v.tier3)
      os << "; monte carlo " << to_string(v.tier3->hint) << " (silence " << fixed(v.tier3->tail_silence, 3)
         << ", slope " << fixed(v.tier3->tail_slope, 4) << ")";
  }
  if (timing) os << " (" << fixed(o.millis, 1) << " ms)";
  os << "\n";
  if (verbose && o.verdict && o.verdict->tier2) {
    const Tier2Evidence& ev = *o.verdict->tier2;
    os << "  automaton: " << ev.states << " states, " << ev.variables << " variables, " << ev.surviving
       << " positive\n";
    for (const auto& [h, c] : ev.classification.heads)
      os << "  head " << ev.system.head_name(h) << ": " << head_class_text(c) << "\n";
    os << "  ground chain: " << ev.chain.nodes.size() << " nodes, " << to_string(ev.summary.verdict) << "\n";
  }
  return os.str();
}

}  // namespace asp::cli
