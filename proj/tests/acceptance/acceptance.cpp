// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "asp/decide.hpp"
#include "asp/eqsys.hpp"
#include "asp/measure.hpp"
#include "asp/ppda.hpp"
#include "asp/semantics.hpp"
#include "commands.hpp"
#include "corpus.hpp"
#include "generators.hpp"
#include "properties.hpp"

using namespace asp;
using asp::testing::corpus_def;
using asp::testing::parse_one;
using nlohmann::json;

namespace {

// Collects the reasons a criterion failed; empty means pass.
struct Check {
  std::vector<std::string> problems;
  void expect(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
};

Definition drift_stream(const Rational& p) {
  return parse_one("stream s = (a : s) (+ " + to_string(p) + ") tail(s)");
}

EqSystem single(const Rational& c, const Rational& quad) {
  EqSystem s({"z"}, {Symbol::Tl});
  const std::size_t x = s.add_variable(Var{0, Symbol::Tl, 0});
  s.add_term(x, c, {});
  s.add_term(x, quad, {x, x});
  return s;
}

void measure_exactness(Check& c) {
  for (const Rational p : {Rational(1, 4), Rational(1, 2), Rational(3, 4)}) {
    const Rational m = measure(drift_stream(p));
    c.expect(m == 2 * p - 1, "measure at p=" + to_string(p) + " is " + to_string(m));
  }
  c.expect(measure(corpus_def("e1")) == Rational(1, 2), "e1 measure " + to_string(measure(corpus_def("e1"))));
  c.expect(measure(corpus_def("e2")) == Rational(-1, 4), "e2 measure " + to_string(measure(corpus_def("e2"))));
}

void reference_verdicts(Check& c) {
  const auto path = std::filesystem::temp_directory_path() / "asp-acceptance-verdicts.asp";
  std::ofstream(path) << "stream up = (a : up) (+ 3/4) tail(up)\n"
                         "stream fair = (a : fair) (+ 1/2) tail(fair)\n"
                         "stream down = (a : down) (+ 1/4) tail(down)\n"
                         "stream loop = loop\n"
                         "stream c1 = (a : c1) (+ 1/10) c1\n"
                         "stream c5 = (a : c5) (+ 1/2) c5\n"
                         "stream c9 = (a : c9) (+ 9/10) c9\n"
                         "tree e1 = left(e1) (+ 1/4) mk(x, e1, e1)\n";
  std::ostringstream out, err;
  const int code = asp::cli::run({"check", "--json", "--no-tier3", path.string()}, out, err);
  std::filesystem::remove(path);
  c.expect(code == asp::cli::kSomeNotAsp, "exit code " + std::to_string(code));
  std::map<std::string, json> by_name;
  const json report = json::parse(out.str());
  for (const auto& d : report["definitions"]) by_name[d["name"].get<std::string>()] = d;
  auto expect = [&](const std::string& name, const std::string& verdict, const std::string& tier) {
    const json& d = by_name[name];
    c.expect(d.value("verdict", "") == verdict, name + " verdict " + d.value("verdict", "?"));
    if (!tier.empty()) c.expect(d.value("tier", "") == tier, name + " tier " + d.value("tier", "?"));
  };
  expect("up", "ASP", "Measure");
  expect("fair", "ASP", "Exact");
  c.expect(by_name["fair"].value("tier1", "") == "Abstain", "fair: measure criterion did not abstain");
  expect("down", "NotASP", "");
  expect("loop", "NotASP", "");
  for (const char* n : {"c1", "c5", "c9"}) expect(n, "ASP", "");
  expect("e1", "ASP", "");
}

void regression_trap(Check& c) {
  const Definition d = corpus_def("trap");
  DecideConfig cfg;
  cfg.tier3 = false;
  const Verdict v = decide_asp(d, cfg);
  c.expect(v.result == Result::NotAsp, "verdict " + std::string(to_string(v.result)));
  c.expect(v.measure == 0, "measure " + to_string(v.measure));
  const Ppda p = translate(d);
  const Head h{p.rec_state(), Symbol::Tl};
  const HeadClass& hc = v.tier2->classification.heads.at(h);
  c.expect(hc.kind == ReturnClass::Sub && hc.bound == Rational(0), "recursion head not SubReturn with bound 0");
  McConfig mc;
  mc.runs = 50;
  mc.horizon = 10000;
  const McReport r = monte_carlo(d, mc);
  std::size_t outputs = 0;
  for (auto n : r.output_counts) outputs += n;
  c.expect(outputs == 0, "simulation produced " + std::to_string(outputs) + " outputs");
}

void tree_against_simulation(Check& c) {
  const Definition d = corpus_def("e2");
  DecideConfig cfg;
  cfg.tier3 = false;
  const Verdict v = decide_asp(d, cfg);
  c.expect(v.result != Result::Unknown, "exact analysis inconclusive");
  for (std::uint64_t seed : {0xA5Full, 1ull, 2ull}) {
    McConfig mc;
    mc.runs = 500;
    mc.horizon = 100000;
    mc.seed = seed;
    const McReport r = monte_carlo(d, mc);
    const bool agree = (v.result == Result::Asp) == (r.hint == McHint::NoEvidenceAgainstAsp);
    c.expect(agree, "seed " + std::to_string(seed) + ": " + std::string(to_string(v.result)) + " vs " +
                        std::string(to_string(r.hint)));
  }
}

void solver_numerics(Check& c) {
  const EqSystem sub = single(Rational(1, 4), Rational(3, 4));
  const SolveResult k = kleene_solve(sub, 1e-14, 100000);
  const SolveResult n = newton_solve(sub, 1e-14);
  c.expect(std::abs(k.values[0] - 1.0 / 3) <= 1e-9, "kleene " + std::to_string(k.values[0]));
  c.expect(std::abs(n.values[0] - 1.0 / 3) <= 1e-12, "newton " + std::to_string(n.values[0]));
  const EqSystem crit = single(Rational(1, 2), Rational(1, 2));
  const SolveResult kc = kleene_solve(crit, 0, 2000);
  c.expect(kc.values[0] > 0.99, "critical kleene " + std::to_string(kc.values[0]));
  const auto cls = classify_heads(crit);
  c.expect(cls.heads.at(Head{0, Symbol::Tl}).kind == ReturnClass::AlmostSure, "critical head not AlmostSureReturn");
}

void certificate_soundness(Check& c) {
  const Definition down = corpus_def("p14");
  const Ppda p = translate(down);
  const EqSystem s = build_system(p);
  const Term rec = Term::rec();
  auto idx = [&](const Term& q) { return *s.find(Var{p.index_of(q), Symbol::Tl, p.rec_state()}); };
  std::vector<Rational> v(s.size());
  v[idx(down.body)] = Rational(17, 50);
  v[idx(Term::cons("a", rec))] = 1;
  v[idx(rec)] = Rational(17, 50);
  v[idx(Term::tail(rec))] = Rational(289, 2500);
  const Head h{p.rec_state(), Symbol::Tl};
  c.expect(certify_subreturn(s, h, v), "17/50 rejected");

  const Ppda fair = translate(corpus_def("p12"));
  const EqSystem f = build_system(fair);
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> num(0, 9999);
  std::size_t accepted = 0;
  for (int t = 0; t < 100; ++t) {
    std::vector<Rational> cand(f.size());
    for (auto& x : cand) x = Rational(num(rng), 10000);
    accepted += certify_subreturn(f, Head{fair.rec_state(), Symbol::Tl}, cand);
  }
  c.expect(accepted == 0, std::to_string(accepted) + " candidates accepted for the fair stream");
}

void finite_correspondence(Check& c) {
  for (const auto& d : asp::testing::corpus()) {
    const auto r = cross_validate(d, 8);
    c.expect(r.equal, d.name + ": " + r.details);
  }
}

void invariant_suites(Check& c) {
  const auto defs = asp::testing::generated_definitions(250, 0xACCE);
  for (const auto& d : defs)
    if (asp::testing::term_depth(d.body) > 6) c.expect(false, d.name + " deeper than 6");
  using asp::testing::PropertyResult;
  for (const PropertyResult& r :
       {asp::testing::check_step_normalization(defs, 3), asp::testing::check_kleene_monotone(defs),
        asp::testing::check_clean_preserves_lfp(defs), asp::testing::check_prefix_marginals(defs, 4),
        asp::testing::check_parser_round_trip(defs)}) {
    c.expect(r.cases >= 200, r.name + ": only " + std::to_string(r.cases) + " cases");
    c.expect(r.failures == 0, r.name + ": " + std::to_string(r.failures) + " failures, first: " + r.first_failure);
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
      {"measure exactness", measure_exactness},
      {"reference verdicts through check", reference_verdicts},
      {"regression trap tail(a:s)", regression_trap},
      {"tree e2 agrees with Monte Carlo", tree_against_simulation},
      {"solver numerics", solver_numerics},
      {"certificate soundness", certificate_soundness},
      {"semantics/automaton correspondence at depth 8", finite_correspondence},
      {"invariant suites over generated definitions", invariant_suites},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.problems.push_back(std::string("exception: ") + e.what());
    }
    std::cout << (c.problems.empty() ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << "\n";
    for (const auto& p : c.problems) std::cout << "    " << p << "\n";
    failed += !c.problems.empty();
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
