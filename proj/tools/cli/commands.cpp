#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "asp/decide.hpp"
#include "asp/eqsys.hpp"
#include "asp/measure.hpp"
#include "asp/ppda.hpp"
#include "asp/semantics.hpp"
#include "asp/syntax.hpp"
#include "report.hpp"

namespace asp::cli {

namespace {

struct Loaded {
  std::vector<Definition> definitions;
  json errors = json::array();
  bool failed = false;
};

Loaded load(const std::vector<std::string>& files, std::ostream& err) {
  Loaded l;
  for (const auto& file : files) {
    std::ifstream in(file);
    if (!in) {
      err << file << ": error: cannot open file\n";
      l.errors.push_back({{"file", file}, {"message", "cannot open file"}});
      l.failed = true;
      continue;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    auto r = parse_file_lenient(ss.str());
    for (const auto& d : r.errors) {
      err << file << ":" << d.line << ":" << d.column << ": error: " << d.message << "\n";
      l.errors.push_back(diagnostic_json(file, d));
      l.failed = true;
    }
    for (auto& d : r.definitions) l.definitions.push_back(std::move(d));
  }
  return l;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

struct AnalysisFlags {
  double epsilon = 1e-9;
  std::size_t max_iter = 100000;
  std::string smt_solver;
};

void add_analysis_flags(CLI::App* cmd, AnalysisFlags& f) {
  cmd->add_option("--epsilon", f.epsilon, "Convergence threshold of the numeric solvers")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--max-iter", f.max_iter, "Iteration cap of the Kleene solver")->capture_default_str();
  cmd->add_option("--smt-solver", f.smt_solver, "SMT solver executable (default: $ASP_SMT_SOLVER)");
}

ClassifyOptions classify_options(const AnalysisFlags& f) {
  ClassifyOptions o;
  o.epsilon = f.epsilon;
  o.max_iter = f.max_iter;
  if (!f.smt_solver.empty()) {
    o.smt_solver = f.smt_solver;
  } else if (const char* env = std::getenv("ASP_SMT_SOLVER"); env && *env) {
    o.smt_solver = std::string(env);
  }
  return o;
}

struct McFlags {
  std::size_t runs = 200;
  std::size_t horizon = 10000;
  std::uint64_t seed = 0xA5F;
  std::string policy = "uniform";
};

void add_mc_flags(CLI::App* cmd, McFlags& f, const std::string& prefix) {
  cmd->add_option("--" + prefix + "runs", f.runs, "Monte Carlo runs")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--" + prefix + "horizon", f.horizon, "Monte Carlo steps per run")
      ->check(CLI::Range(std::size_t{100}, std::numeric_limits<std::size_t>::max()))
      ->capture_default_str();
  cmd->add_option("--seed", f.seed, "Base seed; run i uses seed + i")->capture_default_str();
  cmd->add_option("--policy", f.policy, "Tree direction policy: uniform, L^w, (LR)^w, ...")->capture_default_str();
}

McConfig mc_config(const McFlags& f, unsigned jobs) {
  McConfig c;
  c.runs = f.runs;
  c.horizon = f.horizon;
  c.seed = f.seed;
  c.policy = DirectionPolicy::parse(f.policy);
  c.jobs = jobs;
  return c;
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads.
template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn fn) {
  jobs = static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(jobs, n)));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < jobs; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < n;) fn(i);
    });
  for (auto& t : pool) t.join();
}

unsigned default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Almost-sure productivity analyzer for probabilistic stream and tree definitions", "aspc"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "aspc 0.1.0");

  std::vector<std::string> files;
  bool as_json = false;
  unsigned jobs = 0;

  // check
  auto* check = app.add_subcommand("check", "Decide almost-sure productivity");
  AnalysisFlags check_flags;
  McFlags check_mc;
  bool no_tier3 = false, confirm = false, timing = false, verbose = false;
  check->add_option("files", files, "Definition files")->required();
  check->add_flag("--json", as_json, "JSON report");
  add_analysis_flags(check, check_flags);
  add_mc_flags(check, check_mc, "mc-");
  check->add_flag("--no-tier3", no_tier3, "Never run Monte Carlo");
  check->add_flag("--confirm", confirm, "Run Monte Carlo even when the exact analysis is conclusive");
  check->add_flag("--timing", timing, "Include wall-clock timing (makes output nondeterministic)");
  check->add_flag("-v,--verbose", verbose, "Show head classes and ground chain");
  check->add_option("--jobs", jobs, "Definitions analyzed in parallel (default: hardware threads)");
  std::size_t max_states = DecideConfig{}.max_states;
  check->add_option("--max-states", max_states, "Automaton size above which the exact analysis gives up")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  // measure
  auto* meas = app.add_subcommand("measure", "Print the exact measure of each definition");
  meas->add_option("files", files, "Definition files")->required();
  meas->add_flag("--json", as_json, "JSON output");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Monte Carlo evidence and sample traces");
  McFlags sim_mc;
  std::size_t trace_len = 0;
  sim->add_option("files", files, "Definition files")->required();
  sim->add_flag("--json", as_json, "JSON output");
  add_mc_flags(sim, sim_mc, "");
  sim->add_option("--trace", trace_len, "Also print the first N events of the run with the base seed");
  sim->add_option("--jobs", jobs, "Worker threads");

  // ppda
  auto* ppda = app.add_subcommand("ppda", "Export the translated pushdown automaton");
  std::string format = "graphviz";
  ppda->add_option("files", files, "Definition files")->required();
  ppda->add_option("--format", format, "graphviz or json")->capture_default_str();

  // solve
  auto* solve = app.add_subcommand("solve", "Solve the pop-probability system and classify heads");
  AnalysisFlags solve_flags;
  solve->add_option("files", files, "Definition files")->required();
  solve->add_flag("--json", as_json, "JSON output");
  add_analysis_flags(solve, solve_flags);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << "aspc 0.1.0\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "aspc: " << e.what() << "\n";
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) return 0;
    return kInputError;
  }
  if (jobs == 0) jobs = default_jobs();

  Loaded input = load(files, err);

  try {
    if (*meas) {
      json defs = json::array();
      for (const auto& d : input.definitions) {
        const Rational m = measure(d);
        if (as_json)
          defs.push_back({{"name", d.name}, {"measure", to_string(m)}, {"tier1", m > 0 ? "ASP" : "Abstain"}});
        else
          out << d.name << " " << to_string(m) << "\n";
      }
      if (as_json) out << dump({{"definitions", defs}, {"errors", input.errors}});
      return input.failed ? kInputError : 0;
    }

    if (*ppda) {
      const ExportFormat fmt = parse_export_format(format);
      for (const auto& d : input.definitions) out << export_ppda(translate(d), fmt) << (fmt == ExportFormat::Json ? "\n" : "");
      return input.failed ? kInputError : 0;
    }

    if (*sim) {
      const McConfig cfg = mc_config(sim_mc, jobs);
      json defs = json::array();
      for (const auto& d : input.definitions) {
        const McReport r = monte_carlo(d, cfg);
        Trace trace;
        if (trace_len) trace = sample_run(d, trace_len, cfg.seed, cfg.policy);
        if (as_json) {
          json j = mc_json(r);
          j["name"] = d.name;
          if (trace_len) {
            json ev = json::array();
            for (const auto& e : trace.events) ev.push_back(e.str());
            j["trace"] = ev;
          }
          defs.push_back(std::move(j));
          continue;
        }
        out << d.name << ": " << to_string(r.hint) << " (runs " << r.runs << ", horizon " << r.horizon
            << ", mean rate " << r.mean_rate << ", tail silence " << r.tail_silence << ", tail slope "
            << r.tail_slope << ")\n";
        if (trace_len) out << "  trace: " << to_string(trace.events) << "\n";
      }
      if (as_json) out << dump({{"definitions", defs}, {"errors", input.errors}});
      return input.failed ? kInputError : 0;
    }

    if (*solve) {
      const ClassifyOptions opts = classify_options(solve_flags);
      json defs = json::array();
      for (const auto& d : input.definitions) {
        const EqSystem s = clean(build_system(translate(d))).system;
        const SolveResult k = kleene_solve(s, opts.epsilon, opts.max_iter);
        const Classification c = classify_heads(s, opts);
        json vars = json::array(), heads = json::array();
        if (!as_json) out << d.name << " (" << s.size() << " positive variables, kleene " << k.iterations
                          << " iterations)\n";
        for (std::size_t i = 0; i < s.size(); ++i) {
          const Var& v = s.var(i);
          const HeadClass& hc = c.heads.at(Head{v.q, v.x});
          if (as_json) {
            vars.push_back({{"variable", s.var_name(i)}, {"kleene", k.values[i]}, {"newton", c.newton.values[i]}});
          } else {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.6f", k.values[i]);
            out << "  " << s.var_name(i) << " ≈ " << buf << " " << head_class_text(hc) << "\n";
          }
        }
        for (const auto& [h, hc] : c.heads) {
          if (as_json) {
            json hj{{"head", s.head_name(h)}, {"class", std::string(to_string(hc.kind))}, {"basis", hc.basis}};
            if (hc.bound) hj["bound"] = to_string(*hc.bound);
            heads.push_back(std::move(hj));
          } else if (s.head_variables(h).empty()) {
            out << "  " << s.head_name(h) << " " << head_class_text(hc) << "\n";
          }
        }
        if (as_json)
          defs.push_back({{"name", d.name},
                          {"variables", vars},
                          {"heads", heads},
                          {"singleExit", c.single_exit},
                          {"kleeneIterations", k.iterations}});
      }
      if (as_json) out << dump({{"definitions", defs}, {"errors", input.errors}});
      return input.failed ? kInputError : 0;
    }

    // check
    DecideConfig cfg;
    cfg.classify = classify_options(check_flags);
    cfg.mc = mc_config(check_mc, 1);
    cfg.tier3 = !no_tier3;
    cfg.confirm_with_mc = confirm;
    cfg.max_states = max_states;

    std::vector<Outcome> outcomes(input.definitions.size());
    std::vector<std::string> internal(input.definitions.size());
    parallel_for(outcomes.size(), jobs, [&](std::size_t i) {
      Outcome& o = outcomes[i];
      o.definition = input.definitions[i];
      const auto start = std::chrono::steady_clock::now();
      try {
        o.verdict = decide_asp(o.definition, cfg);
      } catch (const InternalInconsistency& e) {
        internal[i] = e.what();
        o.error = std::string("internal inconsistency: ") + e.what();
      } catch (const std::exception& e) {
        o.error = e.what();
      }
      o.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    });

    bool any_not = false, any_unknown = false, any_internal = false;
    json defs = json::array();
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      const Outcome& o = outcomes[i];
      if (!internal[i].empty()) {
        any_internal = true;
        err << "aspc: internal inconsistency: " << internal[i] << "\n";
      } else if (!o.verdict) {
        err << "aspc: " << o.definition.name << ": " << o.error << "\n";
      }
      const Result r = o.verdict ? o.verdict->result : Result::Unknown;
      any_not = any_not || r == Result::NotAsp;
      any_unknown = any_unknown || r == Result::Unknown;
      if (as_json) defs.push_back(outcome_json(o, timing));
      else out << outcome_text(o, verbose, timing);
    }
    if (as_json) out << dump({{"definitions", defs}, {"errors", input.errors}});
    if (any_internal) return kInternalError;
    if (input.failed) return kInputError;
    if (any_not) return kSomeNotAsp;
    if (any_unknown) return kSomeUnknown;
    return kAllAsp;
  } catch (const std::invalid_argument& e) {
    err << "aspc: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace asp::cli
