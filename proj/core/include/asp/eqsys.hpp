#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asp/graph.hpp"
#include "asp/lp.hpp"
#include "asp/ppda.hpp"
#include "asp/rational.hpp"

namespace asp {

/// Pop-probability variable [q X q']: probability that a run from state q
/// with the single symbol X eventually pops X and lands in q'.
struct Var {
  StateId q = 0;
  Symbol x = Symbol::Tl;
  StateId exit = 0;

  friend bool operator==(const Var&, const Var&) = default;
  friend auto operator<=>(const Var&, const Var&) = default;
};

/// Excursion start point (q, X).
struct Head {
  StateId q = 0;
  Symbol x = Symbol::Tl;

  friend bool operator==(const Head&, const Head&) = default;
  friend auto operator<=>(const Head&, const Head&) = default;
};

/// coeff * product of vars; vars is sorted and has length 0, 1 or 2.
struct Monomial {
  Rational coeff;
  std::vector<std::size_t> vars;

  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Monotone polynomial system x = F(x), one equation per variable.
class EqSystem {
 public:
  EqSystem() = default;
  EqSystem(std::vector<std::string> state_names, std::vector<Symbol> alphabet);

  /// Throws std::invalid_argument on a duplicate or out-of-range variable.
  std::size_t add_variable(const Var& v);
  /// Adds coeff * prod(vars) to equation `eq`, merging like monomials.
  /// Zero coefficients are dropped; negative ones throw.
  void add_term(std::size_t eq, const Rational& coeff, std::vector<std::size_t> vars);

  std::size_t size() const { return vars_.size(); }
  bool empty() const { return vars_.empty(); }
  const Var& var(std::size_t i) const { return vars_[i]; }
  const std::vector<Var>& variables() const { return vars_; }
  const std::vector<Monomial>& equation(std::size_t i) const { return eqs_[i]; }
  std::optional<std::size_t> find(const Var& v) const;

  const std::vector<std::string>& state_names() const { return state_names_; }
  const std::vector<Symbol>& alphabet() const { return alphabet_; }
  /// Every (q, X) over the states and alphabet, ascending.
  std::vector<Head> heads() const;
  /// Indices of the variables [h.q h.X *], ascending.
  std::vector<std::size_t> head_variables(const Head& h) const;

  std::string var_name(std::size_t i) const;   // [q,X,q'] with state names
  std::string head_name(const Head& h) const;  // (q,X)
  std::string smt_name(std::size_t i) const;   // v_q_X_q' with state indices

  Rational eval(std::size_t i, const std::vector<Rational>& x) const;
  double eval(std::size_t i, const std::vector<double>& x) const;
  /// Edge i -> j when variable j occurs in equation i.
  Adjacency dependencies() const;

 private:
  std::vector<std::string> state_names_;
  std::vector<Symbol> alphabet_;
  std::vector<Var> vars_;
  std::vector<std::vector<Monomial>> eqs_;
  std::map<Var, std::size_t> index_;
};

/// Pop-probability system of a translated automaton. Variables are ordered
/// by (q, X, q').
EqSystem build_system(const Ppda& p);

struct Cleaned {
  EqSystem system;
  std::vector<bool> positive;                     // per original variable
  std::vector<std::optional<std::size_t>> index;  // original -> cleaned
};

/// Drops every variable whose least fixed point is 0, together with the
/// monomials that mention it.
Cleaned clean(const EqSystem& s);

struct SolveResult {
  std::vector<double> values;
  std::size_t iterations = 0;
  bool converged = false;
};

/// x <- F(x) from 0 with downward rounding: every iterate is a lower bound
/// on the least fixed point. Stops when the largest change is below epsilon.
SolveResult kleene_solve(const EqSystem& s, double epsilon, std::size_t max_iter);

/// Newton's method, SCC by SCC in dependency order, each from 0. A singular
/// Jacobian falls back to Kleene for that SCC. `iterations` is the total.
SolveResult newton_solve(const EqSystem& s, double epsilon, std::size_t max_iter = 200);

/// Least fixed point in exact rationals wherever linear algebra reaches it:
/// SCC by SCC, a component whose monomials each mention at most one of its
/// own variables, and otherwise only exactly known ones, is solved as
/// (I - A) x = b. `known` seeds values established elsewhere (for instance
/// 1 for almost-sure variables). Components larger than `max_block` are skipped.
std::vector<std::optional<Rational>> exact_lfp(const EqSystem& s, std::vector<std::optional<Rational>> known = {},
                                               std::size_t max_block = 64);

/// Exact check: F(v) <= v on the variables the head depends on, and the
/// head's entries of v sum to less than 1. Requires v in [0,1]^n.
bool certify_subreturn(const EqSystem& s, const Head& h, const std::vector<Rational>& candidate);

enum class ReturnClass { AlmostSure, Sub, Unknown };

std::string_view to_string(ReturnClass c);

struct HeadClass {
  ReturnClass kind = ReturnClass::Unknown;
  /// "no-exit", "spectral", "exact", "certificate", "smt" or "unresolved".
  std::string basis;
  /// Verified pre-fixed point over the whole cleaned system (Sub only, may be empty).
  std::vector<Rational> certificate;
  /// Upper bound on the return probability given by the certificate.
  std::optional<Rational> bound;
  double kleene_lower = 0;  // Unknown only
  std::size_t iterations = 0;
};

struct ClassifyOptions {
  double epsilon = 1e-9;
  std::size_t max_iter = 100000;
  std::optional<std::string> smt_solver;  // executable reading SMT-LIB2 on a file argument
};

struct Classification {
  std::map<Head, HeadClass> heads;
  bool single_exit = true;  // every head has at most one surviving exit
  SolveResult newton;
};

/// Three-valued per-head classification of a cleaned system. Heads whose
/// dependency closure only involves single-exit heads are decided exactly by
/// the criticality test; the rest get an exact rational solution, a
/// certificate, an SMT answer, or Unknown, in that order.
Classification classify_heads(const EqSystem& cleaned, const ClassifyOptions& opts = {});

/// Rounds Newton values up into candidate pre-fixed points, coarsest first,
/// then along (I - J)^-1 1 for the Jacobian J at the approximation; returns
/// the first one that certifies the head.
std::optional<std::vector<Rational>> find_certificate(const EqSystem& s, const Head& h,
                                                      const std::vector<double>& approx);

/// rho(B) <= 1 for a nonnegative square matrix, decided exactly. A matrix not
/// known to be irreducible is split into strongly connected blocks first.
bool spectral_le_one(const RationalMatrix& b, bool irreducible);

/// QF_NRA sentence "some fixed point in [0,1]^n has head sum < 1" over the
/// head's dependency closure. Throws std::invalid_argument for a head with
/// no variables.
std::string smt_export(const EqSystem& s, const Head& h);

/// Runs an SMT solver on `script`. true: sat, false: unsat, nullopt: anything else.
std::optional<bool> run_smt_solver(const std::string& solver, const std::string& script);

/// Variables reachable from `roots` in the dependency graph, ascending.
std::vector<std::size_t> dependency_closure(const EqSystem& s, const std::vector<std::size_t>& roots);

}  // namespace asp
