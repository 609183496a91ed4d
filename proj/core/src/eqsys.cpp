#include "asp/eqsys.hpp"

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace asp {

EqSystem::EqSystem(std::vector<std::string> state_names, std::vector<Symbol> alphabet)
    : state_names_(std::move(state_names)), alphabet_(std::move(alphabet)) {}

std::size_t EqSystem::add_variable(const Var& v) {
  if (v.q >= state_names_.size() || v.exit >= state_names_.size())
    throw std::invalid_argument("add_variable: state out of range");
  if (std::find(alphabet_.begin(), alphabet_.end(), v.x) == alphabet_.end())
    throw std::invalid_argument("add_variable: symbol not in alphabet");
  auto [it, inserted] = index_.emplace(v, vars_.size());
  if (!inserted) throw std::invalid_argument("add_variable: duplicate variable " + var_name(it->second));
  vars_.push_back(v);
  eqs_.emplace_back();
  return it->second;
}

void EqSystem::add_term(std::size_t eq, const Rational& coeff, std::vector<std::size_t> vars) {
  if (eq >= eqs_.size()) throw std::out_of_range("add_term: no such equation");
  if (coeff < 0) throw std::invalid_argument("add_term: negative coefficient");
  if (vars.size() > 2) throw std::invalid_argument("add_term: degree above 2");
  for (std::size_t v : vars)
    if (v >= vars_.size()) throw std::out_of_range("add_term: no such variable");
  if (coeff == 0) return;
  std::sort(vars.begin(), vars.end());
  auto& e = eqs_[eq];
  for (auto& m : e)
    if (m.vars == vars) {
      m.coeff += coeff;
      return;
    }
  e.push_back({coeff, std::move(vars)});
}

std::optional<std::size_t> EqSystem::find(const Var& v) const {
  auto it = index_.find(v);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<Head> EqSystem::heads() const {
  std::vector<Head> out;
  for (StateId q = 0; q < state_names_.size(); ++q)
    for (Symbol x : alphabet_) out.push_back({q, x});
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> EqSystem::head_variables(const Head& h) const {
  std::vector<std::size_t> out;
  for (auto it = index_.lower_bound(Var{h.q, h.x, 0}); it != index_.end(); ++it) {
    if (it->first.q != h.q || it->first.x != h.x) break;
    out.push_back(it->second);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string EqSystem::var_name(std::size_t i) const {
  const Var& v = vars_.at(i);
  return "[" + state_names_[v.q] + "," + std::string(to_string(v.x)) + "," + state_names_[v.exit] + "]";
}

std::string EqSystem::head_name(const Head& h) const {
  return "(" + state_names_.at(h.q) + "," + std::string(to_string(h.x)) + ")";
}

std::string EqSystem::smt_name(std::size_t i) const {
  const Var& v = vars_.at(i);
  return "v_" + std::to_string(v.q) + "_" + std::string(to_string(v.x)) + "_" + std::to_string(v.exit);
}

Rational EqSystem::eval(std::size_t i, const std::vector<Rational>& x) const {
  Rational sum = 0;
  for (const auto& m : eqs_.at(i)) {
    Rational t = m.coeff;
    for (std::size_t v : m.vars) t *= x[v];
    sum += t;
  }
  return sum;
}

double EqSystem::eval(std::size_t i, const std::vector<double>& x) const {
  double sum = 0;
  for (const auto& m : eqs_.at(i)) {
    double t = to_double(m.coeff);
    for (std::size_t v : m.vars) t *= x[v];
    sum += t;
  }
  return sum;
}

Adjacency EqSystem::dependencies() const {
  Adjacency g(vars_.size());
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    for (const auto& m : eqs_[i]) g[i].insert(g[i].end(), m.vars.begin(), m.vars.end());
    std::sort(g[i].begin(), g[i].end());
    g[i].erase(std::unique(g[i].begin(), g[i].end()), g[i].end());
  }
  return g;
}

EqSystem build_system(const Ppda& p) {
  std::vector<std::string> names;
  for (StateId q = 0; q < p.num_states(); ++q) names.push_back(p.state_text(q));
  EqSystem s(std::move(names), p.alphabet());
  const std::size_t n = p.num_states();
  for (StateId q = 0; q < n; ++q)
    for (Symbol x : p.alphabet())
      for (StateId e = 0; e < n; ++e) s.add_variable({q, x, e});

  for (std::size_t i = 0; i < s.size(); ++i) {
    const Var v = s.var(i);
    for (const Move& m : p.row(v.q, v.x)) {
      switch (m.push.size()) {
        case 0:
          if (m.next == v.exit) s.add_term(i, m.prob, {});
          break;
        case 1:
          s.add_term(i, m.prob, {*s.find({m.next, v.x, v.exit})});
          break;
        case 2:
          for (StateId mid = 0; mid < n; ++mid)
            s.add_term(i, m.prob, {*s.find({m.next, m.push[0], mid}), *s.find({mid, v.x, v.exit})});
          break;
        default:
          throw std::logic_error("build_system: push string longer than 2");
      }
    }
  }
  return s;
}

Cleaned clean(const EqSystem& s) {
  const std::size_t n = s.size();
  std::vector<bool> pos(n, false);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (pos[i]) continue;
      for (const auto& m : s.equation(i)) {
        if (std::all_of(m.vars.begin(), m.vars.end(), [&](std::size_t v) { return pos[v]; })) {
          pos[i] = changed = true;
          break;
        }
      }
    }
  }

  Cleaned out{EqSystem(s.state_names(), s.alphabet()), pos, std::vector<std::optional<std::size_t>>(n)};
  for (std::size_t i = 0; i < n; ++i)
    if (pos[i]) out.index[i] = out.system.add_variable(s.var(i));
  for (std::size_t i = 0; i < n; ++i) {
    if (!pos[i]) continue;
    for (const auto& m : s.equation(i)) {
      std::vector<std::size_t> vars;
      bool keep = true;
      for (std::size_t v : m.vars) {
        if (!out.index[v]) {
          keep = false;
          break;
        }
        vars.push_back(*out.index[v]);
      }
      if (keep) out.system.add_term(*out.index[i], m.coeff, std::move(vars));
    }
  }
  return out;
}

namespace {

class RoundingGuard {
 public:
  explicit RoundingGuard(int mode) : saved_(std::fegetround()) { std::fesetround(mode); }
  ~RoundingGuard() { std::fesetround(saved_); }
  RoundingGuard(const RoundingGuard&) = delete;
  RoundingGuard& operator=(const RoundingGuard&) = delete;

 private:
  int saved_;
};

struct FastMonomial {
  double coeff;
  std::uint32_t a, b;
  std::uint8_t degree;
};

// Coefficients converted with the given rounding; evaluation is plain double.
std::vector<std::vector<FastMonomial>> compile(const EqSystem& s, bool round_down) {
  std::vector<std::vector<FastMonomial>> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    for (const auto& m : s.equation(i)) {
      FastMonomial f{round_down ? to_double_down(m.coeff) : to_double(m.coeff), 0, 0,
                     static_cast<std::uint8_t>(m.vars.size())};
      if (f.degree >= 1) f.a = static_cast<std::uint32_t>(m.vars[0]);
      if (f.degree == 2) f.b = static_cast<std::uint32_t>(m.vars[1]);
      out[i].push_back(f);
    }
  return out;
}

double eval_fast(const std::vector<FastMonomial>& eq, const std::vector<double>& x) {
  double sum = 0;
  for (const auto& m : eq) {
    double t = m.coeff;
    if (m.degree >= 1) t *= x[m.a];
    if (m.degree == 2) t *= x[m.b];
    sum += t;
  }
  return sum;
}

}  // namespace

SolveResult kleene_solve(const EqSystem& s, double epsilon, std::size_t max_iter) {
  if (!(epsilon >= 0)) throw std::invalid_argument("kleene_solve: epsilon must be nonnegative");
  SolveResult r;
  r.values.assign(s.size(), 0.0);
  if (s.empty()) {
    r.converged = true;
    return r;
  }
  const auto eqs = compile(s, true);
  RoundingGuard guard(FE_DOWNWARD);
  std::vector<double> next(s.size());
  while (r.iterations < max_iter) {
    double change = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      next[i] = eval_fast(eqs[i], r.values);
      change = std::max(change, next[i] - r.values[i]);
    }
    r.values.swap(next);
    ++r.iterations;
    if (change < epsilon) {
      r.converged = true;
      break;
    }
  }
  return r;
}

SolveResult newton_solve(const EqSystem& s, double epsilon, std::size_t max_iter) {
  SolveResult r;
  r.values.assign(s.size(), 0.0);
  r.converged = true;
  if (s.empty()) return r;
  const auto eqs = compile(s, false);
  auto& x = r.values;

  for (const auto& comp : strongly_connected_components(s.dependencies())) {
    const std::size_t k = comp.size();
    std::vector<std::ptrdiff_t> local(s.size(), -1);
    for (std::size_t a = 0; a < k; ++a) local[comp[a]] = static_cast<std::ptrdiff_t>(a);

    bool cyclic = k > 1;
    if (!cyclic)
      for (const auto& m : eqs[comp[0]])
        if ((m.degree >= 1 && m.a == comp[0]) || (m.degree == 2 && m.b == comp[0])) cyclic = true;
    if (!cyclic) {
      x[comp[0]] = std::clamp(eval_fast(eqs[comp[0]], x), 0.0, 1.0);
      ++r.iterations;
      continue;
    }

    bool singular = false;
    bool comp_converged = false;
    for (std::size_t it = 0; it < max_iter; ++it) {
      Eigen::MatrixXd a = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
      Eigen::VectorXd f(static_cast<Eigen::Index>(k));
      for (std::size_t row = 0; row < k; ++row) {
        const auto ri = static_cast<Eigen::Index>(row);
        f(ri) = eval_fast(eqs[comp[row]], x) - x[comp[row]];
        for (const auto& m : eqs[comp[row]]) {
          if (m.degree >= 1 && local[m.a] >= 0) a(ri, local[m.a]) -= m.coeff * (m.degree == 2 ? x[m.b] : 1.0);
          if (m.degree == 2 && local[m.b] >= 0) a(ri, local[m.b]) -= m.coeff * x[m.a];
        }
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
      if (lu.rank() < static_cast<Eigen::Index>(k)) {
        singular = true;
        break;
      }
      Eigen::VectorXd delta = lu.solve(f);
      double change = 0;
      ++r.iterations;
      for (std::size_t row = 0; row < k; ++row) {
        const double d = delta(static_cast<Eigen::Index>(row));
        if (!std::isfinite(d)) {
          singular = true;
          break;
        }
        const double old = x[comp[row]];
        x[comp[row]] = std::clamp(old + d, old, 1.0);
        change = std::max(change, x[comp[row]] - old);
      }
      if (singular) break;
      if (change < epsilon) {
        comp_converged = true;
        break;
      }
    }

    if (singular) {
      // Kleene from the current point, which is below the fixed point.
      std::vector<double> next(k);
      comp_converged = false;
      for (std::size_t it = 0; it < 100 * max_iter; ++it) {
        double change = 0;
        for (std::size_t row = 0; row < k; ++row) next[row] = std::min(1.0, eval_fast(eqs[comp[row]], x));
        for (std::size_t row = 0; row < k; ++row) {
          change = std::max(change, next[row] - x[comp[row]]);
          x[comp[row]] = std::max(x[comp[row]], next[row]);
        }
        ++r.iterations;
        if (change < epsilon) {
          comp_converged = true;
          break;
        }
      }
    }
    r.converged = r.converged && comp_converged;
  }
  return r;
}

std::vector<std::size_t> dependency_closure(const EqSystem& s, const std::vector<std::size_t>& roots) {
  auto seen = reachable_from(s.dependencies(), roots);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (seen[i]) out.push_back(i);
  return out;
}

std::vector<std::optional<Rational>> exact_lfp(const EqSystem& s, std::vector<std::optional<Rational>> known,
                                               std::size_t max_block) {
  const std::size_t n = s.size();
  if (known.empty()) known.resize(n);
  if (known.size() != n) throw std::invalid_argument("exact_lfp: size mismatch");
  for (const auto& comp : strongly_connected_components(s.dependencies())) {
    if (std::all_of(comp.begin(), comp.end(), [&](std::size_t v) { return known[v].has_value(); })) continue;
    if (comp.size() > max_block) continue;
    std::vector<std::ptrdiff_t> local(n, -1);
    for (std::size_t a = 0; a < comp.size(); ++a) local[comp[a]] = static_cast<std::ptrdiff_t>(a);

    // x = A x + b over the component, with outside variables substituted.
    const std::size_t k = comp.size();
    RationalMatrix a(k, std::vector<Rational>(k));
    std::vector<Rational> b(k);
    bool linear = true;
    for (std::size_t row = 0; row < k && linear; ++row) {
      for (const auto& m : s.equation(comp[row])) {
        Rational c = m.coeff;
        std::optional<std::size_t> inside;
        for (std::size_t v : m.vars) {
          if (local[v] >= 0) {
            if (inside) linear = false;
            inside = static_cast<std::size_t>(local[v]);
          } else if (known[v]) {
            c *= *known[v];
          } else {
            linear = false;
          }
        }
        if (!linear) break;
        if (inside) a[row][*inside] += c;
        else b[row] += c;
      }
    }
    if (!linear) continue;
    for (std::size_t i = 0; i < k; ++i) {
      for (auto& v : a[i]) v = -v;
      a[i][i] += 1;
    }
    // Cleaned and strongly connected: a nonnegative solution exists iff
    // rho(A) < 1, and then it is the least fixed point.
    auto x = solve_linear(std::move(a), std::move(b));
    if (!x || std::any_of(x->begin(), x->end(), [](const Rational& v) { return v < 0 || v > 1; })) continue;
    for (std::size_t i = 0; i < k; ++i) known[comp[i]] = (*x)[i];
  }
  return known;
}

bool certify_subreturn(const EqSystem& s, const Head& h, const std::vector<Rational>& candidate) {
  if (candidate.size() != s.size()) throw std::invalid_argument("certify_subreturn: candidate size mismatch");
  for (const auto& v : candidate)
    if (v < 0 || v > 1) throw std::invalid_argument("certify_subreturn: candidate outside [0,1]");
  const auto head_vars = s.head_variables(h);
  Rational sum = 0;
  for (std::size_t i : head_vars) sum += candidate[i];
  if (sum >= 1) return false;
  for (std::size_t i : dependency_closure(s, head_vars))
    if (s.eval(i, candidate) > candidate[i]) return false;
  return true;
}

std::optional<std::vector<Rational>> find_certificate(const EqSystem& s, const Head& h,
                                                      const std::vector<double>& approx) {
  if (approx.size() != s.size()) throw std::invalid_argument("find_certificate: size mismatch");
  const Rational nudge = Rational(1) / (1 << 20);
  const Rational coarse = Rational(1) / (1 << 10);
  auto base = [&](std::size_t i) { return from_double(std::isfinite(approx[i]) ? std::max(0.0, approx[i]) : 1.0); };
  auto clamp1 = [](Rational v) { return v > 1 ? Rational(1) : v; };

  std::vector<std::vector<Rational>> candidates;
  // Short decimals first: they make readable certificates.
  for (int digits = 2; digits <= 6; ++digits) {
    boost::multiprecision::mpz_int scale = 1;
    for (int d = 0; d < digits; ++d) scale *= 10;
    std::vector<Rational> v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      Rational scaled = (base(i) + nudge) * Rational(scale);
      boost::multiprecision::mpz_int num = numerator(scaled), den = denominator(scaled);
      boost::multiprecision::mpz_int up = (num + den - 1) / den;
      v[i] = clamp1(Rational(up) / Rational(scale));
    }
    candidates.push_back(std::move(v));
  }
  for (const Rational& step : {nudge, coarse}) {
    std::vector<Rational> v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) v[i] = clamp1(base(i) + step);
    candidates.push_back(std::move(v));
  }
  for (auto& c : candidates)
    if (certify_subreturn(s, h, c)) return std::move(c);

  // A uniform nudge fails when J 1 > 1 in some row even though rho(J) < 1.
  // Along w = (I - J)^-1 1 the first-order change is F(x + d w) - (x + d w) = -d 1.
  const auto closure = dependency_closure(s, s.head_variables(h));
  constexpr std::size_t kMaxDense = 2000;
  if (closure.empty() || closure.size() > kMaxDense) return std::nullopt;
  const auto k = static_cast<Eigen::Index>(closure.size());
  std::vector<std::ptrdiff_t> local(s.size(), -1);
  for (std::size_t a = 0; a < closure.size(); ++a) local[closure[a]] = static_cast<std::ptrdiff_t>(a);
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(k, k);
  for (std::size_t row = 0; row < closure.size(); ++row)
    for (const auto& mono : s.equation(closure[row])) {
      const double c = to_double(mono.coeff);
      const auto r = static_cast<Eigen::Index>(row);
      if (mono.vars.size() == 1) m(r, local[mono.vars[0]]) -= c;
      if (mono.vars.size() == 2) {
        m(r, local[mono.vars[0]]) -= c * approx[mono.vars[1]];
        m(r, local[mono.vars[1]]) -= c * approx[mono.vars[0]];
      }
    }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  if (lu.rank() < k) return std::nullopt;
  const Eigen::VectorXd w = lu.solve(Eigen::VectorXd::Ones(k));
  const double top = w.maxCoeff();
  if (!std::isfinite(top) || w.minCoeff() <= 0) return std::nullopt;
  for (int exp : {30, 20, 10}) {
    std::vector<Rational> v(s.size(), Rational(1));
    for (std::size_t a = 0; a < closure.size(); ++a) {
      const double step = std::ldexp(w(static_cast<Eigen::Index>(a)) / top, -exp);
      v[closure[a]] = clamp1(base(closure[a]) + from_double(step));
    }
    if (certify_subreturn(s, h, v)) return v;
  }
  return std::nullopt;
}

bool spectral_le_one(const RationalMatrix& b, bool irreducible) {
  const std::size_t n = b.size();
  for (const auto& row : b) {
    if (row.size() != n) throw std::invalid_argument("spectral_le_one: matrix not square");
    for (const auto& v : row)
      if (v < 0) throw std::invalid_argument("spectral_le_one: negative entry");
  }
  if (n == 0) return true;

  if (!irreducible) {
    Adjacency g(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (b[i][j] > 0) g[i].push_back(j);
    for (const auto& comp : strongly_connected_components(g)) {
      if (comp.size() == 1 && b[comp[0]][comp[0]] == 0) continue;
      RationalMatrix block(comp.size(), std::vector<Rational>(comp.size()));
      for (std::size_t i = 0; i < comp.size(); ++i)
        for (std::size_t j = 0; j < comp.size(); ++j) block[i][j] = b[comp[i]][comp[j]];
      if (!spectral_le_one(block, true)) return false;
    }
    return true;
  }

  // B v <= v with v = 1 + w, w >= 0:  (B - I) w <= 1 - B 1.
  RationalMatrix a = b;
  std::vector<Rational> rhs(n, Rational(1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) rhs[i] -= b[i][j];
    a[i][i] -= 1;
  }
  return linear_feasible(a, rhs);
}

std::string_view to_string(ReturnClass c) {
  switch (c) {
    case ReturnClass::AlmostSure:
      return "AlmostSureReturn";
    case ReturnClass::Sub:
      return "SubReturn";
    case ReturnClass::Unknown:
      return "Unknown";
  }
  return "?";
}

namespace {

std::optional<Rational> exact_sum(const std::vector<std::optional<Rational>>& values,
                                  const std::vector<std::size_t>& vars) {
  Rational sum = 0;
  for (std::size_t v : vars) {
    if (!values[v]) return std::nullopt;
    sum += *values[v];
  }
  return sum;
}

}  // namespace

Classification classify_heads(const EqSystem& s, const ClassifyOptions& opts) {
  Classification out;
  const std::size_t n = s.size();
  const Adjacency deps = s.dependencies();

  // Exact analysis applies to variables whose whole closure is single-exit
  // and has coefficient mass at most 1 at the all-ones point.
  std::vector<bool> tainted(n, false);
  for (const Head& h : s.heads()) {
    auto vars = s.head_variables(h);
    if (vars.size() > 1) {
      out.single_exit = false;
      for (std::size_t v : vars) tainted[v] = true;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    Rational mass = 0;
    for (const auto& m : s.equation(i)) mass += m.coeff;
    if (mass > 1) tainted[i] = true;
  }
  Adjacency reverse(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j : deps[i]) reverse[j].push_back(i);
  std::vector<std::size_t> seeds;
  for (std::size_t i = 0; i < n; ++i)
    if (tainted[i]) seeds.push_back(i);
  tainted = reachable_from(reverse, seeds);

  enum class Status { Pending, AlmostSure, Sub };
  std::vector<Status> status(n, Status::Pending);
  for (const auto& comp : strongly_connected_components(deps)) {
    if (tainted[comp[0]]) continue;  // uniform within an SCC
    std::vector<std::ptrdiff_t> local(n, -1);
    for (std::size_t a = 0; a < comp.size(); ++a) local[comp[a]] = static_cast<std::ptrdiff_t>(a);

    bool deficient = false;
    bool cyclic = comp.size() > 1;
    RationalMatrix jac(comp.size(), std::vector<Rational>(comp.size()));
    for (std::size_t row = 0; row < comp.size() && !deficient; ++row) {
      Rational mass = 0;
      for (const auto& m : s.equation(comp[row])) {
        for (std::size_t v : m.vars) {
          if (local[v] < 0 && status[v] == Status::Sub) deficient = true;
          if (local[v] >= 0) {
            jac[row][static_cast<std::size_t>(local[v])] += m.coeff;
            if (v == comp[row]) cyclic = true;
          }
        }
        mass += m.coeff;
      }
      if (mass < 1) deficient = true;
    }
    Status st;
    if (deficient) st = Status::Sub;
    else if (!cyclic) st = Status::AlmostSure;
    else st = spectral_le_one(jac, true) ? Status::AlmostSure : Status::Sub;
    for (std::size_t v : comp) status[v] = st;
  }

  out.newton = newton_solve(s, std::min(opts.epsilon, 1e-12));
  std::optional<SolveResult> kleene;
  std::optional<std::vector<std::optional<Rational>>> exact;
  auto exact_values = [&]() -> const std::vector<std::optional<Rational>>& {
    if (!exact) {
      std::vector<std::optional<Rational>> known(n);
      for (std::size_t i = 0; i < n; ++i)
        if (!tainted[i] && status[i] == Status::AlmostSure) known[i] = Rational(1);
      exact = exact_lfp(s, std::move(known));
    }
    return *exact;
  };

  for (const Head& h : s.heads()) {
    HeadClass hc;
    const auto vars = s.head_variables(h);
    if (vars.empty()) {
      hc.kind = ReturnClass::Sub;
      hc.basis = "no-exit";
      hc.bound = Rational(0);
    } else if (!tainted[vars[0]]) {
      hc.basis = "spectral";
      hc.kind = status[vars[0]] == Status::AlmostSure ? ReturnClass::AlmostSure : ReturnClass::Sub;
    } else if (auto total = exact_sum(exact_values(), vars); total && *total <= 1) {
      hc.basis = "exact";
      if (*total == 1) {
        hc.kind = ReturnClass::AlmostSure;
      } else {
        // The least fixed point itself: exact on the closure, 1 elsewhere.
        hc.kind = ReturnClass::Sub;
        hc.certificate.assign(n, Rational(1));
        for (std::size_t i : dependency_closure(s, vars)) hc.certificate[i] = *exact_values()[i];
      }
    } else if (auto cert = find_certificate(s, h, out.newton.values)) {
      hc.kind = ReturnClass::Sub;
      hc.basis = "certificate";
      hc.certificate = std::move(*cert);
    } else {
      std::optional<bool> sat;
      if (opts.smt_solver) sat = run_smt_solver(*opts.smt_solver, smt_export(s, h));
      if (sat) {
        hc.kind = *sat ? ReturnClass::Sub : ReturnClass::AlmostSure;
        hc.basis = "smt";
      } else {
        if (!kleene) kleene = kleene_solve(s, opts.epsilon, opts.max_iter);
        hc.kind = ReturnClass::Unknown;
        hc.basis = "unresolved";
        for (std::size_t v : vars) hc.kleene_lower += kleene->values[v];
        hc.iterations = kleene->iterations;
      }
    }
    if (hc.kind == ReturnClass::Sub && hc.basis == "spectral") {
      if (auto cert = find_certificate(s, h, out.newton.values)) hc.certificate = std::move(*cert);
    }
    if (!hc.certificate.empty()) {
      Rational sum = 0;
      for (std::size_t v : vars) sum += hc.certificate[v];
      hc.bound = sum;
    }
    out.heads.emplace(h, std::move(hc));
  }
  return out;
}

}  // namespace asp
