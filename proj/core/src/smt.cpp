#include <array>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

#include "asp/eqsys.hpp"

namespace asp {

namespace {

std::string real(const Rational& r) {
  const auto num = numerator(r).str();
  const auto den = denominator(r).str();
  if (den == "1") return num + ".0";
  return "(/ " + num + ".0 " + den + ".0)";
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  return out + "'";
}

}  // namespace

std::string smt_export(const EqSystem& s, const Head& h) {
  const auto head_vars = s.head_variables(h);
  if (head_vars.empty()) throw std::invalid_argument("smt_export: head " + s.head_name(h) + " has no variables");
  const auto closure = dependency_closure(s, head_vars);

  std::ostringstream os;
  os << "; head " << s.head_name(h) << "\n(set-logic QF_NRA)\n";
  for (std::size_t i : closure) os << "(declare-fun " << s.smt_name(i) << " () Real)\n";
  for (std::size_t i : closure)
    os << "(assert (and (<= 0.0 " << s.smt_name(i) << ") (<= " << s.smt_name(i) << " 1.0)))\n";
  for (std::size_t i : closure) {
    os << "(assert (= " << s.smt_name(i) << " (+ 0.0";
    for (const auto& m : s.equation(i)) {
      if (m.vars.empty()) {
        os << " " << real(m.coeff);
        continue;
      }
      os << " (*";
      os << " " << real(m.coeff);
      for (std::size_t v : m.vars) os << " " << s.smt_name(v);
      os << ")";
    }
    os << ")))\n";
  }
  os << "(assert (< (+ 0.0";
  for (std::size_t i : head_vars) os << " " << s.smt_name(i);
  os << ") 1.0))\n(check-sat)\n(exit)\n";
  return os.str();
}

std::optional<bool> run_smt_solver(const std::string& solver, const std::string& script) {
  static std::atomic<unsigned> counter{0};
  namespace fs = std::filesystem;
  const fs::path file = fs::temp_directory_path() / ("asp-" + std::to_string(::getpid()) + "-" +
                                                     std::to_string(counter++) + ".smt2");
  {
    std::ofstream out(file);
    if (!out) return std::nullopt;
    out << script;
  }
  const std::string cmd = shell_quote(solver) + " " + shell_quote(file.string()) + " 2>/dev/null";
  std::string output;
  if (FILE* pipe = ::popen(cmd.c_str(), "r")) {
    std::array<char, 256> buf{};
    while (std::fgets(buf.data(), static_cast<int>(buf.size()), pipe)) output += buf.data();
    ::pclose(pipe);
  }
  std::error_code ec;
  fs::remove(file, ec);

  std::istringstream lines(output);
  std::string word;
  lines >> word;
  if (word == "sat") return true;
  if (word == "unsat") return false;
  return std::nullopt;
}

}  // namespace asp
