#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "asp/decide.hpp"
#include "asp/syntax.hpp"

namespace asp::cli {

using json = nlohmann::json;

/// One analyzed definition. `error` is set when the analysis itself failed
/// (for example a resource limit); then `verdict` is empty.
struct Outcome {
  Definition definition;
  std::optional<Verdict> verdict;
  std::string error;
  double millis = 0;
};

json mc_json(const McReport& r);
json outcome_json(const Outcome& o, bool timing);
json diagnostic_json(const std::string& file, const Diagnostic& d);

/// Single summary line; with `verbose`, head classes and the chain follow.
std::string outcome_text(const Outcome& o, bool verbose, bool timing);

/// "AlmostSureReturn", "SubReturn(cert 17/50)", "SubReturn(no exit)", "Unknown(kleene >= 0.42)".
std::string head_class_text(const HeadClass& c);

}  // namespace asp::cli
