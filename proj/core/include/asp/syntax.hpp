#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "asp/term.hpp"

namespace asp {

/// A located problem in a definition file. Lines and columns are 1-based.
struct Diagnostic {
  int line = 0;
  int column = 0;
  std::string message;

  std::string str() const;
};

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(Diagnostic d);
  const Diagnostic& diagnostic() const { return diag_; }

 private:
  Diagnostic diag_;
};

struct ParseResult {
  std::vector<Definition> definitions;
  std::vector<Diagnostic> errors;
};

/// Parses every definition it can; a malformed definition is reported and
/// skipped, parsing resumes at the next `stream`/`tree` keyword.
ParseResult parse_file_lenient(std::string_view text);

/// Strict variant: throws ParseError for the first problem in the file.
std::vector<Definition> parse_file(std::string_view text);

/// Canonical concrete syntax with minimal parentheses, e.g. `stream s = a : s`.
std::string pretty_print(const Definition& d);

/// Prints a term of definition `rec_name` (the recursion variable prints as
/// the definition name).
std::string print_term(const Term& t, std::string_view rec_name);

/// Distinct subterms of the body in pre-order (left to right), deduplicated
/// by structural equality. Always contains the body and the recursion variable.
std::vector<Term> subterms(const Definition& d);

}  // namespace asp
