#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "asp/term.hpp"

namespace asp::testing {

std::string data_path(std::string_view file);
std::string read_file(const std::string& path);

/// The nine reference definitions of data/corpus.asp, in file order.
const std::vector<Definition>& corpus();
const Definition& corpus_def(std::string_view name);

/// Parses a single definition; throws on error.
Definition parse_one(std::string_view text);

}  // namespace asp::testing
