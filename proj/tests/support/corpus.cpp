#include "corpus.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "asp/syntax.hpp"

namespace asp::testing {

std::string data_path(std::string_view file) { return std::string(ASP_TEST_DATA_DIR) + "/" + std::string(file); }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::vector<Definition>& corpus() {
  static const std::vector<Definition> defs = parse_file(read_file(data_path("corpus.asp")));
  return defs;
}

const Definition& corpus_def(std::string_view name) {
  for (const auto& d : corpus())
    if (d.name == name) return d;
  throw std::out_of_range("no corpus definition named " + std::string(name));
}

Definition parse_one(std::string_view text) {
  auto defs = parse_file(text);
  if (defs.size() != 1) throw std::invalid_argument("expected exactly one definition");
  return defs.front();
}

}  // namespace asp::testing
