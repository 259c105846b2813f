#include "idelex/run_config.hpp"

#include <fstream>

#include "idelex/error.hpp"

namespace idelex {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

const std::set<std::string>& RunConfig::known_keys() {
  static const std::set<std::string> keys = {
      "data",    "out",       "ps",       "seed",       "epochs",        "learning_rate", "l2",
      "unk_rate", "shared_groups", "context_ngram", "lowercase", "model", "gazetteer", "input",
      "output",  "tau",       "k",        "ood_slots",  "seed_cap",      "entropy_floor", "baseline",
      "trace",   "threads",   "gold",     "pred",       "categories",    "json",          "spec",
  };
  return keys;
}

RunConfig RunConfig::read(std::istream& in) {
  RunConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected key = value");
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    for (auto& c : key)
      if (c == '-') c = '_';
    if (!known_keys().count(key)) throw ParseError(line_no, "unknown configuration key '" + key + "'");
    if (!cfg.values_.emplace(key, value).second) throw ParseError(line_no, "duplicate key '" + key + "'");
  }
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read(in);
}

std::optional<std::string> RunConfig::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

}  // namespace idelex
