#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "idelex/candidate.hpp"
#include "idelex/gazetteer.hpp"

namespace idelex {

struct Match {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string slot_type;

  auto operator<=>(const Match&) const = default;
};

/// Token trie over the matchable slot phrases of a gazetteer.
class PhraseMatcher {
 public:
  explicit PhraseMatcher(const Gazetteer& gazetteer);

  /// Left-to-right scan taking the longest matchable phrase at each
  /// position; matches never overlap. A phrase attested under several slot
  /// types of one shared group reports the lexicographically first type.
  std::vector<Match> find(const Tokens& tokens) const;

  std::size_t phrase_count() const noexcept { return phrases_; }

 private:
  struct Node {
    std::map<std::string, std::size_t> children;
    std::set<std::string> slot_types;
  };
  std::vector<Node> nodes_;
  std::size_t phrases_ = 0;
};

std::vector<Match> find_matches(const Tokens& tokens, const Gazetteer& gazetteer);

/// Original plus every subset of replaced matches. When 2^M exceeds `cap`,
/// keeps the original and the cap-1 subsets with the most replacements
/// (ties in lexicographic order of match indices). The original comes first.
std::vector<DelexCandidate> seed_delexicalization(const Tokens& tokens, const PhraseMatcher& matcher,
                                                  const TokenTable& table, std::size_t cap);

}  // namespace idelex
