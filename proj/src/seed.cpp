#include "idelex/seed.hpp"

#include "idelex/error.hpp"

namespace idelex {

PhraseMatcher::PhraseMatcher(const Gazetteer& gazetteer) : nodes_(1) {
  for (const auto& [type, phrases] : gazetteer.slot_phrases) {
    for (const auto& phrase : phrases) {
      if (phrase.empty() || !gazetteer.matchable(phrase)) continue;
      std::size_t node = 0;
      for (const auto& tok : phrase) {
        auto it = nodes_[node].children.find(tok);
        if (it == nodes_[node].children.end()) {
          nodes_.emplace_back();
          it = nodes_[node].children.emplace(tok, nodes_.size() - 1).first;
        }
        node = it->second;
      }
      if (nodes_[node].slot_types.empty()) ++phrases_;
      nodes_[node].slot_types.insert(type);
    }
  }
}

std::vector<Match> PhraseMatcher::find(const Tokens& tokens) const {
  std::vector<Match> matches;
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t node = 0;
    std::size_t best_end = i;
    const std::set<std::string>* best_types = nullptr;
    for (std::size_t j = i; j < tokens.size(); ++j) {
      auto it = nodes_[node].children.find(tokens[j]);
      if (it == nodes_[node].children.end()) break;
      node = it->second;
      if (!nodes_[node].slot_types.empty()) {
        best_end = j + 1;
        best_types = &nodes_[node].slot_types;
      }
    }
    if (best_types) {
      matches.push_back({i, best_end, *best_types->begin()});
      i = best_end;
    } else {
      ++i;
    }
  }
  return matches;
}

std::vector<Match> find_matches(const Tokens& tokens, const Gazetteer& gazetteer) {
  return PhraseMatcher(gazetteer).find(tokens);
}

namespace {

DelexCandidate apply_subset(const DelexCandidate& original, const std::vector<Match>& matches,
                            const std::vector<std::size_t>& chosen, const TokenTable& table) {
  DelexCandidate c = original;
  // Right to left so earlier candidate positions stay valid.
  for (auto it = chosen.rbegin(); it != chosen.rend(); ++it) {
    const Match& m = matches[*it];
    c = replace_range(c, m.begin, m.end, m.slot_type, table, Provenance::seed);
  }
  c.provenance = Provenance::seed;
  return c;
}

}  // namespace

std::vector<DelexCandidate> seed_delexicalization(const Tokens& tokens, const PhraseMatcher& matcher,
                                                  const TokenTable& table, std::size_t cap) {
  if (cap == 0) throw ValidationError("seed cap must be at least 1");
  DelexCandidate original = identity_candidate(tokens);
  std::vector<DelexCandidate> out{original};
  const auto matches = matcher.find(tokens);
  const std::size_t m = matches.size();
  // Subsets by decreasing size, each size in lexicographic order.
  for (std::size_t k = m; k >= 1 && out.size() < cap; --k) {
    std::vector<std::size_t> chosen(k);
    for (std::size_t i = 0; i < k; ++i) chosen[i] = i;
    while (out.size() < cap) {
      out.push_back(apply_subset(original, matches, chosen, table));
      // next k-combination of {0..m-1}
      std::size_t i = k;
      while (i > 0 && chosen[i - 1] == m - k + i - 1) --i;
      if (i == 0) break;
      ++chosen[i - 1];
      for (std::size_t j = i; j < k; ++j) chosen[j] = chosen[j - 1] + 1;
    }
  }
  return out;
}

}  // namespace idelex
