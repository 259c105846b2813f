#include "idelex/candidate.hpp"

#include <algorithm>

#include "idelex/error.hpp"

namespace idelex {

std::string_view provenance_name(Provenance p) {
  switch (p) {
    case Provenance::original:
      return "original";
    case Provenance::seed:
      return "seed";
    case Provenance::rule1:
      return "rule1";
    case Provenance::rule2:
      return "rule2";
    case Provenance::rule3:
      return "rule3";
  }
  return "original";
}

std::size_t DelexCandidate::natural_count() const {
  return static_cast<std::size_t>(
      std::count_if(alignment.begin(), alignment.end(), [](const AlignmentEntry& e) { return !e.special(); }));
}

DelexCandidate identity_candidate(const Tokens& tokens) {
  DelexCandidate c;
  c.tokens = tokens;
  c.alignment.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) c.alignment.push_back({i, i + 1, std::nullopt});
  return c;
}

DelexCandidate replace_range(const DelexCandidate& cand, std::size_t first, std::size_t last,
                             const std::string& slot_type, const TokenTable& table, Provenance provenance) {
  if (first >= last || last > cand.tokens.size()) throw ValidationError("replace_range: bad range");
  DelexCandidate out;
  out.provenance = provenance;
  out.tokens.reserve(cand.tokens.size() - (last - first) + 1);
  out.alignment.reserve(out.tokens.capacity());
  for (std::size_t i = 0; i < first; ++i) {
    out.tokens.push_back(cand.tokens[i]);
    out.alignment.push_back(cand.alignment[i]);
  }
  out.tokens.push_back(table.surface(slot_type));
  out.alignment.push_back({cand.alignment[first].begin, cand.alignment[last - 1].end, slot_type});
  for (std::size_t i = last; i < cand.tokens.size(); ++i) {
    out.tokens.push_back(cand.tokens[i]);
    out.alignment.push_back(cand.alignment[i]);
  }
  return out;
}

bool alignment_consistent(const DelexCandidate& cand, const Tokens& original, const TokenTable& table) {
  if (cand.tokens.size() != cand.alignment.size() || cand.tokens.size() > original.size()) return false;
  std::size_t expect = 0;
  for (std::size_t i = 0; i < cand.alignment.size(); ++i) {
    const auto& e = cand.alignment[i];
    if (e.begin != expect || e.end <= e.begin) return false;
    if (e.special()) {
      if (!table.has_slot(*e.slot_type) || cand.tokens[i] != table.surface(*e.slot_type)) return false;
    } else {
      if (e.end != e.begin + 1 || cand.tokens[i] != original[e.begin]) return false;
    }
    expect = e.end;
  }
  return expect == original.size();
}

Tokens reconstruct(const DelexCandidate& cand, const Tokens& original) {
  Tokens out;
  for (std::size_t i = 0; i < cand.alignment.size(); ++i) {
    const auto& e = cand.alignment[i];
    if (e.special())
      out.insert(out.end(), original.begin() + e.begin, original.begin() + e.end);
    else
      out.push_back(cand.tokens[i]);
  }
  return out;
}

}  // namespace idelex
