#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "idelex/corpus.hpp"
#include "idelex/gazetteer.hpp"

namespace idelex {

enum class Provenance { original, seed, rule1, rule2, rule3 };

std::string_view provenance_name(Provenance p);

/// Maps one candidate token back to the original half-open range
/// [begin, end). A passthrough entry covers exactly one original token; an
/// entry with a slot type stands for a special token.
struct AlignmentEntry {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::optional<std::string> slot_type;

  bool special() const noexcept { return slot_type.has_value(); }
  auto operator<=>(const AlignmentEntry&) const = default;
};

/// entries[i] describes candidate token i.
using AlignmentMap = std::vector<AlignmentEntry>;

struct DelexCandidate {
  Tokens tokens;
  AlignmentMap alignment;
  Provenance provenance = Provenance::original;
  std::optional<double> cached_score;

  /// Number of natural (non-special) tokens.
  std::size_t natural_count() const;
  std::size_t original_length() const { return alignment.empty() ? 0 : alignment.back().end; }

  /// Identity key: token sequence plus alignment.
  bool same_rewrite(const DelexCandidate& other) const {
    return tokens == other.tokens && alignment == other.alignment;
  }
};

DelexCandidate identity_candidate(const Tokens& tokens);

/// Collapses candidate positions [first, last) into the special token of
/// `slot_type`, composing the alignment.
DelexCandidate replace_range(const DelexCandidate& cand, std::size_t first, std::size_t last,
                             const std::string& slot_type, const TokenTable& table, Provenance provenance);

/// Checks every alignment invariant against the original utterance: spans
/// contiguous and covering [0, n), passthrough tokens equal to the original,
/// special entries non-empty and carrying the table's surface.
bool alignment_consistent(const DelexCandidate& cand, const Tokens& original, const TokenTable& table);

/// Undoes the rewrite: expands special tokens back through their spans.
Tokens reconstruct(const DelexCandidate& cand, const Tokens& original);

}  // namespace idelex
