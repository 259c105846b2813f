#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "idelex/corpus.hpp"

namespace idelex {

using Phrase = std::vector<std::string>;

/// Group name -> member slot types. Members of one group share a special token.
using SharedGroups = std::map<std::string, std::vector<std::string>>;

/// Parses "city=from_city,to_city;area=a,b". Empty text gives no groups.
SharedGroups parse_shared_groups(std::string_view text);
std::string format_shared_groups(const SharedGroups& groups);

struct SpecialToken {
  std::string surface;
  std::string slot_type;
  std::optional<std::string> shared_group;

  bool operator==(const SpecialToken&) const = default;
};

/// Placeholder surfaces, one per slot type or one per shared group ("<type>"
/// or "<group>").
class TokenTable {
 public:
  TokenTable() = default;

  /// Throws ValidationError if a surface collides with `vocabulary`, a slot
  /// sits in two groups, or two distinct entries would share a surface.
  static TokenTable build(const std::vector<std::string>& slot_types, const SharedGroups& groups,
                          const std::set<std::string>& vocabulary);

  /// Rebuilds from stored entries (model files).
  static TokenTable from_entries(std::vector<SpecialToken> entries);

  const std::vector<SpecialToken>& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }

  bool has_slot(const std::string& slot_type) const;
  /// Throws ValidationError for unknown slot types.
  const std::string& surface(const std::string& slot_type) const;
  bool is_special(const std::string& token) const;
  /// True when a == b or both belong to the same shared group.
  bool same_group(const std::string& a, const std::string& b) const;

  bool operator==(const TokenTable&) const = default;

 private:
  std::vector<SpecialToken> entries_;
};

/// Phrase inventories harvested from gold training data.
struct Gazetteer {
  std::map<std::string, std::set<Phrase>> slot_phrases;
  std::set<Phrase> context_phrases;
  std::set<Phrase> ambiguous_phrases;

  /// Slot phrases eligible for seed matching: not context, not ambiguous.
  bool matchable(const Phrase& phrase) const;

  bool operator==(const Gazetteer&) const = default;
};

struct GazetteerOptions {
  std::size_t context_ngram = 4;
};

/// Throws ValidationError when `train` has unlabeled utterances.
Gazetteer build_gazetteer(const Dataset& train, const SharedGroups& groups = {},
                          const GazetteerOptions& options = {});

/// TSV rows: kind<TAB>slot_type-or-empty<TAB>space-joined phrase.
void write_gazetteer(const Gazetteer& gazetteer, std::ostream& out);
Gazetteer read_gazetteer(std::istream& in);
void save_gazetteer(const Gazetteer& gazetteer, const std::filesystem::path& path);
Gazetteer load_gazetteer(const std::filesystem::path& path);

}  // namespace idelex
