#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "idelex/labels.hpp"

namespace idelex {

using Tokens = std::vector<std::string>;

struct Utterance {
  Tokens tokens;
  std::optional<LabelSequence> labels;
  std::optional<std::string> intent;

  bool operator==(const Utterance&) const = default;
};

/// An immutable collection of utterances plus the label and intent inventories
/// derived from them. The label set always contains Outside and is kept in
/// SlotLabel order (Outside first), which fixes the distribution index layout.
class Dataset {
 public:
  Dataset() : label_set_{SlotLabel::outside()} {}

  /// Validates per-utterance invariants (non-empty tokens, label length,
  /// valid BIO) and derives the inventories. Extra labels or intents may be
  /// supplied so that datasets share an inventory.
  explicit Dataset(std::vector<Utterance> utterances,
                   const std::vector<SlotLabel>& extra_labels = {},
                   const std::vector<std::string>& extra_intents = {});

  const std::vector<Utterance>& utterances() const noexcept { return utterances_; }
  const std::vector<SlotLabel>& label_set() const noexcept { return label_set_; }
  const std::vector<std::string>& intent_set() const noexcept { return intent_set_; }

  std::size_t size() const noexcept { return utterances_.size(); }
  bool empty() const noexcept { return utterances_.empty(); }
  const Utterance& operator[](std::size_t i) const { return utterances_[i]; }
  auto begin() const noexcept { return utterances_.begin(); }
  auto end() const noexcept { return utterances_.end(); }

  bool fully_labeled() const;
  std::optional<std::size_t> label_index(const SlotLabel& label) const;

  /// Distinct slot types, sorted.
  std::vector<std::string> slot_types() const;

  bool operator==(const Dataset&) const = default;

 private:
  std::vector<Utterance> utterances_;
  std::vector<SlotLabel> label_set_;
  std::vector<std::string> intent_set_;
};

enum class Format { conll, jsonl };

/// ".jsonl"/".json" map to jsonl, anything else to conll.
Format format_for_path(const std::filesystem::path& path);

struct LoadOptions {
  bool lowercase = true;
};

struct LoadResult {
  Dataset dataset;
  std::size_t bio_repairs = 0;
};

LoadResult read_dataset(std::istream& in, Format format, const LoadOptions& options = {});
LoadResult load_dataset(const std::filesystem::path& path, Format format,
                        const LoadOptions& options = {});

void write_dataset(const Dataset& data, std::ostream& out, Format format);
void save_dataset(const Dataset& data, const std::filesystem::path& path, Format format);

Tokens split_whitespace(std::string_view text);
std::string join(const Tokens& tokens, std::string_view sep = " ");
std::string to_lower(std::string_view text);

}  // namespace idelex
