#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace idelex {

enum class Tag : std::uint8_t { Outside, Begin, Inside };

/// A BIO slot label. `type` is empty exactly when the tag is Outside.
struct SlotLabel {
  Tag tag = Tag::Outside;
  std::string type;

  static SlotLabel outside() { return {}; }
  static SlotLabel begin(std::string type);
  static SlotLabel inside(std::string type);

  /// Parses "O", "B-x" or "I-x". Throws ValidationError otherwise.
  static SlotLabel parse(std::string_view text);

  std::string str() const;

  bool is_outside() const noexcept { return tag == Tag::Outside; }
  bool is_begin() const noexcept { return tag == Tag::Begin; }
  bool is_inside() const noexcept { return tag == Tag::Inside; }

  auto operator<=>(const SlotLabel&) const = default;
};

using LabelSequence = std::vector<SlotLabel>;

/// Inside(Y) only directly after Begin(Y) or Inside(Y).
bool is_valid_bio(std::span<const SlotLabel> labels);

/// Rewrites every orphan Inside(Y) to Begin(Y). Returns the number of rewrites.
std::size_t repair_bio(LabelSequence& labels);

/// A typed half-open token range [begin, end).
struct SlotSpan {
  std::string type;
  std::size_t begin = 0;
  std::size_t end = 0;

  auto operator<=>(const SlotSpan&) const = default;
};

/// Maximal Begin/Inside runs of one type. Orphan Inside starts a new span.
std::vector<SlotSpan> extract_spans(std::span<const SlotLabel> labels);

std::vector<std::string> label_strings(std::span<const SlotLabel> labels);

}  // namespace idelex
