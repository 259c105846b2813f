#include "idelex/labels.hpp"

#include "idelex/error.hpp"

namespace idelex {

SlotLabel SlotLabel::begin(std::string type) {
  if (type.empty()) throw ValidationError("Begin label needs a slot type");
  return {Tag::Begin, std::move(type)};
}

SlotLabel SlotLabel::inside(std::string type) {
  if (type.empty()) throw ValidationError("Inside label needs a slot type");
  return {Tag::Inside, std::move(type)};
}

SlotLabel SlotLabel::parse(std::string_view text) {
  if (text == "O") return outside();
  if (text.size() > 2 && text[1] == '-') {
    if (text[0] == 'B') return begin(std::string(text.substr(2)));
    if (text[0] == 'I') return inside(std::string(text.substr(2)));
  }
  throw ValidationError("bad BIO label '" + std::string(text) + "'");
}

std::string SlotLabel::str() const {
  switch (tag) {
    case Tag::Outside:
      return "O";
    case Tag::Begin:
      return "B-" + type;
    case Tag::Inside:
      return "I-" + type;
  }
  return "O";
}

bool is_valid_bio(std::span<const SlotLabel> labels) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!labels[i].is_inside()) continue;
    if (i == 0 || labels[i - 1].is_outside() || labels[i - 1].type != labels[i].type) return false;
  }
  return true;
}

std::size_t repair_bio(LabelSequence& labels) {
  std::size_t repairs = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!labels[i].is_inside()) continue;
    if (i == 0 || labels[i - 1].is_outside() || labels[i - 1].type != labels[i].type) {
      labels[i].tag = Tag::Begin;
      ++repairs;
    }
  }
  return repairs;
}

std::vector<SlotSpan> extract_spans(std::span<const SlotLabel> labels) {
  std::vector<SlotSpan> spans;
  std::size_t i = 0;
  while (i < labels.size()) {
    if (labels[i].is_outside()) {
      ++i;
      continue;
    }
    const std::string& type = labels[i].type;
    std::size_t j = i + 1;
    while (j < labels.size() && labels[j].is_inside() && labels[j].type == type) ++j;
    spans.push_back({type, i, j});
    i = j;
  }
  return spans;
}

std::vector<std::string> label_strings(std::span<const SlotLabel> labels) {
  std::vector<std::string> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(l.str());
  return out;
}

}  // namespace idelex
