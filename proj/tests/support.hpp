#pragma once

#include <string>
#include <string_view>

#include "idelex/corpus.hpp"
#include "idelex/labels.hpp"

namespace idelex::testing {

/// "O B-x I-x" -> labels.
inline LabelSequence labels(std::string_view text) {
  LabelSequence out;
  for (const auto& s : split_whitespace(text)) out.push_back(SlotLabel::parse(s));
  return out;
}

/// "send/O alice/B-contact" -> labelled utterance.
inline Utterance tagged(std::string_view text, std::string intent = "send_message") {
  Utterance u;
  u.labels.emplace();
  for (const auto& pair : split_whitespace(text)) {
    auto slash = pair.rfind('/');
    u.tokens.push_back(pair.substr(0, slash));
    u.labels->push_back(SlotLabel::parse(pair.substr(slash + 1)));
  }
  u.intent = std::move(intent);
  return u;
}

inline Tokens toks(std::string_view text) { return split_whitespace(text); }

}  // namespace idelex::testing
