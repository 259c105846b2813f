#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "idelex/backend.hpp"

namespace idelex {

/// How a scripted backend fills one token's distribution.
struct Recipe {
  enum class Kind { one_hot, uniform, peak, explicit_probs };

  Kind kind = Kind::uniform;
  SlotLabel label;            ///< one_hot, peak
  double peak_mass = 1.0;     ///< peak: mass on `label`, remainder spread evenly
  std::vector<double> probs;  ///< explicit_probs, label-set order

  static Recipe one_hot(SlotLabel label) { return {Kind::one_hot, std::move(label), 1.0, {}}; }
  static Recipe uniform() { return {}; }
  static Recipe peak(SlotLabel label, double mass) { return {Kind::peak, std::move(label), mass, {}}; }
  static Recipe explicit_probs(std::vector<double> probs) { return {Kind::explicit_probs, {}, 1.0, std::move(probs)}; }
};

struct Script {
  std::map<std::string, Recipe> tokens;
  std::optional<Recipe> fallback;
};

/// First token found in `keywords` decides the intent, otherwise `fallback`.
struct IntentRule {
  std::map<std::string, std::string> keywords;
  std::string fallback;

  static IntentRule constant(std::string intent) { return {{}, std::move(intent)}; }
};

/// Emits exactly the scripted distribution per token, independent of
/// context. Intent distribution is one-hot on the rule's choice.
class ScriptedBackend final : public Backend {
 public:
  /// Throws ValidationError when the script lacks a fallback, a recipe names
  /// a label outside `labels`, or the intent rule names an unknown intent.
  ScriptedBackend(std::vector<SlotLabel> labels, std::vector<std::string> intents, Script script, IntentRule rule);

  ParseResult parse(std::span<const std::string> tokens) const override;
  const std::vector<SlotLabel>& label_set() const override { return labels_; }
  const std::vector<std::string>& intent_set() const override { return intents_; }

 private:
  std::vector<double> realize(const Recipe& recipe) const;

  std::vector<SlotLabel> labels_;
  std::vector<std::string> intents_;
  std::map<std::string, std::vector<double>> table_;
  std::vector<double> fallback_;
  IntentRule rule_;
};

}  // namespace idelex
