#include "idelex/scripted.hpp"

#include <algorithm>
#include <cmath>

#include "idelex/error.hpp"

namespace idelex {

ScriptedBackend::ScriptedBackend(std::vector<SlotLabel> labels, std::vector<std::string> intents, Script script,
                                 IntentRule rule)
    : labels_(std::move(labels)), intents_(std::move(intents)), rule_(std::move(rule)) {
  if (!script.fallback) throw ValidationError("scripted backend needs a fallback recipe");
  if (labels_.empty()) throw ValidationError("scripted backend needs a label set");
  auto known_intent = [&](const std::string& i) { return std::find(intents_.begin(), intents_.end(), i) != intents_.end(); };
  if (!known_intent(rule_.fallback)) throw ValidationError("intent rule names unknown intent '" + rule_.fallback + "'");
  for (const auto& [kw, intent] : rule_.keywords)
    if (!known_intent(intent)) throw ValidationError("intent rule names unknown intent '" + intent + "'");
  fallback_ = realize(*script.fallback);
  for (const auto& [token, recipe] : script.tokens) table_[token] = realize(recipe);
}

std::vector<double> ScriptedBackend::realize(const Recipe& recipe) const {
  const std::size_t n = labels_.size();
  auto index_of = [&](const SlotLabel& l) {
    auto it = std::find(labels_.begin(), labels_.end(), l);
    if (it == labels_.end()) throw ValidationError("recipe label " + l.str() + " not in label set");
    return static_cast<std::size_t>(it - labels_.begin());
  };
  std::vector<double> p(n, 0.0);
  switch (recipe.kind) {
    case Recipe::Kind::uniform:
      std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(n));
      break;
    case Recipe::Kind::one_hot:
      p[index_of(recipe.label)] = 1.0;
      break;
    case Recipe::Kind::peak: {
      if (!(recipe.peak_mass > 0.0 && recipe.peak_mass <= 1.0)) throw ValidationError("peak mass must be in (0, 1]");
      if (n == 1) {
        p[0] = 1.0;
        break;
      }
      std::fill(p.begin(), p.end(), (1.0 - recipe.peak_mass) / static_cast<double>(n - 1));
      p[index_of(recipe.label)] = recipe.peak_mass;
      break;
    }
    case Recipe::Kind::explicit_probs: {
      if (recipe.probs.size() != n) throw ValidationError("explicit recipe has the wrong length");
      double sum = 0.0;
      for (double v : recipe.probs) {
        if (!(v >= 0.0)) throw ValidationError("explicit recipe has a negative entry");
        sum += v;
      }
      if (std::abs(sum - 1.0) > 1e-9) throw ValidationError("explicit recipe does not sum to 1");
      p = recipe.probs;
      break;
    }
  }
  return p;
}

ParseResult ScriptedBackend::parse(std::span<const std::string> tokens) const {
  if (tokens.empty()) throw ValidationError("cannot parse an empty token sequence");
  std::vector<std::vector<double>> rows;
  rows.reserve(tokens.size());
  std::string intent = rule_.fallback;
  bool intent_fixed = false;
  for (const auto& t : tokens) {
    auto it = table_.find(t);
    rows.push_back(it == table_.end() ? fallback_ : it->second);
    if (!intent_fixed) {
      if (auto k = rule_.keywords.find(t); k != rule_.keywords.end()) {
        intent = k->second;
        intent_fixed = true;
      }
    }
  }
  std::vector<double> intent_probs(intents_.size(), 0.0);
  intent_probs[static_cast<std::size_t>(std::find(intents_.begin(), intents_.end(), intent) - intents_.begin())] = 1.0;
  return make_parse_result(std::move(rows), std::move(intent_probs), labels_, intents_);
}

}  // namespace idelex
