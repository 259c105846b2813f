#include "idelex/backend.hpp"

#include <algorithm>
#include <cmath>

#include "idelex/error.hpp"

namespace idelex {

double entropy(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs)
    if (p > 0.0) h -= p * std::log(p);
  return h > 0.0 ? h : 0.0;
}

std::size_t argmax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return best;
}

void softmax(std::vector<double>& scores) {
  if (scores.empty()) return;
  double top = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (double& s : scores) {
    s = std::exp(s - top);
    sum += s;
  }
  for (double& s : scores) s /= sum;
}

ParseResult make_parse_result(std::vector<std::vector<double>> slot_probs, std::vector<double> intent_probs,
                              const std::vector<SlotLabel>& labels, const std::vector<std::string>& intents) {
  ParseResult r;
  r.distributions.reserve(slot_probs.size());
  for (auto& p : slot_probs) {
    if (p.size() != labels.size()) throw ValidationError("distribution size does not match the label set");
    r.predicted_labels.push_back(labels[argmax(p)]);
    r.token_entropies.push_back(entropy(p));
    r.distributions.push_back({std::move(p)});
  }
  if (!intents.empty()) {
    if (intent_probs.size() != intents.size()) throw ValidationError("intent distribution size mismatch");
    r.predicted_intent = intents[argmax(intent_probs)];
  }
  r.intent_distribution = std::move(intent_probs);
  return r;
}

}  // namespace idelex
