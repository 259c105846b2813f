#pragma once

#include <span>
#include <string>
#include <vector>

#include "idelex/corpus.hpp"
#include "idelex/labels.hpp"

namespace idelex {

/// Probability vector over a backend's label set, in label-set order.
struct TokenDistribution {
  std::vector<double> probs;
};

struct ParseResult {
  std::vector<TokenDistribution> distributions;
  LabelSequence predicted_labels;
  std::vector<double> intent_distribution;
  std::string predicted_intent;
  std::vector<double> token_entropies;  ///< nats
};

/// Shannon entropy in nats; zero-probability entries contribute nothing.
double entropy(std::span<const double> probs);

/// Index of the largest entry; ties go to the lowest index.
std::size_t argmax(std::span<const double> values);

/// In-place numerically stable softmax.
void softmax(std::vector<double>& scores);

/// Fills argmax labels, entropies and the predicted intent from raw
/// distributions.
ParseResult make_parse_result(std::vector<std::vector<double>> slot_probs, std::vector<double> intent_probs,
                              const std::vector<SlotLabel>& labels, const std::vector<std::string>& intents);

/// A joint intent classifier and slot tagger. Implementations must be
/// deterministic and must not mutate state in parse(), so one instance can
/// serve concurrent callers.
class Backend {
 public:
  virtual ~Backend() = default;

  /// Throws ValidationError on an empty token sequence. Unknown tokens are
  /// never an error.
  virtual ParseResult parse(std::span<const std::string> tokens) const = 0;

  virtual const std::vector<SlotLabel>& label_set() const = 0;
  virtual const std::vector<std::string>& intent_set() const = 0;
};

}  // namespace idelex
