#include "idelex/augment.hpp"

#include <random>

#include "idelex/error.hpp"

namespace idelex {

void AugmentConfig::validate() const {
  if (!(ps > 0.0 && ps < 1.0)) throw ValidationError("p_s must lie in (0, 1), got " + std::to_string(ps));
}

Augmented delexicalize_training(const Dataset& train, const AugmentConfig& config) {
  config.validate();
  if (!train.fully_labeled()) throw ValidationError("delexicalization needs gold labels on every utterance");

  Augmented result;
  std::vector<Utterance> out;
  for (std::size_t i = 0; i < train.size(); ++i) {
    const Utterance& u = train[i];
    std::seed_seq seq{config.rng_seed, static_cast<std::uint64_t>(i)};
    std::mt19937_64 rng(seq);
    std::bernoulli_distribution substitute(config.ps);

    Utterance d;
    d.intent = u.intent;
    d.labels.emplace();
    std::size_t replaced = 0;
    std::size_t pos = 0;
    for (const auto& span : extract_spans(*u.labels)) {
      for (; pos < span.begin; ++pos) {
        d.tokens.push_back(u.tokens[pos]);
        d.labels->push_back((*u.labels)[pos]);
      }
      ++result.stats.spans;
      if (substitute(rng)) {
        d.tokens.push_back(config.tokens.surface(span.type));
        d.labels->push_back(SlotLabel::begin(span.type));
        ++replaced;
      } else {
        for (std::size_t k = span.begin; k < span.end; ++k) {
          d.tokens.push_back(u.tokens[k]);
          d.labels->push_back((*u.labels)[k]);
        }
      }
      pos = span.end;
    }
    for (; pos < u.tokens.size(); ++pos) {
      d.tokens.push_back(u.tokens[pos]);
      d.labels->push_back((*u.labels)[pos]);
    }
    if (replaced == 0) continue;
    result.stats.replaced += replaced;
    out.push_back(std::move(d));
  }
  result.stats.kept = out.size();
  result.data = Dataset(std::move(out), train.label_set(), train.intent_set());
  return result;
}

Dataset combine(const Dataset& train, const Dataset& delexicalized) {
  std::vector<Utterance> all(train.utterances());
  all.insert(all.end(), delexicalized.begin(), delexicalized.end());
  auto labels = train.label_set();
  labels.insert(labels.end(), delexicalized.label_set().begin(), delexicalized.label_set().end());
  auto intents = train.intent_set();
  intents.insert(intents.end(), delexicalized.intent_set().begin(), delexicalized.intent_set().end());
  return Dataset(std::move(all), labels, intents);
}

}  // namespace idelex
