#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "idelex/corpus.hpp"

namespace idelex {

/// A carrier sentence such as "send a message to <contact> saying <message>".
struct CarrierTemplate {
  std::string intent;
  std::string pattern;
};

/// Open-vocabulary slot: values are random word strings, drawn from disjoint
/// word lists for train and test.
struct OodSlotSpec {
  std::vector<std::string> train_words;
  std::vector<std::string> test_words;
  /// In-vocabulary words (carrier words, other slot values) mixed into test
  /// values: each test token is drawn from here with probability
  /// `test_known_rate`.
  std::vector<std::string> test_known_words;
  double test_known_rate = 0.0;
  std::size_t train_min_len = 1;
  std::size_t train_max_len = 3;
  std::size_t test_min_len = 4;
  std::size_t test_max_len = 9;
};

struct SyntheticSpec {
  std::size_t train_size = 2000;
  std::size_t test_size = 500;
  std::vector<CarrierTemplate> templates;
  /// Closed-vocabulary slots: phrase lists (space-joined) shared by train and test.
  std::map<std::string, std::vector<std::string>> closed_slots;
  std::map<std::string, OodSlotSpec> ood_slots;
  /// Largest tolerated fraction of an OOD slot's test words that also occur
  /// in the train vocabulary.
  double max_ood_overlap = 0.10;
};

/// Messaging-assistant domain with an open-vocabulary "message" slot.
SyntheticSpec default_synthetic_spec();

SyntheticSpec synthetic_spec_from_json(const nlohmann::json& j);
nlohmann::json synthetic_spec_to_json(const SyntheticSpec& spec);

struct SyntheticCorpus {
  Dataset train;
  Dataset test;
  /// Per OOD slot: fraction of test slot-value tokens absent from train tokens.
  std::map<std::string, double> oov_rate;
};

/// Deterministic in (seed, spec). Throws ValidationError on an invalid spec,
/// or when the realized OOV rate of an OOD slot falls below
/// 1 - max_ood_overlap.
SyntheticCorpus generate_synthetic_corpus(std::uint64_t seed, const SyntheticSpec& spec);

/// Fraction of token occurrences inside `slot` spans of `test` that never
/// occur anywhere in `train`.
double slot_oov_rate(const Dataset& train, const Dataset& test, const std::string& slot);

}  // namespace idelex
