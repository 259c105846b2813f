#pragma once

// Small hand-built models shared by the unit and acceptance suites.

#include "idelex/augment.hpp"
#include "idelex/gazetteer.hpp"
#include "idelex/loglinear.hpp"
#include "idelex/scripted.hpp"
#include "support.hpp"

namespace idelex::testing {

/// Twenty messaging utterances in the style of "send message to alice
/// saying happy birthday".
inline Dataset messaging_fixture() {
  const char* contacts[] = {"alice", "bob", "carol", "dave", "erin"};
  const char* messages[] = {"happy/B-message birthday/I-message", "running/B-message late/I-message",
                            "see/B-message you/I-message soon/I-message", "thanks/B-message"};
  std::vector<Utterance> us;
  for (int i = 0; i < 20; ++i) {
    std::string c = contacts[i % 5];
    std::string m = messages[i % 4];
    if (i % 2 == 0)
      us.push_back(tagged("send/O message/O to/O " + c + "/B-contact saying/O " + m));
    else
      us.push_back(tagged("call/O " + c + "/B-contact", "call"));
  }
  return Dataset(us);
}

struct TrainedFixture {
  Dataset train;
  TokenTable table;
  Gazetteer gazetteer;
  LogLinearBackend model;
};

/// Trains the built-in backend on T' = T + T_d of `train`.
inline TrainedFixture train_fixture(const Dataset& train, double ps = 0.75, std::uint64_t seed = 1) {
  std::set<std::string> vocab;
  for (const auto& u : train) vocab.insert(u.tokens.begin(), u.tokens.end());
  auto table = TokenTable::build(train.slot_types(), {}, vocab);
  auto td = delexicalize_training(train, {.ps = ps, .rng_seed = seed, .tokens = table}).data;
  auto model = LogLinearBackend::train(combine(train, td), {.seed = seed, .tokens = table});
  return {train, table, build_gazetteer(train), std::move(model)};
}

/// Scripted parser for the worked example "send running late lets meet":
/// "send" is a confident context word, "running late" is tagged as a
/// message, "lets meet" stays uncertain, and <message> is certain.
inline ScriptedBackend worked_example_backend() {
  Script s;
  s.tokens["send"] = Recipe::peak(SlotLabel::outside(), 0.9999);
  s.tokens["running"] = Recipe::peak(SlotLabel::begin("message"), 0.8);
  s.tokens["late"] = Recipe::peak(SlotLabel::inside("message"), 0.8);
  s.tokens["lets"] = Recipe::peak(SlotLabel::outside(), 0.5);
  s.tokens["meet"] = Recipe::peak(SlotLabel::outside(), 0.5);
  s.tokens["<message>"] = Recipe::one_hot(SlotLabel::begin("message"));
  s.fallback = Recipe::uniform();
  return ScriptedBackend(labels("O B-message I-message"), {"send_message"}, s, IntentRule::constant("send_message"));
}

}  // namespace idelex::testing
