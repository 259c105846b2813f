#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "contract.hpp"
#include "fixtures.hpp"
#include "idelex/error.hpp"

using namespace idelex;
using namespace idelex::testing;

namespace {

std::vector<Tokens> probe_inputs(std::uint64_t seed) {
  std::vector<Tokens> out = {toks("send message to alice saying happy birthday"), toks("x"),
                             toks("call zanzibar"), toks("<contact> <message>"),
                             toks("send message to <contact> saying quokka umbrella")};
  std::mt19937_64 rng(seed);
  const auto vocab = toks("send message to alice bob saying happy birthday call <contact> <message> q z");
  std::uniform_int_distribution<std::size_t> len(1, 12), w(0, vocab.size() - 1);
  for (int i = 0; i < 40; ++i) {
    Tokens t(len(rng));
    for (auto& s : t) s = vocab[w(rng)];
    out.push_back(t);
  }
  return out;
}

ScriptedBackend demo_scripted() {
  Script s;
  s.tokens["hi"] = Recipe::one_hot(SlotLabel::begin("message"));
  s.tokens["to"] = Recipe::peak(SlotLabel::outside(), 0.9);
  s.tokens["tie"] = Recipe::explicit_probs({0.5, 0.5, 0.0, 0.0});
  s.fallback = Recipe::uniform();
  return ScriptedBackend(labels("O B-contact B-message I-message"), {"call", "send_message"}, s,
                         {{{"call", "call"}}, "send_message"});
}

}  // namespace

TEST_CASE("scripted backend emits its recipes") {
  auto b = demo_scripted();
  auto r = b.parse(toks("hi there"));
  CHECK(r.token_entropies[0] == 0.0);
  CHECK(r.token_entropies[1] == doctest::Approx(std::log(4.0)).epsilon(1e-12));
  CHECK(r.token_entropies[1] == doctest::Approx(1.386294).epsilon(1e-6));
  CHECK(r.predicted_labels[0] == SlotLabel::begin("message"));
  CHECK(r.predicted_intent == "send_message");
  CHECK(b.parse(toks("please call bob")).predicted_intent == "call");

  auto peak = b.parse(toks("to")).distributions[0].probs;
  CHECK(peak[0] == doctest::Approx(0.9));
  CHECK(peak[3] == doctest::Approx(0.1 / 3));
  // Ties go to the lowest label index.
  CHECK(b.parse(toks("tie")).predicted_labels[0] == SlotLabel::outside());
}

TEST_CASE("scripted backend validates its script") {
  Script no_fallback;
  CHECK_THROWS_AS(ScriptedBackend(labels("O B-x"), {"i"}, no_fallback, IntentRule::constant("i")), ValidationError);
  Script s;
  s.fallback = Recipe::uniform();
  CHECK_THROWS_AS(ScriptedBackend(labels("O B-x"), {"i"}, s, IntentRule::constant("other")), ValidationError);
  s.tokens["a"] = Recipe::one_hot(SlotLabel::begin("y"));
  CHECK_THROWS_AS(ScriptedBackend(labels("O B-x"), {"i"}, s, IntentRule::constant("i")), ValidationError);
  Script bad_sum;
  bad_sum.fallback = Recipe::explicit_probs({0.7, 0.7});
  CHECK_THROWS_AS(ScriptedBackend(labels("O B-x"), {"i"}, bad_sum, IntentRule::constant("i")), ValidationError);
}

TEST_CASE("both backends satisfy the parse contract") {
  auto scripted = demo_scripted();
  CHECK(contract_violations(scripted, probe_inputs(1)).empty());
  auto fx = train_fixture(messaging_fixture());
  auto bad = contract_violations(fx.model, probe_inputs(2));
  CHECK_MESSAGE(bad.empty(), (bad.empty() ? "" : bad.front()));
}

TEST_CASE("helpers: entropy, argmax, softmax") {
  CHECK(entropy(std::vector<double>{1.0, 0.0}) == 0.0);
  CHECK(entropy(std::vector<double>{0.5, 0.5}) == doctest::Approx(std::log(2.0)));
  CHECK(argmax(std::vector<double>{0.2, 0.4, 0.4}) == 1);
  std::vector<double> s = {1000.0, 1000.0, -1000.0};
  softmax(s);
  CHECK(s[0] == doctest::Approx(0.5));
  CHECK(s[2] == 0.0);
}

TEST_CASE("built-in backend learns the delexicalized frame") {
  auto fx = train_fixture(messaging_fixture());
  auto r = fx.model.parse(toks("send message to <contact> saying <message>"));
  CHECK(r.predicted_labels[3] == SlotLabel::begin("contact"));
  CHECK(r.predicted_labels[5] == SlotLabel::begin("message"));
  CHECK(r.predicted_intent == "send_message");
  CHECK(fx.model.parse(toks("call bob")).predicted_labels[1] == SlotLabel::begin("contact"));
  CHECK(fx.model.parse(toks("call bob")).predicted_intent == "call");
}

TEST_CASE("special tokens are parsed more confidently than unseen words") {
  auto fx = train_fixture(messaging_fixture());
  auto delex = fx.model.parse(toks("send message to <contact> saying <message>"));
  auto lex = fx.model.parse(toks("send message to zelda saying quokka"));
  double special = (delex.token_entropies[3] + delex.token_entropies[5]) / 2;
  double unseen = (lex.token_entropies[3] + lex.token_entropies[4]) / 2;
  CHECK(special < unseen);
}

TEST_CASE("training preconditions") {
  Utterance u;
  u.tokens = toks("a b");
  CHECK_THROWS_AS(LogLinearBackend::train(Dataset({u}), {}), ValidationError);
  CHECK_THROWS_AS(LogLinearBackend::train(Dataset({tagged("a/O b/O")}), {}), ValidationError);
}

TEST_CASE("model files round-trip bit-exactly") {
  auto fx = train_fixture(messaging_fixture());
  std::stringstream a;
  fx.model.write(a);
  auto text = a.str();
  CHECK(text.rfind("idelex-loglinear 1\n", 0) == 0);
  auto back = LogLinearBackend::read(a);
  CHECK(back == fx.model);
  CHECK(back.token_table() == fx.table);
  std::stringstream b;
  back.write(b);
  CHECK(b.str() == text);
  auto in = toks("send message to dora saying hi there");
  CHECK(same_parse(back.parse(in), fx.model.parse(in)));

  std::istringstream wrong_magic("something else\n");
  CHECK_THROWS_AS(LogLinearBackend::read(wrong_magic), ParseError);
  std::istringstream truncated(text.substr(0, text.size() / 2));
  CHECK_THROWS_AS(LogLinearBackend::read(truncated), ParseError);
  CHECK_THROWS_AS(LogLinearBackend::load("/nonexistent/idelex/model.txt"), IoError);
}

TEST_CASE("training is deterministic") {
  auto a = train_fixture(messaging_fixture(), 0.75, 4);
  auto b = train_fixture(messaging_fixture(), 0.75, 4);
  CHECK(a.model == b.model);
}
