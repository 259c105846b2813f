#include <doctest.h>

#include <cmath>

#include "idelex/augment.hpp"
#include "idelex/error.hpp"
#include "support.hpp"

using namespace idelex;
using idelex::testing::labels;
using idelex::testing::tagged;
using idelex::testing::toks;

namespace {

TokenTable table_for(const Dataset& d) {
  std::set<std::string> vocab;
  for (const auto& u : d) vocab.insert(u.tokens.begin(), u.tokens.end());
  return TokenTable::build(d.slot_types(), {}, vocab);
}

Dataset two_span_corpus(std::size_t copies) {
  std::vector<Utterance> us(copies,
                            tagged("send/O message/O to/O alice/B-contact saying/O happy/B-message birthday/I-message"));
  us.push_back(tagged("hello/O there/O", "greet"));
  return Dataset(us);
}

}  // namespace

TEST_CASE("replaced spans collapse to one Begin-labelled special token") {
  auto train = two_span_corpus(1);
  AugmentConfig cfg{.ps = 0.999, .rng_seed = 1, .tokens = table_for(train)};
  auto out = delexicalize_training(train, cfg);
  REQUIRE(out.data.size() == 1);  // the span-free utterance contributes nothing
  CHECK(out.data[0].tokens == toks("send message to <contact> saying <message>"));
  CHECK(*out.data[0].labels == labels("O O O B-contact O B-message"));
  CHECK(out.stats.spans == 2);
  CHECK(out.stats.replaced == 2);
}

TEST_CASE("p_s near one replaces every span almost always") {
  auto train = two_span_corpus(1000);
  AugmentConfig cfg{.ps = 0.999, .rng_seed = 9, .tokens = table_for(train)};
  auto out = delexicalize_training(train, cfg);
  std::size_t full = 0;
  for (const auto& u : out.data) full += u.tokens.size() == 6;
  // Binomial(1000, 0.998): mean 998, sd ~1.4.
  CHECK(full >= 990);
}

TEST_CASE("replacement fraction tracks p_s") {
  auto train = two_span_corpus(600);
  for (double ps : {0.25, 0.5, 0.75}) {
    AugmentConfig cfg{.ps = ps, .rng_seed = 3, .tokens = table_for(train)};
    auto out = delexicalize_training(train, cfg);
    CHECK(out.stats.spans == 1200);
    CHECK(std::abs(out.stats.fraction() - ps) <= 0.05);
    for (const auto& u : out.data) {
      CHECK(u.labels->size() == u.tokens.size());
      CHECK(is_valid_bio(*u.labels));
    }
    // Utterances with no replacement are dropped.
    for (const auto& u : out.data) CHECK(u.tokens != train[0].tokens);
  }
}

TEST_CASE("augmentation is deterministic in its seed") {
  auto train = two_span_corpus(50);
  auto table = table_for(train);
  auto a = delexicalize_training(train, {.ps = 0.5, .rng_seed = 4, .tokens = table});
  auto b = delexicalize_training(train, {.ps = 0.5, .rng_seed = 4, .tokens = table});
  auto c = delexicalize_training(train, {.ps = 0.5, .rng_seed = 5, .tokens = table});
  CHECK(a.data == b.data);
  CHECK_FALSE(a.data == c.data);
}

TEST_CASE("p_s outside (0, 1) is rejected") {
  auto train = two_span_corpus(1);
  for (double ps : {0.0, 1.0, 1.5, -0.1})
    CHECK_THROWS_AS(delexicalize_training(train, {.ps = ps, .rng_seed = 1, .tokens = table_for(train)}),
                    ValidationError);
}

TEST_CASE("combining keeps T first and unions inventories") {
  auto train = two_span_corpus(99);
  auto td = delexicalize_training(train, {.ps = 0.75, .rng_seed = 2, .tokens = table_for(train)}).data;
  auto all = combine(train, td);
  CHECK(all.size() == train.size() + td.size());
  CHECK(all[0] == train[0]);
  for (const auto& l : train.label_set()) CHECK(all.label_index(l).has_value());
  CHECK(all.intent_set() == train.intent_set());
  CHECK(combine(train, Dataset()) == train);
}
