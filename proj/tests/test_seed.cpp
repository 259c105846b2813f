#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "idelex/candidate.hpp"
#include "idelex/error.hpp"
#include "idelex/seed.hpp"
#include "support.hpp"

using namespace idelex;
using idelex::testing::tagged;
using idelex::testing::toks;

namespace {

Gazetteer fig1_gazetteer() {
  return build_gazetteer(
      Dataset({tagged("send/O message/O to/O alice/B-contact saying/O happy/B-message birthday/I-message")}));
}

TokenTable table(const std::vector<std::string>& slots) { return TokenTable::build(slots, {}, {}); }

// Which match indices a seed candidate replaced, read back from its alignment.
std::vector<std::size_t> replaced(const DelexCandidate& c, const std::vector<Match>& matches) {
  std::vector<std::size_t> out;
  for (const auto& e : c.alignment)
    if (e.special())
      for (std::size_t m = 0; m < matches.size(); ++m)
        if (matches[m].begin == e.begin && matches[m].end == e.end) out.push_back(m);
  return out;
}

}  // namespace

TEST_CASE("longest-first matching over the training spans") {
  auto g = fig1_gazetteer();
  auto m = find_matches(toks("send message to alice saying happy birthday"), g);
  REQUIRE(m.size() == 2);
  CHECK(m[0] == Match{3, 4, "contact"});
  CHECK(m[1] == Match{5, 7, "message"});
}

TEST_CASE("longer phrase wins over an overlapping shorter one") {
  Gazetteer g;
  g.slot_phrases["city"] = {toks("new york")};
  g.slot_phrases["name"] = {toks("york")};
  auto m = find_matches(toks("fly to new york"), g);
  REQUIRE(m.size() == 1);
  CHECK(m[0] == Match{2, 4, "city"});
  auto m2 = find_matches(toks("ask york"), g);
  REQUIRE(m2.size() == 1);
  CHECK(m2[0] == Match{1, 2, "name"});
}

TEST_CASE("context and ambiguous phrases are never matched") {
  Gazetteer g;
  g.slot_phrases["x"] = {toks("a"), toks("b c")};
  g.slot_phrases["y"] = {toks("a")};
  g.ambiguous_phrases = {toks("a")};
  g.context_phrases = {toks("b c")};
  CHECK(find_matches(toks("q a b c"), g).empty());
  // A shorter matchable prefix still applies when the longer phrase is excluded.
  g.slot_phrases["x"].insert(toks("b"));
  auto m = find_matches(toks("q a b c"), g);
  REQUIRE(m.size() == 1);
  CHECK(m[0] == Match{2, 3, "x"});
}

TEST_CASE("two matches give four seed candidates") {
  auto g = fig1_gazetteer();
  PhraseMatcher matcher(g);
  auto original = toks("send message to alice saying happy birthday");
  auto seeds = seed_delexicalization(original, matcher, table({"contact", "message"}), 64);
  REQUIRE(seeds.size() == 4);
  CHECK(seeds[0].tokens == original);
  CHECK(seeds[0].provenance == Provenance::original);
  CHECK(seeds[1].tokens == toks("send message to <contact> saying <message>"));
  std::set<Tokens> forms;
  for (const auto& s : seeds) forms.insert(s.tokens);
  CHECK(forms.size() == 4);
  CHECK(forms.count(toks("send message to <contact> saying happy birthday")));
  CHECK(forms.count(toks("send message to alice saying <message>")));
}

TEST_CASE("no matches give the original alone") {
  auto seeds = seed_delexicalization(toks("good morning"), PhraseMatcher(fig1_gazetteer()), table({"contact"}), 64);
  REQUIRE(seeds.size() == 1);
  CHECK(seeds[0].tokens == toks("good morning"));
  CHECK_THROWS_AS(seed_delexicalization(toks("x"), PhraseMatcher(Gazetteer{}), table({"contact"}), 0),
                  ValidationError);
}

TEST_CASE("the cap keeps the original plus the most-delexicalized subsets") {
  Gazetteer g;
  g.slot_phrases["x"] = {toks("a"), toks("b b"), toks("c")};
  auto original = toks("a q b b c q a q c q b b");  // six matches
  PhraseMatcher matcher(g);
  auto matches = matcher.find(original);
  REQUIRE(matches.size() == 6);
  auto seeds = seed_delexicalization(original, matcher, table({"x"}), 16);
  REQUIRE(seeds.size() == 16);
  CHECK(seeds[0].tokens == original);

  // Oracle: order every non-empty subset by size (descending), then
  // lexicographically by index list, and keep the first 15.
  std::vector<std::vector<std::size_t>> subsets;
  for (unsigned mask = 1; mask < 64; ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < 6; ++i)
      if (mask & (1u << i)) s.push_back(i);
    subsets.push_back(s);
  }
  std::sort(subsets.begin(), subsets.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() > b.size() : a < b;
  });
  subsets.resize(15);
  std::vector<std::vector<std::size_t>> got;
  for (std::size_t i = 1; i < seeds.size(); ++i) got.push_back(replaced(seeds[i], matches));
  std::sort(got.begin(), got.end());
  std::sort(subsets.begin(), subsets.end());
  CHECK(got == subsets);
}

TEST_CASE("seed candidates reconstruct the original and obey the length formula") {
  Gazetteer g;
  g.slot_phrases["x"] = {toks("a"), toks("b b b")};
  g.slot_phrases["y"] = {toks("c d")};
  auto tt = table({"x", "y"});
  PhraseMatcher matcher(g);
  for (const auto& text : {"a b b b c d q", "q q", "c d c d a", "b b b b b b b"}) {
    auto original = toks(text);
    auto matches = matcher.find(original);
    auto seeds = seed_delexicalization(original, matcher, tt, 64);
    CHECK(seeds.size() == (std::size_t{1} << matches.size()));
    CHECK(std::count_if(seeds.begin(), seeds.end(), [&](const auto& s) { return s.tokens == original; }) == 1);
    for (const auto& s : seeds) {
      CHECK(reconstruct(s, original) == original);
      CHECK(alignment_consistent(s, original, tt));
      std::size_t shrink = 0;
      for (const auto& e : s.alignment)
        if (e.special()) shrink += e.end - e.begin - 1;
      CHECK(s.tokens.size() == original.size() - shrink);
    }
  }
}
