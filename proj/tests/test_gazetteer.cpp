#include <doctest.h>

#include <sstream>

#include "idelex/error.hpp"
#include "idelex/gazetteer.hpp"
#include "support.hpp"

using namespace idelex;
using idelex::testing::tagged;
using idelex::testing::toks;

TEST_CASE("slot phrases are exactly the gold spans") {
  Dataset train({tagged("send/O message/O to/O alice/B-contact saying/O happy/B-message birthday/I-message")});
  auto g = build_gazetteer(train);
  REQUIRE(g.slot_phrases.size() == 2);
  CHECK(g.slot_phrases.at("contact") == std::set<Phrase>{toks("alice")});
  CHECK(g.slot_phrases.at("message") == std::set<Phrase>{toks("happy birthday")});
  CHECK(g.ambiguous_phrases.empty());
  CHECK(g.context_phrases.count(toks("send message to")));
  CHECK(g.context_phrases.count(toks("saying")));
  CHECK_FALSE(g.context_phrases.count(toks("to alice")));
}

TEST_CASE("context n-grams are capped in length") {
  Dataset train({tagged("a/O b/O c/O d/O e/O")});
  auto g = build_gazetteer(train);
  CHECK(g.context_phrases.count(toks("a b c d")));
  CHECK_FALSE(g.context_phrases.count(toks("a b c d e")));
  // 5 unigrams + 4 bigrams + 3 trigrams + 2 four-grams
  CHECK(g.context_phrases.size() == 14);
  auto g2 = build_gazetteer(train, {}, {.context_ngram = 2});
  CHECK(g2.context_phrases.size() == 9);
}

TEST_CASE("phrases shared inside a group are not ambiguous") {
  Dataset train({tagged("fly/O from/O paris/B-from_city to/O rome/B-to_city"),
                 tagged("fly/O to/O paris/B-to_city"), tagged("paris/B-person called/O")});
  auto grouped = build_gazetteer(Dataset({train[0], train[1]}), parse_shared_groups("city=from_city,to_city"));
  CHECK(grouped.ambiguous_phrases.empty());
  CHECK(grouped.matchable(toks("paris")));

  auto ungrouped = build_gazetteer(Dataset({train[0], train[1]}));
  CHECK(ungrouped.ambiguous_phrases == std::set<Phrase>{toks("paris")});

  auto across = build_gazetteer(train, parse_shared_groups("city=from_city,to_city"));
  CHECK(across.ambiguous_phrases == std::set<Phrase>{toks("paris")});
  CHECK_FALSE(across.matchable(toks("paris")));
}

TEST_CASE("a slot phrase also used as context is not matchable") {
  Dataset train({tagged("remind/O me/O friday/B-date"), tagged("thank/O god/O it/O is/O friday/O")});
  auto g = build_gazetteer(train);
  CHECK(g.slot_phrases.at("date").count(toks("friday")));
  CHECK(g.context_phrases.count(toks("friday")));
  CHECK_FALSE(g.matchable(toks("friday")));
  CHECK(g.ambiguous_phrases.empty());
}

TEST_CASE("ambiguous phrases are slot phrases") {
  Dataset train({tagged("a/B-x b/B-y"), tagged("a/B-y c/O"), tagged("d/B-x e/I-x")});
  auto g = build_gazetteer(train);
  for (const auto& p : g.ambiguous_phrases) {
    bool found = false;
    for (const auto& [type, phrases] : g.slot_phrases) found = found || phrases.count(p);
    CHECK(found);
  }
  CHECK(g.ambiguous_phrases == std::set<Phrase>{toks("a")});
}

TEST_CASE("unlabelled training data is rejected") {
  Utterance u;
  u.tokens = toks("call bob");
  CHECK_THROWS_AS(build_gazetteer(Dataset({u})), ValidationError);
}

TEST_CASE("gazetteer TSV round-trip and errors") {
  Dataset train({tagged("call/O new/B-city york/I-city now/O"), tagged("new/B-x")});
  auto g = build_gazetteer(train);
  std::stringstream buf;
  write_gazetteer(g, buf);
  CHECK(read_gazetteer(buf) == g);

  std::istringstream bad("slot\tcity\tnew york\nbogus\t\tx\n");
  try {
    read_gazetteer(bad);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  std::istringstream missing_type("slot\t\tnew york\n");
  CHECK_THROWS_AS(read_gazetteer(missing_type), ParseError);
  CHECK_THROWS_AS(load_gazetteer("/nonexistent/idelex/g.tsv"), IoError);
}

TEST_CASE("special-token table") {
  auto groups = parse_shared_groups("city=from_city,to_city");
  CHECK(format_shared_groups(groups) == "city=from_city,to_city");
  auto table = TokenTable::build({"contact", "from_city", "to_city"}, groups, {"send", "paris"});
  CHECK(table.surface("contact") == "<contact>");
  CHECK(table.surface("from_city") == "<city>");
  CHECK(table.surface("to_city") == "<city>");
  CHECK(table.is_special("<city>"));
  CHECK_FALSE(table.is_special("paris"));
  CHECK(table.same_group("from_city", "to_city"));
  CHECK_FALSE(table.same_group("contact", "to_city"));
  CHECK_THROWS_AS(table.surface("app"), ValidationError);

  CHECK_THROWS_AS(TokenTable::build({"contact"}, {}, {"<contact>"}), ValidationError);
  CHECK_THROWS_AS(parse_shared_groups("city"), ValidationError);
  CHECK_THROWS_AS(TokenTable::build({"x", "y", "z"}, parse_shared_groups("a=x,y;b=y,z"), {}), ValidationError);
  CHECK(parse_shared_groups("").empty());
  CHECK(TokenTable::from_entries(table.entries()) == table);
}
