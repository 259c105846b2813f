#include <doctest.h>

#include "idelex/candidate.hpp"
#include "idelex/error.hpp"
#include "support.hpp"

using namespace idelex;
using idelex::testing::toks;

TEST_CASE("identity candidate") {
  auto c = identity_candidate(toks("a b c"));
  CHECK(c.natural_count() == 3);
  CHECK(c.original_length() == 3);
  CHECK(c.alignment[1] == AlignmentEntry{1, 2, std::nullopt});
  CHECK(c.provenance == Provenance::original);
}

TEST_CASE("nested replacements compose their alignment") {
  auto table = TokenTable::build({"message", "contact"}, {}, {});
  auto original = toks("tell bob that we are running late");
  auto c = identity_candidate(original);
  auto c1 = replace_range(c, 1, 2, "contact", table, Provenance::seed);
  auto c2 = replace_range(c1, 5, 7, "message", table, Provenance::rule1);
  CHECK(c2.tokens == toks("tell <contact> that we are <message>"));
  auto c3 = replace_range(c2, 3, 6, "message", table, Provenance::rule3);
  CHECK(c3.tokens == toks("tell <contact> that <message>"));
  CHECK(c3.alignment.back() == AlignmentEntry{3, 7, std::string("message")});
  CHECK(c3.natural_count() == 2);
  CHECK(c3.provenance == Provenance::rule3);
  CHECK(reconstruct(c3, original) == original);
  CHECK(alignment_consistent(c3, original, table));
  CHECK_FALSE(alignment_consistent(c3, toks("tell bob this we are running late"), table));
  CHECK_THROWS_AS(replace_range(c3, 2, 2, "message", table, Provenance::rule1), ValidationError);
}

TEST_CASE("rewrite identity includes the alignment") {
  auto table = TokenTable::build({"x"}, {}, {});
  auto c = identity_candidate(toks("a a"));
  auto left = replace_range(c, 0, 1, "x", table, Provenance::seed);
  auto right = replace_range(c, 1, 2, "x", table, Provenance::seed);
  CHECK(left.tokens != right.tokens);
  // "<x> <x>" as [0,1)+[1,3) or as [0,2)+[2,3)
  auto three = identity_candidate(toks("a a a"));
  auto both_a = replace_range(replace_range(three, 1, 3, "x", table, Provenance::seed), 0, 1, "x", table,
                              Provenance::seed);
  auto both_b = replace_range(replace_range(three, 0, 2, "x", table, Provenance::seed), 1, 2, "x", table,
                              Provenance::seed);
  CHECK(both_a.tokens == both_b.tokens);
  CHECK_FALSE(both_a.same_rewrite(both_b));
}

TEST_CASE("provenance names") {
  CHECK(provenance_name(Provenance::original) == "original");
  CHECK(provenance_name(Provenance::rule3) == "rule3");
}
