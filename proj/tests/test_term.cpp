#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "tmpc/term.hpp"

using namespace tmpc;

TEST_SUITE_BEGIN("term");

TEST_CASE("names and compounds") {
  TermPtr a = name_term(Name("a"));
  TermPtr t = compound(a, compound(name_term(Name("b")), name_term(Name("c"))));
  CHECK(a->is_name());
  CHECK(!t->is_name());
  CHECK(term_size(a) == 1);
  CHECK(term_size(t) == 5);
  CHECK(term_names(t) == NameSet{Name("a"), Name("b"), Name("c")});
  CHECK(term_equal(t, parse_term("a•(b•c)")));
  CHECK(!term_equal(t, parse_term("(a•b)•c")));
}

TEST_CASE("show/parse round trip") {
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    TermPtr t = testutil::random_term(rng, 4);
    CHECK(term_equal(t, parse_term(show_term(t))));
  }
}

TEST_CASE("compounds associate to the left in display syntax") {
  CHECK(show_term(parse_term("a•b•c")) == "(a•b)•c");
  CHECK(term_equal(parse_term("a•b•c"), parse_term("(a•b)•c")));
}

TEST_CASE("parse errors carry a position") {
  CHECK_THROWS_AS(parse_term(""), TermParseError);
  CHECK_THROWS_AS(parse_term("(a•b"), TermParseError);
  CHECK_THROWS_AS(parse_term("a b"), TermParseError);
  try {
    parse_term("(a•b");
  } catch (const TermParseError& e) {
    CHECK(e.pos > 0);
  }
}

TEST_CASE("pattern well-formedness rejects repeated binders") {
  PatPtr ok = compound_pat(binder(Name("x")), binder(Name("y")));
  PatPtr bad = compound_pat(binder(Name("x")), binder(Name("x")));
  CHECK(pattern_well_formed(ok));
  CHECK(!pattern_well_formed(bad));
  CHECK(binding_names(ok) == std::vector<Name>{Name("x"), Name("y")});
  CHECK(pattern_free_names(parse_pattern("(λx•a)•b")) ==
        NameSet{Name("a"), Name("b")});
}

TEST_CASE("matching binds each binder to the aligned subterm") {
  // {(a•b)•(c•d) // (λx•b)•λy} = {a/x, (c•d)/y}
  auto sigma = match_term(parse_term("(a•b)•(c•d)"), parse_pattern("(λx•b)•λy"));
  REQUIRE(sigma.has_value());
  CHECK(term_equal(sigma->apply(name_term(Name("x"))), parse_term("a")));
  CHECK(term_equal(sigma->apply(name_term(Name("y"))), parse_term("c•d")));

  // name-match mismatch and shape mismatch are undefined, not errors
  CHECK(!match_term(parse_term("a•b"), parse_pattern("(λx•c)")).has_value());
  CHECK(!match_term(parse_term("a"), parse_pattern("λx•λy")).has_value());
  // a name-match only accepts the name itself, not a compound
  CHECK(!match_term(parse_term("a•b"), parse_pattern("a")).has_value());
}

TEST_CASE("matching an ill-formed pattern throws") {
  PatPtr bad = compound_pat(binder(Name("x")), binder(Name("x")));
  CHECK_THROWS_AS(match_term(parse_term("a•b"), bad), std::invalid_argument);
}

TEST_CASE("match then substitute reproduces the term (property)") {
  // For a pattern made only of binders in term shape, {t//p} always exists
  // and sigma maps the binders back onto t's pieces.
  std::mt19937 rng(21);
  for (int i = 0; i < 200; ++i) {
    TermPtr t = testutil::random_term(rng, 4);
    PatPtr p = term_to_pattern(t);
    // name-matches match themselves: {t // pattern-of-t} is the empty subst
    auto sigma = match_term(t, p);
    REQUIRE(sigma.has_value());
    CHECK(sigma->empty());
  }
}

TEST_CASE("substitution leaves names outside the domain alone") {
  Subst sigma;
  sigma.map.emplace(Name("x"), parse_term("a•b"));
  CHECK(term_equal(sigma.apply(parse_term("x•y")), parse_term("(a•b)•y")));
  CHECK(sigma.range_names() == NameSet{Name("a"), Name("b")});
}

TEST_SUITE_END();
