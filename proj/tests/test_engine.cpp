#include "doctest.h"
#include "helpers.hpp"
#include "tmpc/engine.hpp"

using namespace tmpc;

TEST_SUITE_BEGIN("engine");

TEST_CASE("channel equivalence is syntactic term equality") {
  CHECK(channel_equiv(parse_term("a•b"), parse_term("a•b")));
  CHECK(!channel_equiv(parse_term("a•b"), parse_term("b•a")));
  CHECK(!channel_equiv(parse_term("a"), parse_term("a•a")));
}

TEST_CASE("psi_match recovers the unique instantiation") {
  // K = ((e,1),(1,(1,e))), H = ((l,1),(r1,r)) over {l, r1, r}
  TermPtr k = compound(compound(name_term(Name("e")), name_term(Name("1"))),
                       compound(name_term(Name("1")),
                                compound(name_term(Name("1")), name_term(Name("e")))));
  TermPtr h = compound(compound(name_term(Name("l")), name_term(Name("1"))),
                       compound(name_term(Name("r1")), name_term(Name("r"))));
  auto s = psi_match(k, {Name("l"), Name("r1"), Name("r")}, h);
  REQUIRE(s.has_value());
  CHECK(term_equal(s->apply(name_term(Name("l"))), parse_term("e")));
  CHECK(term_equal(s->apply(name_term(Name("r1"))), parse_term("1")));
  CHECK(term_equal(s->apply(name_term(Name("r"))), parse_term("1•e")));
}

TEST_CASE("psi_match edge cases") {
  TermPtr ab = parse_term("a•b");
  // non-binder names must coincide
  CHECK(!psi_match(ab, {Name("x")}, parse_term("x•c")).has_value());
  CHECK(psi_match(ab, {Name("x")}, parse_term("x•b")).has_value());
  // a repeated binder must hit equal subterms
  CHECK(psi_match(parse_term("a•a"), {Name("x")}, parse_term("x•x")).has_value());
  CHECK(!psi_match(parse_term("a•b"), {Name("x")}, parse_term("x•x")).has_value());
  // every binder must be used by the pattern
  CHECK(!psi_match(ab, {Name("x"), Name("y")}, parse_term("x•b")).has_value());
  // a name cannot split into a compound
  CHECK(!psi_match(parse_term("a"), {Name("x")}, parse_term("x•b")).has_value());
  CHECK_THROWS_AS(psi_match(ab, {Name("x"), Name("x")}, parse_term("x•x")),
                  std::invalid_argument);
}

TEST_CASE("the single interaction axiom fires") {
  // out(a•b).0 | in(λx•b).out(x).0  ->  0 | out(a).0
  ProcPtr p = par(acpc_out(parse_term("a•b"), nil()),
                  acpc_in(parse_pattern("λx•b"),
                          acpc_out(parse_term("x"), nil())));
  auto cands = reduce_candidates(p);
  REQUIRE(cands.size() == 1);
  CHECK(cands[0].canon == canonicalize(acpc_out(parse_term("a"), nil())));

  // two distinct receivers produce two distinct successors
  ProcPtr q = par(p, acpc_in(parse_pattern("λy•b"),
                             acpc_out(parse_term("y•y"), nil())));
  CHECK(reduce_candidates(q).size() == 2);
}

TEST_CASE("no reaction without a match") {
  ProcPtr p = par(acpc_out(parse_term("a•b"), nil()),
                  acpc_in(parse_pattern("λx•c"), nil()));
  CHECK(reduce_candidates(p).empty());
  // two outputs never react in acpc
  ProcPtr q = par(acpc_out(parse_term("a"), nil()),
                  acpc_out(parse_term("a"), nil()));
  CHECK(reduce_candidates(q).empty());
  // a neutral process has no calculus and no candidates
  CHECK(reduce_candidates(par(nil(), repl(nil()))).empty());
}

TEST_CASE("cpc cases unify symmetrically, exchanging values") {
  // (λx•a) -> out-shape | (b•λy) -> ...  both receive
  ProcPtr p = par(cpc_case(cpc_compound(cpc_binder(Name("x")),
                                        cpc_variable(Name("a"))),
                           cpc_case(cpc_variable(Name("x")), nil())),
                  cpc_case(cpc_compound(cpc_variable(Name("b")),
                                        cpc_binder(Name("y"))),
                           cpc_case(cpc_variable(Name("y")), nil())));
  auto cands = reduce_candidates(p);
  REQUIRE(cands.size() == 1);
  CHECK(!cands[0].out_out);
  ProcPtr expect = par(cpc_case(cpc_variable(Name("b")), nil()),
                       cpc_case(cpc_variable(Name("a")), nil()));
  CHECK(cands[0].canon == canonicalize(expect));

  // two communicable patterns can also unify; the flag reports it
  ProcPtr oo = par(cpc_case(cpc_variable(Name("a")), nil()),
                   cpc_case(cpc_variable(Name("a")), nil()));
  auto c2 = reduce_candidates(oo);
  REQUIRE(c2.size() == 1);
  CHECK(c2[0].out_out);
}

TEST_CASE("psi exchange happens only on equal channels") {
  TermPtr ch = parse_term("c•d");
  ProcPtr p = par(psi_out(ch, parse_term("a•b"), nil()),
                  psi_in(ch, {Name("x")}, parse_term("x•b"),
                         psi_out(parse_term("k"), parse_term("x"), nil())));
  auto cands = reduce_candidates(p);
  REQUIRE(cands.size() == 1);
  CHECK(cands[0].channel == "(c,d)");
  CHECK(cands[0].canon ==
        canonicalize(psi_out(parse_term("k"), parse_term("a"), nil())));

  ProcPtr q = par(psi_out(parse_term("c"), parse_term("a•b"), nil()),
                  psi_in(parse_term("d"), {Name("x")}, parse_term("x•b"), nil()));
  CHECK(reduce_candidates(q).empty());
}

TEST_CASE("pi exchange substitutes names positionally") {
  ProcPtr p = par(pi_out(Name("c"), {Name("a"), Name("b")}, nil()),
                  pi_in(Name("c"), {Name("x"), Name("y")},
                        pi_out(Name("x"), {Name("y")}, nil())));
  auto cands = reduce_candidates(p);
  REQUIRE(cands.size() == 1);
  CHECK(cands[0].channel == "c");
  CHECK(cands[0].canon ==
        canonicalize(pi_out(Name("a"), {Name("b")}, nil())));

  // arity mismatch: no reaction
  ProcPtr q = par(pi_out(Name("c"), {Name("a")}, nil()),
                  pi_in(Name("c"), {Name("x"), Name("y")}, nil()));
  CHECK(reduce_candidates(q).empty());
}

TEST_CASE("restricted channels react under the binder") {
  ProcPtr p = restrict_name(
      Name("c"), par(pi_out(Name("c"), {Name("a")}, nil()),
                     pi_in(Name("c"), {Name("x")},
                           pi_out(Name("d"), {Name("x")}, nil()))));
  auto cands = reduce_candidates(p);
  REQUIRE(cands.size() == 1);
  CHECK(cands[0].canon == canonicalize(pi_out(Name("d"), {Name("a")}, nil())));
}

TEST_CASE("replication unfolds once per enumeration") {
  ProcPtr bang = repl(acpc_in(parse_pattern("λx"),
                              acpc_out(parse_term("x•x"), nil())));
  ProcPtr p = par(acpc_out(parse_term("a"), nil()), bang);
  auto cands = reduce_candidates(p);
  REQUIRE(cands.size() == 1);
  // the replication survives the reaction
  ProcPtr expect = par(acpc_out(parse_term("a•a"), nil()), bang);
  CHECK(cands[0].canon == canonicalize(expect));
}

TEST_CASE("run_reductions follows unique successors and flags ambiguity") {
  ProcPtr chain = par(acpc_out(parse_term("a"), nil()),
                      acpc_in(parse_pattern("λx"),
                              par(acpc_out(parse_term("x•x"), nil()),
                                  acpc_in(parse_pattern("λy•a"), nil()))));
  ReductionTrace tr = run_reductions(chain, 10);
  CHECK(tr.states.size() == 3);
  CHECK(!tr.ambiguous);

  ProcPtr amb = par(acpc_out(parse_term("a"), nil()),
                    par(acpc_in(parse_pattern("λx"),
                                acpc_out(parse_term("x"), nil())),
                        acpc_in(parse_pattern("λy"),
                                acpc_out(parse_term("y•y"), nil()))));
  ReductionTrace tr2 = run_reductions(amb, 10);
  CHECK(tr2.ambiguous);
  CHECK(tr2.states.size() == 1);
}

TEST_SUITE_END();
