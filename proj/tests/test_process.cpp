#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "tmpc/process.hpp"

using namespace tmpc;

TEST_SUITE_BEGIN("process");

TEST_CASE("calculus inference") {
  CHECK(!calculus_of(nil()).has_value());
  CHECK(!calculus_of(restrict_name(Name("a"), par(nil(), repl(nil())))).has_value());
  CHECK(calculus_of(acpc_out(parse_term("a"), nil())) == Calculus::Acpc);
  CHECK(calculus_of(cpc_case(cpc_variable(Name("a")), nil())) == Calculus::Cpc);
  CHECK(calculus_of(psi_out(parse_term("a"), parse_term("b"), nil())) == Calculus::Psi);
  CHECK(calculus_of(pi_out(Name("a"), {Name("b")}, nil())) == Calculus::Pi);
  CHECK(calculus_of(ifte(Name("a"), Name("b"), nil(), nil())) == Calculus::Pi);

  ProcPtr mixed = par(acpc_out(parse_term("a"), nil()),
                      pi_out(Name("a"), {}, nil()));
  CHECK_THROWS(calculus_of(mixed));
}

TEST_CASE("free names respect binders") {
  // in((λx•a)).out(x•b).0 -- x is bound, a and b are free
  ProcPtr p = acpc_in(parse_pattern("λx•a"), acpc_out(parse_term("x•b"), nil()));
  CHECK(free_names(p) == NameSet{Name("a"), Name("b")});

  ProcPtr q = restrict_name(Name("a"), p);
  CHECK(free_names(q) == NameSet{Name("b")});

  ProcPtr pi = pi_in(Name("c"), {Name("x")}, pi_out(Name("x"), {Name("y")}, nil()));
  CHECK(free_names(pi) == NameSet{Name("c"), Name("y")});

  ProcPtr psi = psi_in(parse_term("c"), {Name("x")}, parse_term("x•d"),
                       psi_out(parse_term("x"), parse_term("x"), nil()));
  CHECK(free_names(psi) == NameSet{Name("c"), Name("d")});
}

TEST_CASE("substitution replaces free occurrences only") {
  Subst sigma;
  sigma.map.emplace(Name("a"), parse_term("m•n"));
  ProcPtr p = acpc_out(parse_term("a•b"), nil());
  ProcPtr r = apply_subst_process(sigma, p);
  const auto* out = std::get_if<PAcpcOut>(&r->node);
  REQUIRE(out);
  CHECK(term_equal(out->term, parse_term("(m•n)•b")));

  // bound occurrence shadows the substitution
  ProcPtr q = acpc_in(parse_pattern("λa"), acpc_out(parse_term("a"), nil()));
  ProcPtr rq = apply_subst_process(sigma, q);
  const auto* in = std::get_if<PAcpcIn>(&rq->node);
  REQUIRE(in);
  const auto* body = std::get_if<PAcpcOut>(&in->body->node);
  REQUIRE(body);
  CHECK(body->term->is_name());  // still a plain name, not m•n
}

TEST_CASE("substitution avoids capture by renaming the binder") {
  // ({m/a}) applied to in(λm).out(m•a) must not capture the incoming m.
  Subst sigma;
  sigma.map.emplace(Name("a"), parse_term("m"));
  ProcPtr p = acpc_in(parse_pattern("λm"), acpc_out(parse_term("m•a"), nil()));
  ProcPtr r = apply_subst_process(sigma, p);
  const auto* in = std::get_if<PAcpcIn>(&r->node);
  REQUIRE(in);
  std::vector<Name> bs = binding_names(in->pattern);
  REQUIRE(bs.size() == 1);
  CHECK(bs[0] != Name("m"));  // binder renamed away from the range
  const auto* body = std::get_if<PAcpcOut>(&in->body->node);
  REQUIRE(body);
  // left leaf follows the renamed binder, right leaf is the substituted m
  CHECK(term_equal(body->term, compound(name_term(bs[0]), parse_term("m"))));

  // same story for restriction
  ProcPtr q = restrict_name(Name("m"), acpc_out(parse_term("m•a"), nil()));
  ProcPtr rq = apply_subst_process(sigma, q);
  const auto* nu = std::get_if<PRestrict>(&rq->node);
  REQUIRE(nu);
  CHECK(nu->name != Name("m"));
}

TEST_CASE("pi substitution needs name-for-name ranges") {
  Subst ok;
  ok.map.emplace(Name("a"), name_term(Name("c")));
  ProcPtr p = pi_out(Name("a"), {Name("a"), Name("b")}, nil());
  ProcPtr r = apply_subst_process(ok, p);
  const auto* out = std::get_if<PPiOut>(&r->node);
  REQUIRE(out);
  CHECK(out->channel == Name("c"));
  CHECK(out->payload == std::vector<Name>{Name("c"), Name("b")});

  Subst bad;
  bad.map.emplace(Name("a"), parse_term("c•d"));
  CHECK_THROWS(apply_subst_process(bad, p));
}

TEST_CASE("par_all right-nests and collapses the empty case") {
  CHECK(std::holds_alternative<PNil>(par_all({})->node));
  ProcPtr a = acpc_out(parse_term("a"), nil());
  CHECK(par_all({a}) == a);
  ProcPtr three = par_all({a, a, a});
  const auto* top = std::get_if<PPar>(&three->node);
  REQUIRE(top);
  CHECK(std::holds_alternative<PPar>(top->right->node));
}

TEST_CASE("show_process is stable under substitution identity (property)") {
  std::mt19937 rng(5);
  Subst id;
  for (int i = 0; i < 100; ++i) {
    for (Calculus c : {Calculus::Acpc, Calculus::Cpc, Calculus::Psi, Calculus::Pi}) {
      ProcPtr p = testutil::random_process(rng, c, 3);
      CHECK(show_process(apply_subst_process(id, p)) == show_process(p));
    }
  }
}

TEST_CASE("calculus names round trip") {
  for (Calculus c : {Calculus::Acpc, Calculus::Cpc, Calculus::Psi, Calculus::Pi})
    CHECK(parse_calculus(calculus_name(c)) == c);
  CHECK(!parse_calculus("lambda").has_value());
}

TEST_SUITE_END();
