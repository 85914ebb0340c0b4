#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "tmpc/congruence.hpp"
#include "tmpc/encoding.hpp"
#include "tmpc/engine.hpp"

using namespace tmpc;

namespace {

const MachineSpec& parity() {
  static MachineSpec spec = testutil::parity_spec();
  return spec;
}

Configuration random_config(std::mt19937& rng, const Machine& m,
                            std::size_t max_window) {
  auto pick = [&](std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };
  Configuration c;
  c.state = m.states[pick(m.states.size())];
  c.tape.head = m.alphabet[pick(m.alphabet.size())];
  for (std::size_t i = pick(max_window + 1); i > 0; --i)
    c.tape.left.push_back(m.alphabet[pick(m.alphabet.size())]);
  for (std::size_t i = pick(max_window + 1); i > 0; --i)
    c.tape.right.push_back(m.alphabet[pick(m.alphabet.size())]);
  return c;
}

}  // namespace

TEST_SUITE_BEGIN("encoding");

TEST_CASE("tape windows fold around the head") {
  ReservedNames rn;
  Name b("b"), one("1");
  // empty window: just the end marker on both sides
  CHECK(term_equal(encode_tape(Tape{{}, one, {}}, rn), parse_term("(e•1)•e")));
  // unary three, head on the first 1
  CHECK(term_equal(encode_tape(Tape{{}, one, {one, one}}, rn),
                   parse_term("(e•1)•(1•(1•e))")));
  // left cells nest outward: adjacent cell sits next to the head
  CHECK(term_equal(encode_tape(Tape{{b, one}, one, {b}}, rn),
                   parse_term("(((e•1)•b)•1)•(b•e)")));
}

TEST_CASE("configuration encoding is out(state•tape) and decodes back") {
  ReservedNames rn;
  Configuration c = parity().initial_config();
  ProcPtr p = encode_config(c, rn);
  const auto* out = std::get_if<PAcpcOut>(&p->node);
  REQUIRE(out);
  CHECK(std::holds_alternative<PNil>(out->body->node));
  CHECK(term_equal(out->term, parse_term("q0•((e•1)•(1•(1•e)))")));
  CHECK(decode_config(out->term, parity().machine, rn) == c);
}

TEST_CASE("decode is a left inverse of encode (property)") {
  std::mt19937 rng(99);
  for (int i = 0; i < 150; ++i) {
    MachineSpec spec = testutil::random_machine(rng);
    Configuration c = random_config(rng, spec.machine, 5);
    TermPtr t = compound(name_term(c.state), encode_tape(c.tape, spec.reserved));
    CHECK(decode_config(t, spec.machine, spec.reserved) == c);
  }
}

TEST_CASE("decode rejects malformed terms") {
  ReservedNames rn;
  const Machine& m = parity().machine;
  CHECK_THROWS_AS(decode_config(parse_term("q0"), m, rn), DecodeError);
  CHECK_THROWS_AS(decode_config(parse_term("zz•((e•1)•e)"), m, rn), DecodeError);
  CHECK_THROWS_AS(decode_config(parse_term("q0•((e•zz)•e)"), m, rn), DecodeError);
  // a state name where a symbol belongs
  CHECK_THROWS_AS(decode_config(parse_term("q0•((e•q1)•e)"), m, rn), DecodeError);
}

TEST_CASE("transition function: one main and one edge input per rule") {
  ReservedNames rn;
  ProcPtr f = encode_transition_fn(parity().machine, rn);
  ScopeView sv = top_scope(canonicalize(f).proc);
  CHECK(sv.nus.empty());
  CHECK(sv.comps.size() == 2 * parity().machine.rules.size());
  for (const auto& comp : sv.comps)
    CHECK(std::holds_alternative<PRepl>(comp->node));
}

TEST_CASE("encoded machine equals config composed with the transition function") {
  ReservedNames rn;
  Configuration c = parity().initial_config();
  ProcPtr whole = encode_machine(parity().machine, c, rn);
  ProcPtr split = par(encode_config(c, rn), encode_transition_fn(parity().machine, rn));
  CHECK(equiv(whole, split));
}

TEST_CASE("cpc and psi encodings carry the same tape term") {
  Configuration c = parity().initial_config();
  ReservedNames rn;

  ProcPtr cpc = encode_machine_cpc(parity().machine, c, rn);
  ScopeView csv = top_scope(canonicalize(cpc).proc);
  bool cpc_found = false;
  for (const auto& comp : csv.comps)
    if (const auto* cs = std::get_if<PCpcCase>(&comp->node))
      if (cpc_communicable(cs->pattern)) {
        CHECK(show_cpc_pattern(cs->pattern) ==
              "q0•((e•1)•(1•(1•e)))");
        cpc_found = true;
      }
  CHECK(cpc_found);

  ProcPtr psi = encode_machine_psi(parity().machine, c, rn);
  ScopeView psv = top_scope(canonicalize(psi).proc);
  bool psi_found = false;
  for (const auto& comp : psv.comps)
    if (const auto* po = std::get_if<PPsiOut>(&comp->node)) {
      CHECK(term_equal(po->channel, parse_term("q0")));
      CHECK(term_equal(po->payload, parse_term("(e•1)•(1•(1•e))")));
      psi_found = true;
    }
  CHECK(psi_found);
}

TEST_CASE("pi encoding: head output plus restricted cell chains") {
  MachineSpec spec = testutil::looper_spec();
  ProcPtr p = encode_machine_pi(spec.machine, spec.initial_config(), 1, spec.reserved);
  CanonicalForm cf = canonicalize(p);
  ScopeView sv = top_scope(cf.proc);
  // one blank cell per side, each behind its own link
  CHECK(sv.nus.size() == 4);
  bool head_out = false;
  for (const auto& comp : sv.comps)
    if (const auto* out = std::get_if<PPiOut>(&comp->node)) {
      if (out->channel == composite_name(Name("q0"), Name("b"))) head_out = true;
    }
  CHECK(head_out);
}

TEST_CASE("composite channel names keep state and symbol apart") {
  CHECK(composite_name(Name("q0"), Name("b")) == Name("q0#b"));
  CHECK(composite_name(Name("q"), Name("0b")) != composite_name(Name("q0"), Name("b")));
}

TEST_CASE("validate_reserved rejects collisions") {
  Machine m = parity().machine;
  ReservedNames rn;
  CHECK_NOTHROW(validate_reserved(m, rn));

  Machine bad = m;
  bad.alphabet.push_back(Name("e"));
  CHECK_THROWS_AS(validate_reserved(bad, rn), std::invalid_argument);

  Machine hashy = m;
  hashy.states.push_back(Name("q#1"));
  CHECK_THROWS_AS(validate_reserved(hashy, rn), std::invalid_argument);

  ReservedNames dup;
  dup.l = dup.r;
  CHECK_THROWS_AS(validate_reserved(m, dup), std::invalid_argument);
}

TEST_CASE("config or transition function alone does not reduce") {
  ReservedNames rn;
  Configuration c = parity().initial_config();
  CHECK(reduce_candidates(encode_config(c, rn)).empty());
  CHECK(reduce_candidates(encode_transition_fn(parity().machine, rn)).empty());
  CHECK(reduce_candidates(encode_machine_cpc(parity().machine, c, rn)).size() == 1);
}

TEST_SUITE_END();
