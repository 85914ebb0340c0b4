#pragma once

#include <random>
#include <string>
#include <vector>

#include "tmpc/machine_file.hpp"
#include "tmpc/process.hpp"

// Shared fixtures for the unit tests and the acceptance runner: the parity
// machine from the walkthrough example, a generator for random total
// machines, and a generator for random single-calculus processes.
namespace testutil {

inline std::string parity_source(const std::string& tape) {
  return "alphabet: b 1\n"
         "blank: b\n"
         "states: q0 q1 q2 q3\n"
         "start: q0\n"
         "rule: q0 b -> 1 L q2\n"
         "rule: q0 1 -> b R q1\n"
         "rule: q1 b -> b L q3\n"
         "rule: q1 1 -> b R q0\n"
         "rule: q2 b -> b R q3\n"
         "rule: q2 1 -> b R q3\n"
         "tape: " + tape + "\n"
         "head: 0\n";
}

inline tmpc::MachineSpec parity_spec(const std::string& tape = "1 1 1") {
  return tmpc::parse_machine(parity_source(tape));
}

inline tmpc::MachineSpec looper_spec() {
  return tmpc::parse_machine(
      "alphabet: b\nblank: b\nstates: q0\nstart: q0\n"
      "rule: q0 b -> b R q0\ntape:\nhead: 0\n");
}

// Random total machine: |alphabet| <= 4, |states| <= 5, every non-terminating
// state has one rule per symbol, plus a random window of length <= max_window.
inline tmpc::MachineSpec random_machine(std::mt19937& rng,
                                        std::size_t max_window = 6) {
  using namespace tmpc;
  static const std::vector<Name> sym_pool = {Name("b"), Name("x"), Name("y"),
                                             Name("z")};
  static const std::vector<Name> state_pool = {Name("q0"), Name("q1"), Name("q2"),
                                               Name("q3"), Name("q4")};
  auto pick = [&](std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };

  MachineSpec spec;
  Machine& m = spec.machine;
  std::size_t nsym = 1 + pick(sym_pool.size());
  std::size_t nst = 1 + pick(state_pool.size());
  m.alphabet.assign(sym_pool.begin(), sym_pool.begin() + nsym);
  m.blank = m.alphabet.front();
  m.states.assign(state_pool.begin(), state_pool.begin() + nst);
  m.start = m.states.front();

  for (const auto& q : m.states) {
    // roughly a third of the states terminate, but keep the start state live
    // often enough for the runs to be interesting
    bool terminating = pick(3) == 0 && !(q == m.start && pick(4) != 0);
    if (terminating) continue;
    for (const auto& s : m.alphabet) {
      Rule r;
      r.from = q;
      r.read = s;
      r.write = m.alphabet[pick(nsym)];
      r.move = pick(2) == 0 ? Dir::L : Dir::R;
      r.to = m.states[pick(nst)];
      m.rules.push_back(r);
    }
  }

  std::size_t wlen = pick(max_window + 1);
  for (std::size_t i = 0; i < wlen; ++i) spec.window.push_back(m.alphabet[pick(nsym)]);
  spec.head = wlen == 0 ? 0 : pick(wlen);
  return spec;
}

// -- random processes -------------------------------------------------------------

inline tmpc::TermPtr random_term(std::mt19937& rng, int depth) {
  using namespace tmpc;
  static const std::vector<Name> pool = {Name("a"), Name("b"), Name("c"),
                                         Name("d"), Name("m")};
  auto pick = [&](std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };
  if (depth <= 0 || pick(2) == 0) return name_term(pool[pick(pool.size())]);
  return compound(random_term(rng, depth - 1), random_term(rng, depth - 1));
}

inline tmpc::PatPtr random_pattern(std::mt19937& rng, int depth) {
  using namespace tmpc;
  static const std::vector<Name> pool = {Name("a"), Name("b"), Name("c")};
  static int counter = 0;
  auto pick = [&](std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };
  if (depth <= 0 || pick(2) == 0) {
    if (pick(2) == 0) return binder(Name("v" + std::to_string(counter++ % 64)));
    return name_match(pool[pick(pool.size())]);
  }
  return compound_pat(random_pattern(rng, depth - 1), random_pattern(rng, depth - 1));
}

inline tmpc::CpcPatPtr random_cpc_pattern(std::mt19937& rng, int depth) {
  using namespace tmpc;
  static const std::vector<Name> pool = {Name("a"), Name("b"), Name("c")};
  static int counter = 0;
  auto pick = [&](std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };
  if (depth <= 0 || pick(2) == 0) {
    switch (pick(3)) {
      case 0: return cpc_binder(Name("w" + std::to_string(counter++ % 64)));
      case 1: return cpc_protected(pool[pick(pool.size())]);
      default: return cpc_variable(pool[pick(pool.size())]);
    }
  }
  return cpc_compound(random_cpc_pattern(rng, depth - 1),
                      random_cpc_pattern(rng, depth - 1));
}

inline tmpc::ProcPtr random_process(std::mt19937& rng, tmpc::Calculus calc,
                                    int depth) {
  using namespace tmpc;
  static const std::vector<Name> pool = {Name("a"), Name("b"), Name("c"),
                                         Name("d")};
  auto pick = [&](std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };
  auto leaf = [&]() -> ProcPtr {
    ProcPtr body = depth > 0 && pick(3) == 0
                       ? random_process(rng, calc, depth - 1)
                       : nil();
    switch (calc) {
      case Calculus::Acpc:
        return pick(2) == 0 ? acpc_out(random_term(rng, 2), body)
                            : acpc_in(random_pattern(rng, 2), body);
      case Calculus::Cpc:
        return cpc_case(random_cpc_pattern(rng, 2), body);
      case Calculus::Psi:
        if (pick(2) == 0) return psi_out(random_term(rng, 1), random_term(rng, 2), body);
        return psi_in(random_term(rng, 1), {Name("v")}, compound(name_term(Name("v")), random_term(rng, 1)), body);
      case Calculus::Pi: {
        Name ch = pool[pick(pool.size())];
        if (pick(4) == 0)
          return ifte(pool[pick(pool.size())], pool[pick(pool.size())], body, nil());
        if (pick(2) == 0) return pi_out(ch, {pool[pick(pool.size())]}, body);
        return pi_in(ch, {Name("v" + std::to_string(pick(8)))}, body);
      }
    }
    return nil();
  };
  if (depth <= 0) return pick(4) == 0 ? nil() : leaf();
  switch (pick(5)) {
    case 0: return par(random_process(rng, calc, depth - 1),
                       random_process(rng, calc, depth - 1));
    case 1: return repl(random_process(rng, calc, depth - 1));
    case 2: return restrict_name(pool[pick(pool.size())],
                                 random_process(rng, calc, depth - 1));
    default: return leaf();
  }
}

// A structurally congruent variant: swapped parallel components, sprinkled
// Nil units, and a duplicated restriction shell. equiv() must not notice.
inline tmpc::ProcPtr shuffle_congruent(std::mt19937& rng, const tmpc::ProcPtr& p) {
  using namespace tmpc;
  auto pick = [&](std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };
  ProcPtr out = p;
  if (const auto* pp = std::get_if<PPar>(&p->node)) {
    ProcPtr l = shuffle_congruent(rng, pp->left);
    ProcPtr r = shuffle_congruent(rng, pp->right);
    out = pick(2) == 0 ? par(r, l) : par(l, r);
  } else if (const auto* rp = std::get_if<PRestrict>(&p->node)) {
    out = restrict_name(rp->name, shuffle_congruent(rng, rp->body));
  }
  if (pick(3) == 0) out = par(out, nil());
  if (pick(3) == 0) out = par(nil(), out);
  if (pick(4) == 0) out = restrict_name(Name("zz_unused"), out);
  return out;
}

}  // namespace testutil
