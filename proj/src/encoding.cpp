#include "tmpc/encoding.hpp"

#include <algorithm>

namespace tmpc {

void validate_reserved(const Machine& m, const ReservedNames& rn) {
  const Name reserved[] = {rn.e, rn.l, rn.l1, rn.r, rn.r1};
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j)
      if (reserved[i] == reserved[j])
        throw std::invalid_argument("reserved names must be distinct: '" +
                                    reserved[i].id + "'");
  auto check = [&](const Name& n, const char* what) {
    for (const auto& rv : reserved)
      if (n == rv)
        throw std::invalid_argument(std::string(what) + " '" + n.id +
                                    "' collides with a reserved name");
    if (n.id.find('#') != std::string::npos)
      throw std::invalid_argument(std::string(what) + " '" + n.id +
                                  "' uses '#', which is reserved for generated names");
  };
  for (const auto& s : m.alphabet) check(s, "symbol");
  for (const auto& q : m.states) check(q, "state");
  for (const auto& rv : reserved)
    if (rv.id.find('#') != std::string::npos)
      throw std::invalid_argument("reserved name '" + rv.id + "' may not use '#'");
}

// -- finite-term encoding ------------------------------------------------------

TermPtr encode_tape(const Tape& t, const ReservedNames& rn) {
  // Left window ...,s_i,...,s1 (adjacent-first storage) becomes
  // ((e•s_i)•...)•s1; right window s1,...,s_i becomes s1•(...•(s_i•e)).
  TermPtr left = name_term(rn.e);
  for (auto it = t.left.rbegin(); it != t.left.rend(); ++it)
    left = compound(std::move(left), name_term(*it));
  TermPtr right = name_term(rn.e);
  for (auto it = t.right.rbegin(); it != t.right.rend(); ++it)
    right = compound(name_term(*it), std::move(right));
  return compound(compound(std::move(left), name_term(t.head)), std::move(right));
}

ProcPtr encode_config(const Configuration& c, const ReservedNames& rn) {
  return acpc_out(compound(name_term(c.state), encode_tape(c.tape, rn)), nil());
}

ProcPtr encode_tuple(const Rule& u, const Machine& m, const ReservedNames& rn) {
  auto nm = [](const Name& n) { return name_match(n); };
  auto b = [](const Name& n) { return binder(n); };
  auto t = [](const Name& n) { return name_term(n); };

  PatPtr main_pat, edge_pat;
  TermPtr main_out, edge_out;
  if (u.move == Dir::L) {
    // in(q_i•((λl•λl1)•s1•λr)).out(q_j•(l•l1•(s2•r)))
    main_pat = compound_pat(
        compound_pat(compound_pat(b(rn.l), b(rn.l1)), nm(u.read)), b(rn.r));
    main_out = compound(compound(t(rn.l), t(rn.l1)), compound(t(u.write), t(rn.r)));
    // in(q_i•(e•s1•λr)).out(q_j•(e•b•(s2•r)))
    edge_pat = compound_pat(compound_pat(nm(rn.e), nm(u.read)), b(rn.r));
    edge_out = compound(compound(t(rn.e), t(m.blank)), compound(t(u.write), t(rn.r)));
  } else {
    // in(q_i•(λl•s1•(λr1•λr))).out(q_j•((l•s2)•r1•r))
    main_pat = compound_pat(compound_pat(b(rn.l), nm(u.read)),
                            compound_pat(b(rn.r1), b(rn.r)));
    main_out = compound(compound(compound(t(rn.l), t(u.write)), t(rn.r1)), t(rn.r));
    // in(q_i•(λl•s1•e)).out(q_j•((l•s2)•b•e))
    edge_pat = compound_pat(compound_pat(b(rn.l), nm(u.read)), nm(rn.e));
    edge_out = compound(compound(compound(t(rn.l), t(u.write)), t(m.blank)), t(rn.e));
  }

  auto branch = [&](PatPtr pat, TermPtr out) {
    return repl(acpc_in(compound_pat(nm(u.from), std::move(pat)),
                        acpc_out(compound(t(u.to), std::move(out)), nil())));
  };
  return par(branch(std::move(main_pat), std::move(main_out)),
             branch(std::move(edge_pat), std::move(edge_out)));
}

ProcPtr encode_transition_fn(const Machine& m, const ReservedNames& rn) {
  std::vector<ProcPtr> parts;
  parts.reserve(m.rules.size());
  for (const auto& u : m.rules) parts.push_back(encode_tuple(u, m, rn));
  return par_all(parts);
}

ProcPtr encode_machine(const Machine& m, const Configuration& c,
                       const ReservedNames& rn) {
  validate_reserved(m, rn);
  return par(encode_config(c, rn), encode_transition_fn(m, rn));
}

// -- decoding ---------------------------------------------------------------------

namespace {

bool known_symbol(const Machine& m, const Name& n) {
  return std::find(m.alphabet.begin(), m.alphabet.end(), n) != m.alphabet.end();
}

Name expect_symbol(const TermPtr& t, const Machine& m, const char* where) {
  if (!t->is_name()) throw DecodeError(where, "expected a symbol name, found a compound");
  if (!known_symbol(m, t->name))
    throw DecodeError(where, "'" + t->name.id + "' is not a symbol of the machine");
  return t->name;
}

}  // namespace

Configuration decode_config(const TermPtr& t, const Machine& m,
                            const ReservedNames& rn) {
  if (t->is_name()) throw DecodeError("top", "expected q•tape, found a bare name");
  if (!t->left->is_name()) throw DecodeError("state", "state position is not a name");
  Configuration c;
  c.state = t->left->name;
  if (std::find(m.states.begin(), m.states.end(), c.state) == m.states.end())
    throw DecodeError("state", "'" + c.state.id + "' is not a state of the machine");

  const TermPtr& tape = t->right;
  if (tape->is_name()) throw DecodeError("tape", "tape term is a bare name");
  if (tape->left->is_name())
    throw DecodeError("tape", "missing (left•head) component");

  // left list: ((e•s_i)•...)•s1, peeled adjacent-first
  TermPtr cur = tape->left->left;
  while (!cur->is_name()) {
    c.tape.left.push_back(expect_symbol(cur->right, m, "left"));
    cur = cur->left;
  }
  if (cur->name != rn.e)
    throw DecodeError("left", "left list does not end in '" + rn.e.id + "'");

  c.tape.head = expect_symbol(tape->left->right, m, "head");

  // right list: s1•(...•(s_i•e))
  cur = tape->right;
  while (!cur->is_name()) {
    c.tape.right.push_back(expect_symbol(cur->left, m, "right"));
    cur = cur->right;
  }
  if (cur->name != rn.e)
    throw DecodeError("right", "right list does not end in '" + rn.e.id + "'");
  return c;
}

// -- CPC --------------------------------------------------------------------------

namespace {

CpcPatPtr pat_to_cpc(const PatPtr& p) {
  switch (p->kind) {
    case PatKind::Binder: return cpc_binder(p->name);
    case PatKind::NameMatch: return cpc_variable(p->name);
    case PatKind::Compound:
      return cpc_compound(pat_to_cpc(p->left), pat_to_cpc(p->right));
  }
  return nullptr;
}

ProcPtr acpc_to_cpc(const ProcPtr& p) {
  return std::visit(
      [&](const auto& n) -> ProcPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PNil>) {
          return p;
        } else if constexpr (std::is_same_v<T, PPar>) {
          return par(acpc_to_cpc(n.left), acpc_to_cpc(n.right));
        } else if constexpr (std::is_same_v<T, PRepl>) {
          return repl(acpc_to_cpc(n.body));
        } else if constexpr (std::is_same_v<T, PRestrict>) {
          return restrict_name(n.name, acpc_to_cpc(n.body));
        } else if constexpr (std::is_same_v<T, PAcpcIn>) {
          return cpc_case(pat_to_cpc(n.pattern), acpc_to_cpc(n.body));
        } else if constexpr (std::is_same_v<T, PAcpcOut>) {
          return cpc_case(term_to_cpc(n.term), acpc_to_cpc(n.body));
        } else {
          throw std::logic_error("acpc_to_cpc: not an ACPC process");
        }
      },
      p->node);
}

}  // namespace

ProcPtr encode_machine_cpc(const Machine& m, const Configuration& c,
                           const ReservedNames& rn) {
  return acpc_to_cpc(encode_machine(m, c, rn));
}

// -- Psi --------------------------------------------------------------------------

namespace {

ProcPtr encode_tuple_psi(const Rule& u, const Machine& m, const ReservedNames& rn) {
  auto t = [](const Name& n) { return name_term(n); };
  auto pair = [](TermPtr a, TermPtr b) { return compound(std::move(a), std::move(b)); };

  std::vector<Name> main_bs, edge_bs;
  TermPtr main_pat, edge_pat, main_out, edge_out;
  if (u.move == Dir::L) {
    main_bs = {rn.l, rn.l1, rn.r};
    main_pat = pair(pair(pair(t(rn.l), t(rn.l1)), t(u.read)), t(rn.r));
    main_out = pair(pair(t(rn.l), t(rn.l1)), pair(t(u.write), t(rn.r)));
    edge_bs = {rn.r};
    edge_pat = pair(pair(t(rn.e), t(u.read)), t(rn.r));
    edge_out = pair(pair(t(rn.e), t(m.blank)), pair(t(u.write), t(rn.r)));
  } else {
    main_bs = {rn.l, rn.r1, rn.r};
    main_pat = pair(pair(t(rn.l), t(u.read)), pair(t(rn.r1), t(rn.r)));
    main_out = pair(pair(pair(t(rn.l), t(u.write)), t(rn.r1)), t(rn.r));
    edge_bs = {rn.l};
    edge_pat = pair(pair(t(rn.l), t(u.read)), t(rn.e));
    edge_out = pair(pair(pair(t(rn.l), t(u.write)), t(m.blank)), t(rn.e));
  }

  auto branch = [&](std::vector<Name> bs, TermPtr pat, TermPtr out) {
    return repl(psi_in(t(u.from), std::move(bs), std::move(pat),
                       psi_out(t(u.to), std::move(out), nil())));
  };
  return par(branch(std::move(main_bs), std::move(main_pat), std::move(main_out)),
             branch(std::move(edge_bs), std::move(edge_pat), std::move(edge_out)));
}

}  // namespace

ProcPtr encode_machine_psi(const Machine& m, const Configuration& c,
                           const ReservedNames& rn) {
  validate_reserved(m, rn);
  ProcPtr config = psi_out(name_term(c.state), encode_tape(c.tape, rn), nil());
  std::vector<ProcPtr> parts;
  parts.reserve(m.rules.size() + 1);
  parts.push_back(std::move(config));
  for (const auto& u : m.rules) parts.push_back(encode_tuple_psi(u, m, rn));
  return par_all(parts);
}

// -- pi ---------------------------------------------------------------------------

Name composite_name(const Name& state, const Name& symbol) {
  return Name(state.id + "#" + symbol.id);
}

namespace {

const Name kSymBinder{"#s"};

// One side of the tape: cells s_1..s_k reachable from `endpoint`, each cell a
// one-shot output carrying its symbol and the link to the next cell. The last
// link dangles (reading past it blocks, which is what exhausting the budget
// means).
void chain_cells(const std::vector<Name>& symbols, const Name& endpoint,
                 const std::string& link_prefix, std::vector<Name>& links,
                 std::vector<ProcPtr>& cells) {
  Name prev = endpoint;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    Name link(link_prefix + std::to_string(i + 1));
    cells.push_back(pi_out(prev, {symbols[i], link}, nil()));
    links.push_back(link);
    prev = link;
  }
}

}  // namespace

PiTape encode_tape_pi(const Tape& t, std::size_t budget_left,
                      std::size_t budget_right, const Machine& m,
                      const ReservedNames& rn) {
  std::vector<Name> left_syms = t.left;
  left_syms.insert(left_syms.end(), budget_left, m.blank);
  std::vector<Name> right_syms = t.right;
  right_syms.insert(right_syms.end(), budget_right, m.blank);

  std::vector<Name> links;
  std::vector<ProcPtr> cells;
  chain_cells(left_syms, rn.l, "#l", links, cells);
  chain_cells(right_syms, rn.r, "#r", links, cells);

  ProcPtr body = par_all(cells);
  for (auto it = links.rbegin(); it != links.rend(); ++it)
    body = restrict_name(*it, body);
  return {std::move(body), rn.l, rn.r};
}

PiTape encode_tape_pi(const Tape& t, std::size_t budget, const Machine& m,
                      const ReservedNames& rn) {
  return encode_tape_pi(t, budget, budget, m, rn);
}

ProcPtr encode_tuple_pi(const Rule& u, const Machine& m, const ReservedNames& rn) {
  // Emits the successor head output once the read symbol is known; the case
  // analysis walks the alphabet with ifte, ending in 0.
  ProcPtr chain = nil();
  for (auto it = m.alphabet.rbegin(); it != m.alphabet.rend(); ++it) {
    ProcPtr emit;
    if (u.move == Dir::L) {
      // consumed the adjacent left cell; write s2 as the new right cell
      emit = par(pi_out(composite_name(u.to, *it), {rn.l1, rn.r1}, nil()),
                 pi_out(rn.r1, {u.write, rn.r}, nil()));
    } else {
      emit = par(pi_out(composite_name(u.to, *it), {rn.l1, rn.r1}, nil()),
                 pi_out(rn.l1, {u.write, rn.l}, nil()));
    }
    chain = ifte(kSymBinder, *it, std::move(emit), std::move(chain));
  }

  if (u.move == Dir::L) {
    return pi_in(composite_name(u.from, u.read), {rn.l, rn.r},
                 pi_in(rn.l, {kSymBinder, rn.l1},
                       restrict_name(rn.r1, std::move(chain))));
  }
  return pi_in(composite_name(u.from, u.read), {rn.l, rn.r},
               pi_in(rn.r, {kSymBinder, rn.r1},
                     restrict_name(rn.l1, std::move(chain))));
}

ProcPtr encode_machine_pi(const Machine& m, const Configuration& c,
                          std::size_t budget_left, std::size_t budget_right,
                          const ReservedNames& rn) {
  validate_reserved(m, rn);
  PiTape tape = encode_tape_pi(c.tape, budget_left, budget_right, m, rn);
  ProcPtr head =
      pi_out(composite_name(c.state, c.tape.head), {tape.left_end, tape.right_end},
             nil());
  std::vector<ProcPtr> parts;
  parts.reserve(m.rules.size() + 2);
  parts.push_back(std::move(head));
  parts.push_back(std::move(tape.process));
  for (const auto& u : m.rules) parts.push_back(repl(encode_tuple_pi(u, m, rn)));
  return restrict_name(rn.l, restrict_name(rn.r, par_all(parts)));
}

ProcPtr encode_machine_pi(const Machine& m, const Configuration& c,
                          std::size_t budget, const ReservedNames& rn) {
  return encode_machine_pi(m, c, budget, budget, rn);
}

}  // namespace tmpc
