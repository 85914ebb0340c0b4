#include "tmpc/process.hpp"

#include <algorithm>
#include <stdexcept>

namespace tmpc {

std::string calculus_name(Calculus c) {
  switch (c) {
    case Calculus::Acpc: return "acpc";
    case Calculus::Cpc: return "cpc";
    case Calculus::Psi: return "psi";
    case Calculus::Pi: return "pi";
  }
  return "?";
}

std::optional<Calculus> parse_calculus(const std::string& s) {
  if (s == "acpc") return Calculus::Acpc;
  if (s == "cpc") return Calculus::Cpc;
  if (s == "psi") return Calculus::Psi;
  if (s == "pi") return Calculus::Pi;
  return std::nullopt;
}

// -- CPC patterns ------------------------------------------------------------

static CpcPatPtr cpc_leaf(CpcKind k, Name n) {
  auto node = std::make_shared<CpcPatNode>();
  node->kind = k;
  node->name = std::move(n);
  return node;
}

CpcPatPtr cpc_binder(Name n) { return cpc_leaf(CpcKind::Binder, std::move(n)); }
CpcPatPtr cpc_variable(Name n) { return cpc_leaf(CpcKind::Variable, std::move(n)); }
CpcPatPtr cpc_protected(Name n) { return cpc_leaf(CpcKind::Protected, std::move(n)); }

CpcPatPtr cpc_compound(CpcPatPtr l, CpcPatPtr r) {
  auto node = std::make_shared<CpcPatNode>();
  node->kind = CpcKind::Compound;
  node->left = std::move(l);
  node->right = std::move(r);
  return node;
}

CpcPatPtr term_to_cpc(const TermPtr& t) {
  if (t->is_name()) return cpc_variable(t->name);
  return cpc_compound(term_to_cpc(t->left), term_to_cpc(t->right));
}

bool cpc_communicable(const CpcPatPtr& p) {
  switch (p->kind) {
    case CpcKind::Binder:
    case CpcKind::Protected: return false;
    case CpcKind::Variable: return true;
    case CpcKind::Compound:
      return cpc_communicable(p->left) && cpc_communicable(p->right);
  }
  return false;
}

static void collect_cpc_binders(const CpcPatPtr& p, std::vector<Name>& out) {
  if (p->kind == CpcKind::Binder) out.push_back(p->name);
  if (p->kind == CpcKind::Compound) {
    collect_cpc_binders(p->left, out);
    collect_cpc_binders(p->right, out);
  }
}

std::vector<Name> cpc_binding_names(const CpcPatPtr& p) {
  std::vector<Name> out;
  collect_cpc_binders(p, out);
  return out;
}

bool cpc_well_formed(const CpcPatPtr& p) {
  auto bs = cpc_binding_names(p);
  NameSet seen;
  for (const auto& b : bs)
    if (!seen.insert(b).second) return false;
  return true;
}

NameSet cpc_free_names(const CpcPatPtr& p) {
  NameSet out;
  switch (p->kind) {
    case CpcKind::Binder: break;
    case CpcKind::Variable:
    case CpcKind::Protected: out.insert(p->name); break;
    case CpcKind::Compound:
      for (const auto& n : cpc_free_names(p->left)) out.insert(n);
      for (const auto& n : cpc_free_names(p->right)) out.insert(n);
      break;
  }
  return out;
}

static TermPtr cpc_as_term(const CpcPatPtr& p) {
  // Precondition: p is communicable.
  if (p->kind == CpcKind::Variable) return name_term(p->name);
  return compound(cpc_as_term(p->left), cpc_as_term(p->right));
}

static bool cpc_unify_rec(const CpcPatPtr& p, const CpcPatPtr& q, Subst& sigma,
                          Subst& rho) {
  bool p_name = p->kind == CpcKind::Variable || p->kind == CpcKind::Protected;
  bool q_name = q->kind == CpcKind::Variable || q->kind == CpcKind::Protected;
  if (p_name && q_name) return p->name == q->name;
  if (p->kind == CpcKind::Binder && cpc_communicable(q)) {
    sigma.map.emplace(p->name, cpc_as_term(q));
    return true;
  }
  if (q->kind == CpcKind::Binder && cpc_communicable(p)) {
    rho.map.emplace(q->name, cpc_as_term(p));
    return true;
  }
  if (p->kind == CpcKind::Compound && q->kind == CpcKind::Compound) {
    return cpc_unify_rec(p->left, q->left, sigma, rho) &&
           cpc_unify_rec(p->right, q->right, sigma, rho);
  }
  return false;
}

std::optional<std::pair<Subst, Subst>> cpc_unify(const CpcPatPtr& p,
                                                 const CpcPatPtr& q) {
  if (!cpc_well_formed(p) || !cpc_well_formed(q))
    throw std::invalid_argument("cpc_unify: ill-formed pattern");
  Subst sigma, rho;
  if (!cpc_unify_rec(p, q, sigma, rho)) return std::nullopt;
  return std::make_pair(std::move(sigma), std::move(rho));
}

// -- process constructors ------------------------------------------------------

template <typename Node>
static ProcPtr mk(Node&& n) {
  auto p = std::make_shared<Process>();
  p->node = std::forward<Node>(n);
  return p;
}

ProcPtr nil() {
  static const ProcPtr n = mk(PNil{});
  return n;
}

ProcPtr par(ProcPtr a, ProcPtr b) { return mk(PPar{std::move(a), std::move(b)}); }

ProcPtr par_all(const std::vector<ProcPtr>& ps) {
  if (ps.empty()) return nil();
  ProcPtr acc = ps.back();
  for (auto it = ps.rbegin() + 1; it != ps.rend(); ++it) acc = par(*it, acc);
  return acc;
}

ProcPtr repl(ProcPtr body) { return mk(PRepl{std::move(body)}); }

ProcPtr restrict_name(Name n, ProcPtr body) {
  return mk(PRestrict{std::move(n), std::move(body)});
}

ProcPtr acpc_in(PatPtr p, ProcPtr body) {
  return mk(PAcpcIn{std::move(p), std::move(body)});
}

ProcPtr acpc_out(TermPtr t, ProcPtr body) {
  return mk(PAcpcOut{std::move(t), std::move(body)});
}

ProcPtr cpc_case(CpcPatPtr p, ProcPtr body) {
  return mk(PCpcCase{std::move(p), std::move(body)});
}

ProcPtr psi_in(TermPtr channel, std::vector<Name> binders, TermPtr pattern,
               ProcPtr body) {
  return mk(PPsiIn{std::move(channel), std::move(binders), std::move(pattern),
                   std::move(body)});
}

ProcPtr psi_out(TermPtr channel, TermPtr payload, ProcPtr body) {
  return mk(PPsiOut{std::move(channel), std::move(payload), std::move(body)});
}

ProcPtr pi_in(Name channel, std::vector<Name> binders, ProcPtr body) {
  return mk(PPiIn{std::move(channel), std::move(binders), std::move(body)});
}

ProcPtr pi_out(Name channel, std::vector<Name> payload, ProcPtr body) {
  return mk(PPiOut{std::move(channel), std::move(payload), std::move(body)});
}

ProcPtr ifte(Name lhs, Name rhs, ProcPtr then_branch, ProcPtr else_branch) {
  return mk(PIfte{std::move(lhs), std::move(rhs), std::move(then_branch),
                  std::move(else_branch)});
}

// -- calculus tag --------------------------------------------------------------

static void tag_of_rec(const ProcPtr& p, std::optional<Calculus>& tag) {
  auto set = [&](Calculus c) {
    if (tag && *tag != c)
      throw std::invalid_argument("process mixes calculi: " +
                                  calculus_name(*tag) + " and " +
                                  calculus_name(c));
    tag = c;
  };
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PNil>) {
        } else if constexpr (std::is_same_v<T, PPar>) {
          tag_of_rec(n.left, tag);
          tag_of_rec(n.right, tag);
        } else if constexpr (std::is_same_v<T, PRepl>) {
          tag_of_rec(n.body, tag);
        } else if constexpr (std::is_same_v<T, PRestrict>) {
          tag_of_rec(n.body, tag);
        } else if constexpr (std::is_same_v<T, PAcpcIn> ||
                             std::is_same_v<T, PAcpcOut>) {
          set(Calculus::Acpc);
          tag_of_rec(n.body, tag);
        } else if constexpr (std::is_same_v<T, PCpcCase>) {
          set(Calculus::Cpc);
          tag_of_rec(n.body, tag);
        } else if constexpr (std::is_same_v<T, PPsiIn> ||
                             std::is_same_v<T, PPsiOut>) {
          set(Calculus::Psi);
          tag_of_rec(n.body, tag);
        } else if constexpr (std::is_same_v<T, PPiIn> ||
                             std::is_same_v<T, PPiOut>) {
          set(Calculus::Pi);
          tag_of_rec(n.body, tag);
        } else if constexpr (std::is_same_v<T, PIfte>) {
          set(Calculus::Pi);
          tag_of_rec(n.then_branch, tag);
          tag_of_rec(n.else_branch, tag);
        }
      },
      p->node);
}

std::optional<Calculus> calculus_of(const ProcPtr& p) {
  std::optional<Calculus> tag;
  tag_of_rec(p, tag);
  return tag;
}

// -- free names ---------------------------------------------------------------

// `bound` counts how many enclosing binders capture each name; entries are
// added and removed in place around each recursive call (copying the set at
// every binder would make this quadratic on deeply restricted processes).
static void free_names_rec(const ProcPtr& p, std::map<Name, int>& bound,
                           NameSet& out) {
  auto add = [&](const Name& n) {
    if (!bound.count(n)) out.insert(n);
  };
  auto add_term = [&](const TermPtr& t) {
    for (const auto& n : term_names(t)) add(n);
  };
  auto bind = [&](const Name& n) { ++bound[n]; };
  auto unbind = [&](const Name& n) {
    auto it = bound.find(n);
    if (--it->second == 0) bound.erase(it);
  };
  auto under = [&](const auto& names, const ProcPtr& body) {
    for (const auto& m : names) bind(m);
    free_names_rec(body, bound, out);
    for (const auto& m : names) unbind(m);
  };
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PNil>) {
        } else if constexpr (std::is_same_v<T, PPar>) {
          free_names_rec(n.left, bound, out);
          free_names_rec(n.right, bound, out);
        } else if constexpr (std::is_same_v<T, PRepl>) {
          free_names_rec(n.body, bound, out);
        } else if constexpr (std::is_same_v<T, PRestrict>) {
          under(std::vector<Name>{n.name}, n.body);
        } else if constexpr (std::is_same_v<T, PAcpcIn>) {
          for (const auto& m : pattern_free_names(n.pattern)) add(m);
          under(binding_names(n.pattern), n.body);
        } else if constexpr (std::is_same_v<T, PAcpcOut>) {
          add_term(n.term);
          free_names_rec(n.body, bound, out);
        } else if constexpr (std::is_same_v<T, PCpcCase>) {
          for (const auto& m : cpc_free_names(n.pattern)) add(m);
          under(cpc_binding_names(n.pattern), n.body);
        } else if constexpr (std::is_same_v<T, PPsiIn>) {
          add_term(n.channel);
          for (const auto& m : n.binders) bind(m);
          for (const auto& m : term_names(n.pattern)) add(m);
          free_names_rec(n.body, bound, out);
          for (const auto& m : n.binders) unbind(m);
        } else if constexpr (std::is_same_v<T, PPsiOut>) {
          add_term(n.channel);
          add_term(n.payload);
          free_names_rec(n.body, bound, out);
        } else if constexpr (std::is_same_v<T, PPiIn>) {
          add(n.channel);
          under(n.binders, n.body);
        } else if constexpr (std::is_same_v<T, PPiOut>) {
          add(n.channel);
          for (const auto& m : n.payload) add(m);
          free_names_rec(n.body, bound, out);
        } else if constexpr (std::is_same_v<T, PIfte>) {
          add(n.lhs);
          add(n.rhs);
          free_names_rec(n.then_branch, bound, out);
          free_names_rec(n.else_branch, bound, out);
        }
      },
      p->node);
}

NameSet free_names(const ProcPtr& p) {
  NameSet out;
  std::map<Name, int> bound;
  free_names_rec(p, bound, out);
  return out;
}

// -- substitution ---------------------------------------------------------------

namespace {

Name fresh_name(const Name& base, const NameSet& avoid) {
  Name n = base;
  do {
    n.id += '\'';
  } while (avoid.count(n));
  return n;
}

Name subst_as_name(const Subst& s, const Name& n) {
  auto it = s.map.find(n);
  if (it == s.map.end()) return n;
  if (!it->second->is_name())
    throw std::logic_error("substitution maps name '" + n.id +
                           "' to a compound where only a name is allowed");
  return it->second->name;
}

PatPtr subst_pattern(const Subst& s, const PatPtr& p,
                     const std::map<Name, Name>& ren) {
  switch (p->kind) {
    case PatKind::Binder: {
      auto it = ren.find(p->name);
      return it == ren.end() ? p : binder(it->second);
    }
    case PatKind::NameMatch: {
      auto it = s.map.find(p->name);
      if (it == s.map.end()) return p;
      return term_to_pattern(it->second);
    }
    case PatKind::Compound:
      return compound_pat(subst_pattern(s, p->left, ren),
                          subst_pattern(s, p->right, ren));
  }
  return p;
}

CpcPatPtr subst_cpc(const Subst& s, const CpcPatPtr& p,
                    const std::map<Name, Name>& ren) {
  switch (p->kind) {
    case CpcKind::Binder: {
      auto it = ren.find(p->name);
      return it == ren.end() ? p : cpc_binder(it->second);
    }
    case CpcKind::Variable: {
      auto it = s.map.find(p->name);
      if (it == s.map.end()) return p;
      return term_to_cpc(it->second);
    }
    case CpcKind::Protected: {
      auto it = s.map.find(p->name);
      if (it == s.map.end()) return p;
      if (!it->second->is_name())
        throw std::logic_error("cannot substitute a compound for a protected name");
      return cpc_protected(it->second->name);
    }
    case CpcKind::Compound:
      return cpc_compound(subst_cpc(s, p->left, ren), subst_cpc(s, p->right, ren));
  }
  return p;
}

TermPtr subst_psi_pattern(const Subst& s, const TermPtr& t,
                          const std::map<Name, Name>& ren,
                          const NameSet& binders) {
  if (t->is_name()) {
    if (binders.count(t->name)) {
      auto it = ren.find(t->name);
      return it == ren.end() ? t : name_term(it->second);
    }
    auto it = s.map.find(t->name);
    return it == s.map.end() ? t : it->second;
  }
  return compound(subst_psi_pattern(s, t->left, ren, binders),
                  subst_psi_pattern(s, t->right, ren, binders));
}

// Restrict sigma to names outside `binders`, and compute the renaming needed
// for binders that would capture names from sigma's range.
struct ScopedSubst {
  Subst sigma;
  std::map<Name, Name> ren;
  Subst ren_subst;  // the renaming as a substitution for the body
};

ScopedSubst scope_subst(const Subst& s, const std::vector<Name>& binders,
                        const ProcPtr& body) {
  ScopedSubst out;
  NameSet bset(binders.begin(), binders.end());
  for (const auto& [k, v] : s.map)
    if (!bset.count(k)) out.sigma.map.emplace(k, v);
  if (out.sigma.empty()) return out;

  NameSet range = out.sigma.range_names();
  NameSet avoid = range;
  for (const auto& [k, v] : out.sigma.map) avoid.insert(k);
  for (const auto& n : free_names(body)) avoid.insert(n);
  for (const auto& b : binders) avoid.insert(b);
  for (const auto& b : binders) {
    if (range.count(b)) {
      Name nb = fresh_name(b, avoid);
      avoid.insert(nb);
      out.ren.emplace(b, nb);
      out.ren_subst.map.emplace(b, name_term(nb));
    }
  }
  return out;
}

}  // namespace

ProcPtr apply_subst_process(const Subst& sigma, const ProcPtr& p) {
  if (sigma.empty()) return p;
  return std::visit(
      [&](const auto& n) -> ProcPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PNil>) {
          return p;
        } else if constexpr (std::is_same_v<T, PPar>) {
          return par(apply_subst_process(sigma, n.left),
                     apply_subst_process(sigma, n.right));
        } else if constexpr (std::is_same_v<T, PRepl>) {
          return repl(apply_subst_process(sigma, n.body));
        } else if constexpr (std::is_same_v<T, PRestrict>) {
          auto sc = scope_subst(sigma, {n.name}, n.body);
          if (sc.sigma.empty()) return p;
          ProcPtr body = n.body;
          Name nn = n.name;
          if (!sc.ren.empty()) {
            body = apply_subst_process(sc.ren_subst, body);
            nn = sc.ren.at(n.name);
          }
          return restrict_name(nn, apply_subst_process(sc.sigma, body));
        } else if constexpr (std::is_same_v<T, PAcpcIn>) {
          auto bs = binding_names(n.pattern);
          auto sc = scope_subst(sigma, bs, n.body);
          ProcPtr body = n.body;
          if (!sc.ren.empty()) body = apply_subst_process(sc.ren_subst, body);
          return acpc_in(subst_pattern(sigma, n.pattern, sc.ren),
                         apply_subst_process(sc.sigma, body));
        } else if constexpr (std::is_same_v<T, PAcpcOut>) {
          return acpc_out(sigma.apply(n.term), apply_subst_process(sigma, n.body));
        } else if constexpr (std::is_same_v<T, PCpcCase>) {
          auto bs = cpc_binding_names(n.pattern);
          auto sc = scope_subst(sigma, bs, n.body);
          ProcPtr body = n.body;
          if (!sc.ren.empty()) body = apply_subst_process(sc.ren_subst, body);
          return cpc_case(subst_cpc(sigma, n.pattern, sc.ren),
                          apply_subst_process(sc.sigma, body));
        } else if constexpr (std::is_same_v<T, PPsiIn>) {
          auto sc = scope_subst(sigma, n.binders, n.body);
          ProcPtr body = n.body;
          if (!sc.ren.empty()) body = apply_subst_process(sc.ren_subst, body);
          std::vector<Name> bs2 = n.binders;
          for (auto& b : bs2) {
            auto it = sc.ren.find(b);
            if (it != sc.ren.end()) b = it->second;
          }
          NameSet bset(n.binders.begin(), n.binders.end());
          return psi_in(sigma.apply(n.channel), std::move(bs2),
                        subst_psi_pattern(sigma, n.pattern, sc.ren, bset),
                        apply_subst_process(sc.sigma, body));
        } else if constexpr (std::is_same_v<T, PPsiOut>) {
          return psi_out(sigma.apply(n.channel), sigma.apply(n.payload),
                         apply_subst_process(sigma, n.body));
        } else if constexpr (std::is_same_v<T, PPiIn>) {
          auto sc = scope_subst(sigma, n.binders, n.body);
          ProcPtr body = n.body;
          if (!sc.ren.empty()) body = apply_subst_process(sc.ren_subst, body);
          std::vector<Name> bs2 = n.binders;
          for (auto& b : bs2) {
            auto it = sc.ren.find(b);
            if (it != sc.ren.end()) b = it->second;
          }
          return pi_in(subst_as_name(sigma, n.channel), std::move(bs2),
                       apply_subst_process(sc.sigma, body));
        } else if constexpr (std::is_same_v<T, PPiOut>) {
          std::vector<Name> payload = n.payload;
          for (auto& b : payload) b = subst_as_name(sigma, b);
          return pi_out(subst_as_name(sigma, n.channel), std::move(payload),
                        apply_subst_process(sigma, n.body));
        } else if constexpr (std::is_same_v<T, PIfte>) {
          return ifte(subst_as_name(sigma, n.lhs), subst_as_name(sigma, n.rhs),
                      apply_subst_process(sigma, n.then_branch),
                      apply_subst_process(sigma, n.else_branch));
        }
      },
      p->node);
}

// -- display --------------------------------------------------------------------

namespace {

constexpr const char* kNu = "\xce\xbd";      // ν
constexpr const char* kLambda = "\xce\xbb";  // λ

std::string show_psi_term(const TermPtr& t) {
  if (t->is_name()) return t->name.id;
  auto part = [](const TermPtr& u) {
    return u->is_name() ? u->name.id : "(" + show_psi_term(u) + ")";
  };
  return part(t->left) + "," + part(t->right);
}

std::string join_names(const std::vector<Name>& ns) {
  std::string s;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (i) s += ",";
    s += ns[i].id;
  }
  return s;
}

bool par_child_needs_parens(const ProcPtr& p) {
  return std::holds_alternative<PRestrict>(p->node) ||
         std::holds_alternative<PCpcCase>(p->node) ||
         std::holds_alternative<PIfte>(p->node);
}

}  // namespace

std::string show_process(const ProcPtr& p) {
  auto body_str = [](const ProcPtr& b) {
    if (std::holds_alternative<PPar>(b->node) || par_child_needs_parens(b))
      return "(" + show_process(b) + ")";
    return show_process(b);
  };
  return std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PNil>) {
          return "0";
        } else if constexpr (std::is_same_v<T, PPar>) {
          auto side = [&](const ProcPtr& q) {
            return par_child_needs_parens(q) ? "(" + show_process(q) + ")"
                                             : show_process(q);
          };
          return side(n.left) + " | " + side(n.right);
        } else if constexpr (std::is_same_v<T, PRepl>) {
          ProcPtr b = n.body;
          if (std::holds_alternative<PPar>(b->node) || par_child_needs_parens(b))
            return "!(" + show_process(b) + ")";
          return "!" + show_process(b);
        } else if constexpr (std::is_same_v<T, PRestrict>) {
          return std::string(kNu) + n.name.id + "." + body_str(n.body);
        } else if constexpr (std::is_same_v<T, PAcpcIn>) {
          return "in(" + show_pattern(n.pattern) + ")." + body_str(n.body);
        } else if constexpr (std::is_same_v<T, PAcpcOut>) {
          return "out(" + show_term(n.term) + ")." + body_str(n.body);
        } else if constexpr (std::is_same_v<T, PCpcCase>) {
          return show_cpc_pattern(n.pattern) + " -> " + body_str(n.body);
        } else if constexpr (std::is_same_v<T, PPsiIn>) {
          return show_psi_term(n.channel) + "(" + kLambda + join_names(n.binders) +
                 ")(" + show_psi_term(n.pattern) + ")." + body_str(n.body);
        } else if constexpr (std::is_same_v<T, PPsiOut>) {
          return show_psi_term(n.channel) + "!\xe2\x9f\xa8" +
                 show_psi_term(n.payload) + "\xe2\x9f\xa9." + body_str(n.body);
        } else if constexpr (std::is_same_v<T, PPiIn>) {
          return n.channel.id + "(" + join_names(n.binders) + ")." + body_str(n.body);
        } else if constexpr (std::is_same_v<T, PPiOut>) {
          return n.channel.id + "!\xe2\x9f\xa8" + join_names(n.payload) +
                 "\xe2\x9f\xa9." + body_str(n.body);
        } else if constexpr (std::is_same_v<T, PIfte>) {
          return "if " + n.lhs.id + "=" + n.rhs.id + " then " +
                 body_str(n.then_branch) + " else " + body_str(n.else_branch);
        }
      },
      p->node);
}

std::string show_cpc_pattern(const CpcPatPtr& p) {
  switch (p->kind) {
    case CpcKind::Binder: return std::string(kLambda) + p->name.id;
    case CpcKind::Variable: return p->name.id;
    case CpcKind::Protected: return "[" + p->name.id + "]";
    case CpcKind::Compound: {
      auto part = [](const CpcPatPtr& q) {
        return q->kind == CpcKind::Compound ? "(" + show_cpc_pattern(q) + ")"
                                            : show_cpc_pattern(q);
      };
      return part(p->left) + "\xe2\x80\xa2" + part(p->right);
    }
  }
  return {};
}

}  // namespace tmpc
