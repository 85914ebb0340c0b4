#include "tmpc/congruence.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>

// Canonicalization pipeline:
//   1. freshen every bound name (globally unique internal names), remembering
//      which ones are input binders (those may later be substituted, so an
//      ifte over them cannot be resolved);
//   2. per scope: float restrictions outward, flatten |, drop 0, resolve
//      ifte on concrete names, drop unused restrictions;
//   3. order the scope's restricted names by partition refinement over their
//      occurrence contexts (printed with class tokens, so the ordering is
//      stable under renaming of bound names);
//   4. rename binders to position-derived "$k" names, absorb components that
//      a replicated sibling already provides, sort components by their
//      canonical print, and rebuild.
// Each stage applies only congruence laws, so equal keys imply congruent
// inputs; completeness holds on the tree-shaped scopes the encodings produce.

namespace tmpc {

namespace {

struct NameHash {
  std::size_t operator()(const Name& n) const {
    return std::hash<std::string>{}(n.id);
  }
};

using Env = std::unordered_map<Name, Name, NameHash>;
using Ov = std::unordered_map<Name, std::string, NameHash>;

Name map_name(const Name& n, const Env& env) {
  auto it = env.find(n);
  return it == env.end() ? n : it->second;
}

TermPtr map_term(const TermPtr& t, const Env& env) {
  if (t->is_name()) {
    auto it = env.find(t->name);
    return it == env.end() ? t : name_term(it->second);
  }
  TermPtr l = map_term(t->left, env);
  TermPtr r = map_term(t->right, env);
  if (l == t->left && r == t->right) return t;  // untouched subterms are shared
  return compound(std::move(l), std::move(r));
}

// Scoped mutation of a shared environment; undone on destruction. Cheaper
// than copying the environment at every binder when scopes hold thousands of
// restricted names.
class EnvEdit {
 public:
  explicit EnvEdit(Env& env) : env_(env) {}
  EnvEdit(const EnvEdit&) = delete;
  EnvEdit& operator=(const EnvEdit&) = delete;
  ~EnvEdit() {
    for (auto it = saved_.rbegin(); it != saved_.rend(); ++it) {
      if (it->second) env_[it->first] = *it->second;
      else env_.erase(it->first);
    }
  }

  void set(const Name& key, Name value) {
    auto it = env_.find(key);
    saved_.emplace_back(key, it == env_.end() ? std::optional<Name>()
                                              : std::optional<Name>(it->second));
    env_[key] = std::move(value);
  }

 private:
  Env& env_;
  std::vector<std::pair<Name, std::optional<Name>>> saved_;
};

// -- pass 1: freshening --------------------------------------------------------

struct FreshenCtx {
  std::size_t counter = 0;
  NameSet input_binders;

  Name next() { return Name("\x02" + std::to_string(counter++)); }
};

PatPtr freshen_pat(const PatPtr& p, const Env& env, std::map<Name, Name>& brs,
                   FreshenCtx& fc) {
  switch (p->kind) {
    case PatKind::Binder: {
      Name nn = fc.next();
      fc.input_binders.insert(nn);
      brs.insert_or_assign(p->name, nn);
      return binder(nn);
    }
    case PatKind::NameMatch:
      return name_match(map_name(p->name, env));
    case PatKind::Compound:
      return compound_pat(freshen_pat(p->left, env, brs, fc),
                          freshen_pat(p->right, env, brs, fc));
  }
  return p;
}

CpcPatPtr freshen_cpc(const CpcPatPtr& p, const Env& env,
                      std::map<Name, Name>& brs, FreshenCtx& fc) {
  switch (p->kind) {
    case CpcKind::Binder: {
      Name nn = fc.next();
      fc.input_binders.insert(nn);
      brs.insert_or_assign(p->name, nn);
      return cpc_binder(nn);
    }
    case CpcKind::Variable:
      return cpc_variable(map_name(p->name, env));
    case CpcKind::Protected:
      return cpc_protected(map_name(p->name, env));
    case CpcKind::Compound:
      return cpc_compound(freshen_cpc(p->left, env, brs, fc),
                          freshen_cpc(p->right, env, brs, fc));
  }
  return p;
}

TermPtr freshen_psi_pat(const TermPtr& t, const Env& env,
                        const std::map<Name, Name>& brs) {
  if (t->is_name()) {
    auto it = brs.find(t->name);
    if (it != brs.end()) return name_term(it->second);
    return name_term(map_name(t->name, env));
  }
  return compound(freshen_psi_pat(t->left, env, brs),
                  freshen_psi_pat(t->right, env, brs));
}

ProcPtr freshen(const ProcPtr& p, Env& env, FreshenCtx& fc) {
  return std::visit(
      [&](const auto& n) -> ProcPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PNil>) {
          return p;
        } else if constexpr (std::is_same_v<T, PPar>) {
          ProcPtr l = freshen(n.left, env, fc);
          return par(std::move(l), freshen(n.right, env, fc));
        } else if constexpr (std::is_same_v<T, PRepl>) {
          return repl(freshen(n.body, env, fc));
        } else if constexpr (std::is_same_v<T, PRestrict>) {
          Name nn = fc.next();
          EnvEdit edit(env);
          edit.set(n.name, nn);
          return restrict_name(nn, freshen(n.body, env, fc));
        } else if constexpr (std::is_same_v<T, PAcpcIn>) {
          std::map<Name, Name> brs;
          PatPtr q = freshen_pat(n.pattern, env, brs, fc);
          EnvEdit edit(env);
          for (const auto& [k, v] : brs) edit.set(k, v);
          return acpc_in(std::move(q), freshen(n.body, env, fc));
        } else if constexpr (std::is_same_v<T, PAcpcOut>) {
          return acpc_out(map_term(n.term, env), freshen(n.body, env, fc));
        } else if constexpr (std::is_same_v<T, PCpcCase>) {
          std::map<Name, Name> brs;
          CpcPatPtr q = freshen_cpc(n.pattern, env, brs, fc);
          EnvEdit edit(env);
          for (const auto& [k, v] : brs) edit.set(k, v);
          return cpc_case(std::move(q), freshen(n.body, env, fc));
        } else if constexpr (std::is_same_v<T, PPsiIn>) {
          TermPtr ch = map_term(n.channel, env);
          std::map<Name, Name> brs;
          std::vector<Name> bs;
          for (const auto& b : n.binders) {
            Name nn = fc.next();
            fc.input_binders.insert(nn);
            brs.insert_or_assign(b, nn);
            bs.push_back(nn);
          }
          TermPtr pat = freshen_psi_pat(n.pattern, env, brs);
          EnvEdit edit(env);
          for (const auto& [k, v] : brs) edit.set(k, v);
          return psi_in(std::move(ch), std::move(bs), std::move(pat),
                        freshen(n.body, env, fc));
        } else if constexpr (std::is_same_v<T, PPsiOut>) {
          return psi_out(map_term(n.channel, env), map_term(n.payload, env),
                         freshen(n.body, env, fc));
        } else if constexpr (std::is_same_v<T, PPiIn>) {
          Name ch = map_name(n.channel, env);
          EnvEdit edit(env);
          std::vector<Name> bs;
          for (const auto& b : n.binders) {
            Name nn = fc.next();
            fc.input_binders.insert(nn);
            edit.set(b, nn);
            bs.push_back(nn);
          }
          return pi_in(std::move(ch), std::move(bs), freshen(n.body, env, fc));
        } else if constexpr (std::is_same_v<T, PPiOut>) {
          std::vector<Name> payload = n.payload;
          for (auto& m : payload) m = map_name(m, env);
          return pi_out(map_name(n.channel, env), std::move(payload),
                        freshen(n.body, env, fc));
        } else if constexpr (std::is_same_v<T, PIfte>) {
          ProcPtr tb = freshen(n.then_branch, env, fc);
          return ifte(map_name(n.lhs, env), map_name(n.rhs, env), std::move(tb),
                      freshen(n.else_branch, env, fc));
        }
      },
      p->node);
}

// -- canonical printer -----------------------------------------------------------

// Injective s-expression serialization. `ov` substitutes display tokens for
// names still awaiting a canonical position (restriction refinement); `rec`
// records every such occurrence in print order.
void kname(const Name& n, const Ov* ov, std::vector<Name>* rec, std::string& out) {
  if (ov) {
    auto it = ov->find(n);
    if (it != ov->end()) {
      out += it->second;
      if (rec) rec->push_back(n);
      return;
    }
  }
  out += n.id;
}

void kterm(const TermPtr& t, const Ov* ov, std::vector<Name>* rec, std::string& out) {
  if (t->is_name()) {
    kname(t->name, ov, rec, out);
    return;
  }
  out += "(c ";
  kterm(t->left, ov, rec, out);
  out += ' ';
  kterm(t->right, ov, rec, out);
  out += ')';
}

void kpat(const PatPtr& p, const Ov* ov, std::vector<Name>* rec, std::string& out) {
  switch (p->kind) {
    case PatKind::Binder:
      out += "(b ";
      kname(p->name, ov, rec, out);
      out += ')';
      return;
    case PatKind::NameMatch:
      out += "(m ";
      kname(p->name, ov, rec, out);
      out += ')';
      return;
    case PatKind::Compound:
      out += "(p ";
      kpat(p->left, ov, rec, out);
      out += ' ';
      kpat(p->right, ov, rec, out);
      out += ')';
      return;
  }
}

void kcpc(const CpcPatPtr& p, const Ov* ov, std::vector<Name>* rec,
          std::string& out) {
  switch (p->kind) {
    case CpcKind::Binder:
      out += "(b ";
      kname(p->name, ov, rec, out);
      out += ')';
      return;
    case CpcKind::Variable:
      out += "(v ";
      kname(p->name, ov, rec, out);
      out += ')';
      return;
    case CpcKind::Protected:
      out += "(r ";
      kname(p->name, ov, rec, out);
      out += ')';
      return;
    case CpcKind::Compound:
      out += "(p ";
      kcpc(p->left, ov, rec, out);
      out += ' ';
      kcpc(p->right, ov, rec, out);
      out += ')';
      return;
  }
}

void kprint(const ProcPtr& p, const Ov* ov, std::vector<Name>* rec,
            std::string& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PNil>) {
          out += '0';
        } else if constexpr (std::is_same_v<T, PPar>) {
          out += "(| ";
          kprint(n.left, ov, rec, out);
          out += ' ';
          kprint(n.right, ov, rec, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, PRepl>) {
          out += "(! ";
          kprint(n.body, ov, rec, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, PRestrict>) {
          out += "(nu ";
          kname(n.name, ov, rec, out);
          out += ' ';
          kprint(n.body, ov, rec, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, PAcpcIn>) {
          out += "(in ";
          kpat(n.pattern, ov, rec, out);
          out += ' ';
          kprint(n.body, ov, rec, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, PAcpcOut>) {
          out += "(out ";
          kterm(n.term, ov, rec, out);
          out += ' ';
          kprint(n.body, ov, rec, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, PCpcCase>) {
          out += "(case ";
          kcpc(n.pattern, ov, rec, out);
          out += ' ';
          kprint(n.body, ov, rec, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, PPsiIn>) {
          out += "(pin ";
          kterm(n.channel, ov, rec, out);
          out += " (";
          for (std::size_t i = 0; i < n.binders.size(); ++i) {
            if (i) out += ' ';
            kname(n.binders[i], ov, rec, out);
          }
          out += ") ";
          kterm(n.pattern, ov, rec, out);
          out += ' ';
          kprint(n.body, ov, rec, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, PPsiOut>) {
          out += "(pout ";
          kterm(n.channel, ov, rec, out);
          out += ' ';
          kterm(n.payload, ov, rec, out);
          out += ' ';
          kprint(n.body, ov, rec, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, PPiIn>) {
          out += "(iin ";
          kname(n.channel, ov, rec, out);
          out += " (";
          for (std::size_t i = 0; i < n.binders.size(); ++i) {
            if (i) out += ' ';
            kname(n.binders[i], ov, rec, out);
          }
          out += ") ";
          kprint(n.body, ov, rec, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, PPiOut>) {
          out += "(iout ";
          kname(n.channel, ov, rec, out);
          out += " (";
          for (std::size_t i = 0; i < n.payload.size(); ++i) {
            if (i) out += ' ';
            kname(n.payload[i], ov, rec, out);
          }
          out += ") ";
          kprint(n.body, ov, rec, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, PIfte>) {
          out += "(if ";
          kname(n.lhs, ov, rec, out);
          out += ' ';
          kname(n.rhs, ov, rec, out);
          out += ' ';
          kprint(n.then_branch, ov, rec, out);
          out += ' ';
          kprint(n.else_branch, ov, rec, out);
          out += ')';
        }
      },
      p->node);
}

// -- pass 2: scope normalization ---------------------------------------------------

struct Ctx {
  NameSet input_binders;
  std::string dollar;  // canonical binder prefix, kept clear of free names
};

ProcPtr canon_scope(const ProcPtr& p, Env& env, std::size_t pb, const Ctx& cx,
                    const Ov* ov);

// Float restrictions to the scope head (sound: freshened names are globally
// unique), flatten parallel composition, drop inert 0, and resolve ifte when
// both names are concrete (never substituted again).
void flatten(const ProcPtr& p, std::vector<Name>& nus, std::vector<ProcPtr>& comps,
             const Ctx& cx) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PNil>) {
        } else if constexpr (std::is_same_v<T, PPar>) {
          flatten(n.left, nus, comps, cx);
          flatten(n.right, nus, comps, cx);
        } else if constexpr (std::is_same_v<T, PRestrict>) {
          nus.push_back(n.name);
          flatten(n.body, nus, comps, cx);
        } else if constexpr (std::is_same_v<T, PIfte>) {
          if (n.lhs == n.rhs) {
            flatten(n.then_branch, nus, comps, cx);
          } else if (!cx.input_binders.count(n.lhs) &&
                     !cx.input_binders.count(n.rhs)) {
            flatten(n.else_branch, nus, comps, cx);
          } else {
            comps.push_back(p);
          }
        } else {
          comps.push_back(p);
        }
      },
      p->node);
}

// Raw name occurrences, binders included. After freshening, a component's
// binders can never coincide with the enclosing scope's restricted names, so
// filtering this list against them is equivalent to (and much cheaper than)
// computing the component's free names.
void collect_term_names(const TermPtr& t, std::vector<Name>& out) {
  if (t->is_name()) {
    out.push_back(t->name);
    return;
  }
  collect_term_names(t->left, out);
  collect_term_names(t->right, out);
}

void collect_pat_names(const PatPtr& p, std::vector<Name>& out) {
  if (p->kind == PatKind::Compound) {
    collect_pat_names(p->left, out);
    collect_pat_names(p->right, out);
  } else {
    out.push_back(p->name);
  }
}

void collect_cpc_names(const CpcPatPtr& p, std::vector<Name>& out) {
  if (p->kind == CpcKind::Compound) {
    collect_cpc_names(p->left, out);
    collect_cpc_names(p->right, out);
  } else {
    out.push_back(p->name);
  }
}

void collect_names(const ProcPtr& p, std::vector<Name>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PNil>) {
        } else if constexpr (std::is_same_v<T, PPar>) {
          collect_names(n.left, out);
          collect_names(n.right, out);
        } else if constexpr (std::is_same_v<T, PRepl>) {
          collect_names(n.body, out);
        } else if constexpr (std::is_same_v<T, PRestrict>) {
          out.push_back(n.name);
          collect_names(n.body, out);
        } else if constexpr (std::is_same_v<T, PAcpcIn>) {
          collect_pat_names(n.pattern, out);
          collect_names(n.body, out);
        } else if constexpr (std::is_same_v<T, PAcpcOut>) {
          collect_term_names(n.term, out);
          collect_names(n.body, out);
        } else if constexpr (std::is_same_v<T, PCpcCase>) {
          collect_cpc_names(n.pattern, out);
          collect_names(n.body, out);
        } else if constexpr (std::is_same_v<T, PPsiIn>) {
          collect_term_names(n.channel, out);
          for (const auto& b : n.binders) out.push_back(b);
          collect_term_names(n.pattern, out);
          collect_names(n.body, out);
        } else if constexpr (std::is_same_v<T, PPsiOut>) {
          collect_term_names(n.channel, out);
          collect_term_names(n.payload, out);
          collect_names(n.body, out);
        } else if constexpr (std::is_same_v<T, PPiIn>) {
          out.push_back(n.channel);
          for (const auto& b : n.binders) out.push_back(b);
          collect_names(n.body, out);
        } else if constexpr (std::is_same_v<T, PPiOut>) {
          out.push_back(n.channel);
          for (const auto& m : n.payload) out.push_back(m);
          collect_names(n.body, out);
        } else if constexpr (std::is_same_v<T, PIfte>) {
          out.push_back(n.lhs);
          out.push_back(n.rhs);
          collect_names(n.then_branch, out);
          collect_names(n.else_branch, out);
        }
      },
      p->node);
}

PatPtr canon_pat(const PatPtr& p, Env& env, EnvEdit& edit, std::size_t& next,
                 const std::string& dollar) {
  switch (p->kind) {
    case PatKind::Binder: {
      Name nn(dollar + std::to_string(next++));
      edit.set(p->name, nn);
      if (nn == p->name) return p;
      return binder(nn);
    }
    case PatKind::NameMatch: {
      Name m = map_name(p->name, env);
      if (m == p->name) return p;
      return name_match(std::move(m));
    }
    case PatKind::Compound: {
      PatPtr l = canon_pat(p->left, env, edit, next, dollar);
      PatPtr r = canon_pat(p->right, env, edit, next, dollar);
      if (l == p->left && r == p->right) return p;
      return compound_pat(std::move(l), std::move(r));
    }
  }
  return p;
}

CpcPatPtr canon_cpc(const CpcPatPtr& p, Env& env, EnvEdit& edit, std::size_t& next,
                    const std::string& dollar) {
  switch (p->kind) {
    case CpcKind::Binder: {
      Name nn(dollar + std::to_string(next++));
      edit.set(p->name, nn);
      if (nn == p->name) return p;
      return cpc_binder(nn);
    }
    case CpcKind::Variable: {
      Name m = map_name(p->name, env);
      if (m == p->name) return p;
      return cpc_variable(std::move(m));
    }
    case CpcKind::Protected: {
      Name m = map_name(p->name, env);
      if (m == p->name) return p;
      return cpc_protected(std::move(m));
    }
    case CpcKind::Compound: {
      CpcPatPtr l = canon_cpc(p->left, env, edit, next, dollar);
      CpcPatPtr r = canon_cpc(p->right, env, edit, next, dollar);
      if (l == p->left && r == p->right) return p;
      return cpc_compound(std::move(l), std::move(r));
    }
  }
  return p;
}

ProcPtr canon_component(const ProcPtr& p, Env& env, std::size_t pb, const Ctx& cx,
                        const Ov* ov) {
  return std::visit(
      [&](const auto& n) -> ProcPtr {
        using T = std::decay_t<decltype(n)>;
        // Every case hands back the original node when nothing in it moved;
        // already-canonical components (the bulk of a long tape between two
        // reductions) then pass through without reallocation.
        if constexpr (std::is_same_v<T, PRepl>) {
          ProcPtr body = canon_scope(n.body, env, pb, cx, ov);
          if (body == n.body) return p;
          return repl(std::move(body));
        } else if constexpr (std::is_same_v<T, PAcpcIn>) {
          EnvEdit edit(env);
          std::size_t next = pb;
          PatPtr q = canon_pat(n.pattern, env, edit, next, cx.dollar);
          ProcPtr body = canon_scope(n.body, env, next, cx, ov);
          if (q == n.pattern && body == n.body) return p;
          return acpc_in(std::move(q), std::move(body));
        } else if constexpr (std::is_same_v<T, PAcpcOut>) {
          TermPtr t = map_term(n.term, env);
          ProcPtr body = canon_scope(n.body, env, pb, cx, ov);
          if (t == n.term && body == n.body) return p;
          return acpc_out(std::move(t), std::move(body));
        } else if constexpr (std::is_same_v<T, PCpcCase>) {
          EnvEdit edit(env);
          std::size_t next = pb;
          CpcPatPtr q = canon_cpc(n.pattern, env, edit, next, cx.dollar);
          ProcPtr body = canon_scope(n.body, env, next, cx, ov);
          if (q == n.pattern && body == n.body) return p;
          return cpc_case(std::move(q), std::move(body));
        } else if constexpr (std::is_same_v<T, PPsiIn>) {
          TermPtr ch = map_term(n.channel, env);
          EnvEdit edit(env);
          std::size_t next = pb;
          std::vector<Name> bs;
          for (const auto& b : n.binders) {
            Name nn(cx.dollar + std::to_string(next++));
            edit.set(b, nn);
            bs.push_back(nn);
          }
          TermPtr pat = map_term(n.pattern, env);
          ProcPtr body = canon_scope(n.body, env, next, cx, ov);
          if (ch == n.channel && bs == n.binders && pat == n.pattern &&
              body == n.body)
            return p;
          return psi_in(std::move(ch), std::move(bs), std::move(pat),
                        std::move(body));
        } else if constexpr (std::is_same_v<T, PPsiOut>) {
          TermPtr ch = map_term(n.channel, env);
          TermPtr pl = map_term(n.payload, env);
          ProcPtr body = canon_scope(n.body, env, pb, cx, ov);
          if (ch == n.channel && pl == n.payload && body == n.body) return p;
          return psi_out(std::move(ch), std::move(pl), std::move(body));
        } else if constexpr (std::is_same_v<T, PPiIn>) {
          Name ch = map_name(n.channel, env);
          EnvEdit edit(env);
          std::size_t next = pb;
          std::vector<Name> bs;
          for (const auto& b : n.binders) {
            Name nn(cx.dollar + std::to_string(next++));
            edit.set(b, nn);
            bs.push_back(nn);
          }
          ProcPtr body = canon_scope(n.body, env, next, cx, ov);
          if (ch == n.channel && bs == n.binders && body == n.body) return p;
          return pi_in(std::move(ch), std::move(bs), std::move(body));
        } else if constexpr (std::is_same_v<T, PPiOut>) {
          Name ch = map_name(n.channel, env);
          std::vector<Name> payload = n.payload;
          for (auto& m : payload) m = map_name(m, env);
          ProcPtr body = canon_scope(n.body, env, pb, cx, ov);
          if (ch == n.channel && payload == n.payload && body == n.body) return p;
          return pi_out(std::move(ch), std::move(payload), std::move(body));
        } else if constexpr (std::is_same_v<T, PIfte>) {
          Name l = map_name(n.lhs, env);
          Name r = map_name(n.rhs, env);
          ProcPtr tb = canon_scope(n.then_branch, env, pb, cx, ov);
          ProcPtr eb = canon_scope(n.else_branch, env, pb, cx, ov);
          if (l == n.lhs && r == n.rhs && tb == n.then_branch &&
              eb == n.else_branch)
            return p;
          return ifte(std::move(l), std::move(r), std::move(tb), std::move(eb));
        } else {
          throw std::logic_error("canon_component: non-prefix component");
        }
      },
      p->node);
}

std::uint64_t hash_str(const std::string& s) {
  return std::hash<std::string>{}(s);
}

std::uint64_t hash_mix(std::uint64_t a, std::uint64_t b) {
  return a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
}

// -- pass 3: ordering restricted names ----------------------------------------------
//
// Partition refinement over occurrence contexts. Every restricted name starts
// in one class; each round renders the components a name occurs in (with
// class tokens standing in for the undecided names) and splits classes whose
// members now have distinguishable contexts. The largest fragment of a split
// keeps its class token, so only the smaller fragments invalidate cached
// renders — on chain-shaped scopes (the encoded tapes) the whole refinement
// is near-linear. Names tied at the fixed point have identical contexts, so
// their relative order cannot change the final print.
std::vector<Name> refine_order(const std::vector<Name>& nus,
                               const std::vector<ProcPtr>& comps,
                               const std::vector<std::vector<Name>>& fns,
                               Env& env, std::size_t pb, const Ctx& cx,
                               const Ov* outer_ov) {
  if (nus.size() <= 1) return nus;
  const std::size_t pb2 = pb + nus.size();

  std::unordered_set<Name, NameHash> nuset(nus.begin(), nus.end());
  std::unordered_map<Name, std::vector<std::size_t>, NameHash> nu_comps;
  std::vector<std::vector<Name>> comp_nus(comps.size());
  for (std::size_t i = 0; i < comps.size(); ++i) {
    for (const auto& m : fns[i]) {
      if (nuset.count(m)) {
        nu_comps[m].push_back(i);
        comp_nus[i].push_back(m);
      }
    }
  }

  Ov ov = outer_ov ? *outer_ov : Ov{};
  auto token = [&](std::uint64_t c) {
    return '\x01' + std::to_string(pb2) + ':' + std::to_string(c);
  };

  std::unordered_map<Name, std::uint64_t, NameHash> cls;
  std::unordered_map<Name, std::uint64_t, NameHash> sigh;
  std::unordered_map<std::uint64_t, std::unordered_set<Name, NameHash>> members;
  std::unordered_map<std::uint64_t, std::uint64_t> clssig;  // class -> shared sig
  for (const auto& nu : nus) {
    cls[nu] = 1;
    ov[nu] = token(1);
    members[1].insert(nu);
  }

  struct CompRender {
    std::uint64_t hash = 0;
    std::vector<Name> occ;
  };
  std::vector<CompRender> cache(comps.size());

  std::unordered_set<std::size_t> dirty;
  for (std::size_t i = 0; i < comps.size(); ++i)
    if (!comp_nus[i].empty()) dirty.insert(i);

  std::string render;
  std::vector<std::uint64_t> parts;
  std::unordered_set<Name, NameHash> affected;
  std::unordered_set<Name, NameHash> changed;
  while (!dirty.empty()) {
    affected.clear();
    for (std::size_t i : dirty) {
      ProcPtr shape = canon_component(comps[i], env, pb2, cx, &ov);
      CompRender r;
      render.clear();
      kprint(shape, &ov, &r.occ, render);
      r.hash = hash_str(render);
      cache[i] = std::move(r);
      for (const auto& nu : comp_nus[i]) affected.insert(nu);
    }
    dirty.clear();

    // Members of one class all carry the class's reference signature, so a
    // split only needs to look at the members whose signature just moved away
    // from it -- never at the (possibly huge) unchanged remainder.
    std::map<std::uint64_t, std::vector<Name>> moved;
    for (const auto& nu : affected) {
      // Sorted multiset of (render, occurrence slot) hashes over the
      // components the name appears in.
      parts.clear();
      for (std::size_t i : nu_comps[nu]) {
        for (std::size_t j = 0; j < cache[i].occ.size(); ++j)
          if (cache[i].occ[j] == nu) parts.push_back(hash_mix(cache[i].hash, j));
      }
      std::sort(parts.begin(), parts.end());
      std::uint64_t h = 0x2545f4914f6cdd1dULL;
      for (std::uint64_t x : parts) h = hash_mix(h, x);
      auto it = sigh.find(nu);
      if (it != sigh.end() && it->second == h) continue;
      sigh[nu] = h;
      std::uint64_t c = cls.at(nu);
      auto rs = clssig.find(c);
      if (rs != clssig.end() && rs->second == h) continue;
      moved[c].push_back(nu);
    }

    changed.clear();
    for (const auto& [c, vs] : moved) {
      std::map<std::uint64_t, std::vector<Name>> sub;
      for (const auto& nu : vs) sub[sigh.at(nu)].push_back(nu);
      const std::size_t unchanged = members.at(c).size() - vs.size();

      // Someone keeps the class token: the unchanged remainder if there is
      // one, otherwise the largest subgroup (ties to the smallest signature).
      std::optional<std::uint64_t> keep;
      if (unchanged == 0) {
        keep = sub.begin()->first;
        for (const auto& [h, v] : sub)
          if (v.size() > sub.at(*keep).size()) keep = h;
        clssig[c] = *keep;
      }
      for (const auto& [h, v] : sub) {
        if (keep && h == *keep) continue;
        std::uint64_t nc = hash_mix(c, h);
        // A recycled token whose class has since drifted cannot be joined.
        while (members.count(nc) && clssig.at(nc) != h)
          nc = hash_mix(nc, 0x517cc1b727220a95ULL);
        clssig[nc] = h;
        for (const auto& nu : v) {
          members.at(c).erase(nu);
          cls[nu] = nc;
          ov[nu] = token(nc);
          members[nc].insert(nu);
          changed.insert(nu);
        }
      }
    }

    for (const auto& nu : changed)
      for (std::size_t i : nu_comps[nu]) dirty.insert(i);
  }

  std::vector<std::pair<std::uint64_t, std::size_t>> keyed(nus.size());
  for (std::size_t i = 0; i < nus.size(); ++i) keyed[i] = {cls.at(nus[i]), i};
  std::sort(keyed.begin(), keyed.end());
  std::vector<Name> ordered(nus.size());
  for (std::size_t i = 0; i < nus.size(); ++i) ordered[i] = nus[keyed[i].second];
  return ordered;
}

// -- pass 4: scope rebuild -------------------------------------------------------

ProcPtr canon_scope(const ProcPtr& p, Env& env, std::size_t pb, const Ctx& cx,
                    const Ov* ov) {
  if (std::holds_alternative<PNil>(p->node)) return p;  // trivial bodies abound

  std::vector<Name> nus;
  std::vector<ProcPtr> comps;
  flatten(p, nus, comps, cx);

  for (;;) {
    // Which of this scope's restricted names each component mentions.
    std::vector<std::vector<Name>> fns(comps.size());
    {
      std::unordered_set<Name, NameHash> nuset(nus.begin(), nus.end());
      std::vector<Name> buf;
      for (std::size_t i = 0; i < comps.size(); ++i) {
        buf.clear();
        collect_names(comps[i], buf);
        for (const auto& m : buf)
          if (nuset.count(m)) fns[i].push_back(m);
        std::sort(fns[i].begin(), fns[i].end());
        fns[i].erase(std::unique(fns[i].begin(), fns[i].end()), fns[i].end());
      }
    }

    // Restrictions over names nothing mentions vanish.
    {
      std::unordered_set<Name, NameHash> used;
      for (const auto& f : fns)
        for (const auto& m : f) used.insert(m);
      if (used.size() != nus.size()) {
        std::vector<Name> kept;
        for (const auto& nu : nus)
          if (used.count(nu)) kept.push_back(nu);
        nus = std::move(kept);
      }
    }

    std::vector<Name> ordered = refine_order(nus, comps, fns, env, pb, cx, ov);
    const std::size_t pb2 = pb + nus.size();

    struct FinalComp {
      std::string str;
      ProcPtr tree;
      std::size_t raw;
    };
    std::vector<FinalComp> fcs;
    fcs.reserve(comps.size());
    {
      EnvEdit edit(env);
      for (std::size_t i = 0; i < ordered.size(); ++i)
        edit.set(ordered[i], Name(cx.dollar + std::to_string(pb + i)));
      for (std::size_t i = 0; i < comps.size(); ++i) {
        FinalComp fc;
        fc.tree = canon_component(comps[i], env, pb2, cx, ov);
        kprint(fc.tree, ov, nullptr, fc.str);
        fc.raw = i;
        fcs.push_back(std::move(fc));
      }
    }
    std::sort(fcs.begin(), fcs.end(), [](const FinalComp& a, const FinalComp& b) {
      return a.str != b.str ? a.str < b.str : a.raw < b.raw;
    });

    // Absorb copies a replicated sibling can regenerate: !P | P == !P. For a
    // parallel body the whole bundle of copies is removed at once; replicated
    // bodies with their own restrictions are left alone.
    std::vector<bool> removed(fcs.size(), false);
    std::map<std::string, std::vector<std::size_t>> avail;
    for (std::size_t k = 0; k < fcs.size(); ++k) avail[fcs[k].str].push_back(k);
    bool any_removed = false;
    for (std::size_t k = 0; k < fcs.size(); ++k) {
      if (removed[k] || !std::holds_alternative<PRepl>(fcs[k].tree->node)) continue;
      const ProcPtr& body = std::get<PRepl>(fcs[k].tree->node).body;
      ScopeView sv = top_scope(body);
      if (!sv.nus.empty() || sv.comps.empty()) continue;
      std::map<std::string, std::size_t> want;
      for (const auto& c : sv.comps) {
        std::string s;
        kprint(c, ov, nullptr, s);
        ++want[s];
      }
      for (;;) {
        std::vector<std::size_t> take;
        bool ok = true;
        for (const auto& [s, cnt] : want) {
          std::size_t got = 0;
          auto it = avail.find(s);
          if (it != avail.end()) {
            for (std::size_t pos : it->second) {
              if (removed[pos] || pos == k) continue;
              if (std::find(take.begin(), take.end(), pos) != take.end()) continue;
              take.push_back(pos);
              if (++got == cnt) break;
            }
          }
          if (got < cnt) {
            ok = false;
            break;
          }
        }
        if (!ok) break;
        for (std::size_t pos : take) removed[pos] = true;
        any_removed = true;
      }
    }

    // Canonicalizing a component can erase name occurrences (a resolved ifte
    // drops a branch, an inner scope loses a dead restriction), so the raw
    // occurrence scan above may have kept a restriction nothing uses anymore.
    // Check against the canonical components and redo the scope if so.
    if (!ordered.empty()) {
      std::unordered_set<Name, NameHash> used;
      std::vector<Name> buf;
      for (const auto& fc : fcs) {
        buf.clear();
        collect_names(fc.tree, buf);
        used.insert(buf.begin(), buf.end());
      }
      std::vector<Name> kept;
      for (std::size_t i = 0; i < ordered.size(); ++i)
        if (used.count(Name(cx.dollar + std::to_string(pb + i))))
          kept.push_back(ordered[i]);
      if (kept.size() != ordered.size()) {
        nus = std::move(kept);
        continue;
      }
    }

    if (!any_removed) {
      std::vector<ProcPtr> trees;
      trees.reserve(fcs.size());
      for (const auto& fc : fcs) trees.push_back(fc.tree);
      ProcPtr out = par_all(trees);
      for (std::size_t i = ordered.size(); i-- > 0;)
        out = restrict_name(Name(cx.dollar + std::to_string(pb + i)), out);
      return out;
    }

    // Removing components can strand restrictions and enable more absorption;
    // redo the scope with the survivors.
    std::vector<ProcPtr> rest;
    for (std::size_t k = 0; k < fcs.size(); ++k)
      if (!removed[k]) rest.push_back(comps[fcs[k].raw]);
    comps = std::move(rest);
  }
}

}  // namespace

CanonicalForm canonicalize(const ProcPtr& p) {
  CanonicalForm cf;
  cf.calculus = calculus_of(p);  // also rejects mixed-calculus trees

  Ctx cx;
  cx.dollar = "$";
  {
    NameSet fn = free_names(p);
    bool clash = true;
    while (clash) {
      clash = false;
      for (const auto& n : fn) {
        if (n.id.starts_with(cx.dollar)) {
          cx.dollar += '$';
          clash = true;
          break;
        }
      }
    }
  }

  FreshenCtx fc;
  Env fenv;
  ProcPtr fresh = freshen(p, fenv, fc);
  cx.input_binders = std::move(fc.input_binders);

  Env cenv;
  cf.proc = canon_scope(fresh, cenv, 0, cx, nullptr);

  std::string printed;
  kprint(cf.proc, nullptr, nullptr, printed);
  std::optional<Calculus> tag = calculus_of(cf.proc);
  cf.key = (tag ? calculus_name(*tag) : std::string()) + "|" + printed;
  return cf;
}

std::string structural_key(const ProcPtr& p) { return canonicalize(p).key; }

bool equiv(const ProcPtr& p, const ProcPtr& q) {
  CanonicalForm a = canonicalize(p);
  CanonicalForm b = canonicalize(q);
  if (a.calculus && b.calculus && *a.calculus != *b.calculus)
    throw std::invalid_argument("equiv: cannot compare a " +
                                calculus_name(*a.calculus) + " process with a " +
                                calculus_name(*b.calculus) + " process");
  return a.key == b.key;
}

bool alpha_equal(const ProcPtr& p, const ProcPtr& q) {
  auto key = [](const ProcPtr& x) {
    FreshenCtx fc;
    Env env;
    ProcPtr f = freshen(x, env, fc);
    std::string s;
    kprint(f, nullptr, nullptr, s);
    return s;
  };
  return key(p) == key(q);
}

ScopeView top_scope(const ProcPtr& p) {
  ScopeView sv;
  ProcPtr cur = p;
  while (const auto* r = std::get_if<PRestrict>(&cur->node)) {
    sv.nus.push_back(r->name);
    cur = r->body;
  }
  std::function<void(const ProcPtr&)> go = [&](const ProcPtr& q) {
    if (std::holds_alternative<PNil>(q->node)) return;
    if (const auto* pp = std::get_if<PPar>(&q->node)) {
      go(pp->left);
      go(pp->right);
      return;
    }
    sv.comps.push_back(q);
  };
  go(cur);
  return sv;
}

ProcPtr rebuild_scope(const ScopeView& sv) {
  ProcPtr body = par_all(sv.comps);
  for (auto it = sv.nus.rbegin(); it != sv.nus.rend(); ++it)
    body = restrict_name(*it, body);
  return body;
}

}  // namespace tmpc
