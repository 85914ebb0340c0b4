#include "tmpc/engine.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace tmpc {

bool channel_equiv(const TermPtr& m, const TermPtr& n) { return term_equal(m, n); }

namespace {

bool psi_match_rec(const TermPtr& k, const TermPtr& h, const NameSet& binders,
                   Subst& out) {
  if (h->is_name()) {
    if (binders.count(h->name)) {
      auto it = out.map.find(h->name);
      if (it != out.map.end()) return term_equal(it->second, k);
      out.map.emplace(h->name, k);
      return true;
    }
    return k->is_name() && k->name == h->name;
  }
  if (k->is_name()) return false;
  return psi_match_rec(k->left, h->left, binders, out) &&
         psi_match_rec(k->right, h->right, binders, out);
}

}  // namespace

std::optional<Subst> psi_match(const TermPtr& k, const std::vector<Name>& binders,
                               const TermPtr& h) {
  NameSet bset(binders.begin(), binders.end());
  if (bset.size() != binders.size())
    throw std::invalid_argument("psi_match: duplicate binder");
  Subst out;
  if (!psi_match_rec(k, h, bset, out)) return std::nullopt;
  // Every binder must be determined by the pattern.
  for (const auto& b : binders)
    if (!out.map.count(b)) return std::nullopt;
  return out;
}

namespace {

// Plain channel rendering for diagnostics: names as-is, pairs as (a,b).
std::string chan_str(const TermPtr& t) {
  if (t->is_name()) return t->name.id;
  return "(" + chan_str(t->left) + "," + chan_str(t->right) + ")";
}

struct Agent {
  ProcPtr proc;
  std::size_t comp;  // owning top-level component
  int sub;           // -1: the component itself; else index into its unfolding
};

struct Reaction {
  ProcPtr ca, cb;  // continuations of the two reacting prefixes
  std::string channel;
  bool out_out = false;
};

std::optional<Reaction> try_react(const ProcPtr& a, const ProcPtr& b, Calculus c) {
  switch (c) {
    case Calculus::Acpc: {
      const auto* out = std::get_if<PAcpcOut>(&a->node);
      const auto* in = std::get_if<PAcpcIn>(&b->node);
      if (!out || !in) return std::nullopt;
      auto sigma = match_term(out->term, in->pattern);
      if (!sigma) return std::nullopt;
      return Reaction{out->body, apply_subst_process(*sigma, in->body), "", false};
    }
    case Calculus::Cpc: {
      const auto* ca = std::get_if<PCpcCase>(&a->node);
      const auto* cb = std::get_if<PCpcCase>(&b->node);
      if (!ca || !cb) return std::nullopt;
      auto sr = cpc_unify(ca->pattern, cb->pattern);
      if (!sr) return std::nullopt;
      bool oo = cpc_communicable(ca->pattern) && cpc_communicable(cb->pattern);
      return Reaction{apply_subst_process(sr->first, ca->body),
                      apply_subst_process(sr->second, cb->body), "", oo};
    }
    case Calculus::Psi: {
      const auto* out = std::get_if<PPsiOut>(&a->node);
      const auto* in = std::get_if<PPsiIn>(&b->node);
      if (!out || !in) return std::nullopt;
      if (!channel_equiv(out->channel, in->channel)) return std::nullopt;
      auto sigma = psi_match(out->payload, in->binders, in->pattern);
      if (!sigma) return std::nullopt;
      return Reaction{out->body, apply_subst_process(*sigma, in->body),
                      chan_str(out->channel), false};
    }
    case Calculus::Pi: {
      const auto* out = std::get_if<PPiOut>(&a->node);
      const auto* in = std::get_if<PPiIn>(&b->node);
      if (!out || !in) return std::nullopt;
      if (out->channel != in->channel) return std::nullopt;
      if (out->payload.size() != in->binders.size()) return std::nullopt;
      Subst sigma;
      for (std::size_t i = 0; i < in->binders.size(); ++i)
        sigma.map.insert_or_assign(in->binders[i], name_term(out->payload[i]));
      return Reaction{out->body, apply_subst_process(sigma, in->body),
                      out->channel.id, false};
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<Candidate> reduce_candidates(const CanonicalForm& cf) {
  if (!cf.calculus) return {};
  const Calculus calc = *cf.calculus;

  ScopeView sv = top_scope(cf.proc);

  // One instance per replication ("!P == P | !P", once per enumeration). A
  // replicated body with its own top-level restrictions is left folded; the
  // encodings never produce one.
  std::vector<std::vector<ProcPtr>> instances(sv.comps.size());
  std::vector<Agent> agents;
  for (std::size_t k = 0; k < sv.comps.size(); ++k) {
    if (const auto* rp = std::get_if<PRepl>(&sv.comps[k]->node)) {
      ScopeView body = top_scope(rp->body);
      if (!body.nus.empty()) continue;
      instances[k] = body.comps;
      for (std::size_t i = 0; i < instances[k].size(); ++i)
        agents.push_back({instances[k][i], k, static_cast<int>(i)});
    } else {
      agents.push_back({sv.comps[k], k, -1});
    }
  }

  auto assemble = [&](const Agent& a, const Agent& b, const Reaction& rx) {
    ScopeView out;
    out.nus = sv.nus;
    for (std::size_t k = 0; k < sv.comps.size(); ++k) {
      bool consumed = (a.sub < 0 && a.comp == k) || (b.sub < 0 && b.comp == k);
      if (!consumed) out.comps.push_back(sv.comps[k]);
    }
    // A reacting unfolded part leaves the rest of its instance behind.
    for (std::size_t k = 0; k < sv.comps.size(); ++k) {
      std::vector<int> used;
      if (a.sub >= 0 && a.comp == k) used.push_back(a.sub);
      if (b.sub >= 0 && b.comp == k) used.push_back(b.sub);
      if (used.empty()) continue;
      for (int i = 0; i < static_cast<int>(instances[k].size()); ++i)
        if (std::find(used.begin(), used.end(), i) == used.end())
          out.comps.push_back(instances[k][i]);
    }
    out.comps.push_back(rx.ca);
    out.comps.push_back(rx.cb);
    return rebuild_scope(out);
  };

  std::vector<Candidate> found;
  auto attempt = [&](const Agent& a, const Agent& b) {
    auto rx = try_react(a.proc, b.proc, calc);
    if (!rx) return;
    Candidate cand;
    cand.canon = canonicalize(assemble(a, b, *rx));
    cand.channel = rx->channel;
    cand.out_out = rx->out_out;
    found.push_back(std::move(cand));
  };

  if (calc == Calculus::Cpc) {
    // Unification is symmetric, so each unordered pair is tried once.
    for (std::size_t i = 0; i < agents.size(); ++i)
      for (std::size_t j = i + 1; j < agents.size(); ++j) attempt(agents[i], agents[j]);
  } else if (calc == Calculus::Acpc) {
    std::vector<std::size_t> outs, ins;
    for (std::size_t i = 0; i < agents.size(); ++i) {
      if (std::holds_alternative<PAcpcOut>(agents[i].proc->node)) outs.push_back(i);
      else if (std::holds_alternative<PAcpcIn>(agents[i].proc->node)) ins.push_back(i);
    }
    for (std::size_t i : outs)
      for (std::size_t j : ins)
        if (i != j) attempt(agents[i], agents[j]);
  } else {
    // Only prefixes on the same channel can react; bucketing keeps wide
    // parallel compositions (long encoded tapes) from costing all pairs.
    std::map<std::string, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>>
        by_chan;
    for (std::size_t i = 0; i < agents.size(); ++i) {
      if (const auto* o = std::get_if<PPsiOut>(&agents[i].proc->node))
        by_chan[chan_str(o->channel)].first.push_back(i);
      else if (const auto* in = std::get_if<PPsiIn>(&agents[i].proc->node))
        by_chan[chan_str(in->channel)].second.push_back(i);
      else if (const auto* po = std::get_if<PPiOut>(&agents[i].proc->node))
        by_chan[po->channel.id].first.push_back(i);
      else if (const auto* pi = std::get_if<PPiIn>(&agents[i].proc->node))
        by_chan[pi->channel.id].second.push_back(i);
    }
    for (const auto& [ch, oi] : by_chan)
      for (std::size_t i : oi.first)
        for (std::size_t j : oi.second)
          if (i != j) attempt(agents[i], agents[j]);
  }

  std::sort(found.begin(), found.end(), [](const Candidate& a, const Candidate& b) {
    if (a.canon.key != b.canon.key) return a.canon.key < b.canon.key;
    return a.channel < b.channel;
  });
  std::vector<Candidate> out;
  for (auto& c : found)
    if (out.empty() || out.back().canon.key != c.canon.key) out.push_back(std::move(c));
  return out;
}

std::vector<Candidate> reduce_candidates(const ProcPtr& p) {
  return reduce_candidates(canonicalize(p));
}

ReductionTrace run_reductions(const ProcPtr& p, std::size_t max) {
  ReductionTrace tr;
  tr.states.push_back(canonicalize(p));
  for (std::size_t i = 0; i < max; ++i) {
    std::vector<Candidate> cs = reduce_candidates(tr.states.back());
    if (cs.empty()) break;
    if (cs.size() > 1) {
      tr.ambiguous = true;
      break;
    }
    tr.states.push_back(std::move(cs.front().canon));
  }
  return tr;
}

}  // namespace tmpc
