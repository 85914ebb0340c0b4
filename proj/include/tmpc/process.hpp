#pragma once

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "tmpc/term.hpp"

namespace tmpc {

enum class Calculus { Acpc, Cpc, Psi, Pi };

std::string calculus_name(Calculus c);
std::optional<Calculus> parse_calculus(const std::string& s);

// -- CPC patterns ------------------------------------------------------------

enum class CpcKind { Binder, Variable, Protected, Compound };

struct CpcPatNode;
using CpcPatPtr = std::shared_ptr<const CpcPatNode>;

struct CpcPatNode {
  CpcKind kind = CpcKind::Variable;
  Name name;
  CpcPatPtr left, right;
};

CpcPatPtr cpc_binder(Name n);
CpcPatPtr cpc_variable(Name n);
CpcPatPtr cpc_protected(Name n);
CpcPatPtr cpc_compound(CpcPatPtr l, CpcPatPtr r);
CpcPatPtr term_to_cpc(const TermPtr& t);  // names become variables

bool cpc_well_formed(const CpcPatPtr& p);
bool cpc_communicable(const CpcPatPtr& p);  // no binders, no protected names
std::vector<Name> cpc_binding_names(const CpcPatPtr& p);
NameSet cpc_free_names(const CpcPatPtr& p);  // variables and protected names
std::string show_cpc_pattern(const CpcPatPtr& p);

// Symmetric unification {p || q} -> (sigma, rho) or undefined.
std::optional<std::pair<Subst, Subst>> cpc_unify(const CpcPatPtr& p,
                                                 const CpcPatPtr& q);

// -- process syntax (all four calculi share one tree type) --------------------

struct Process;
using ProcPtr = std::shared_ptr<const Process>;

struct PNil {};
struct PPar { ProcPtr left, right; };
struct PRepl { ProcPtr body; };
struct PRestrict { Name name; ProcPtr body; };
struct PAcpcIn { PatPtr pattern; ProcPtr body; };
struct PAcpcOut { TermPtr term; ProcPtr body; };
struct PCpcCase { CpcPatPtr pattern; ProcPtr body; };
struct PPsiIn {
  TermPtr channel;
  std::vector<Name> binders;
  TermPtr pattern;
  ProcPtr body;
};
struct PPsiOut { TermPtr channel; TermPtr payload; ProcPtr body; };
struct PPiIn { Name channel; std::vector<Name> binders; ProcPtr body; };
struct PPiOut { Name channel; std::vector<Name> payload; ProcPtr body; };
struct PIfte { Name lhs, rhs; ProcPtr then_branch, else_branch; };

struct Process {
  std::variant<PNil, PPar, PRepl, PRestrict, PAcpcIn, PAcpcOut, PCpcCase,
               PPsiIn, PPsiOut, PPiIn, PPiOut, PIfte>
      node;
};

ProcPtr nil();
ProcPtr par(ProcPtr a, ProcPtr b);
ProcPtr par_all(const std::vector<ProcPtr>& ps);  // right-nested; Nil if empty
ProcPtr repl(ProcPtr body);
ProcPtr restrict_name(Name n, ProcPtr body);
ProcPtr acpc_in(PatPtr p, ProcPtr body);
ProcPtr acpc_out(TermPtr t, ProcPtr body);
ProcPtr cpc_case(CpcPatPtr p, ProcPtr body);
ProcPtr psi_in(TermPtr channel, std::vector<Name> binders, TermPtr pattern,
               ProcPtr body);
ProcPtr psi_out(TermPtr channel, TermPtr payload, ProcPtr body);
ProcPtr pi_in(Name channel, std::vector<Name> binders, ProcPtr body);
ProcPtr pi_out(Name channel, std::vector<Name> payload, ProcPtr body);
ProcPtr ifte(Name lhs, Name rhs, ProcPtr then_branch, ProcPtr else_branch);

// nullopt for neutral processes (built only from 0, |, !, nu); throws on a
// mix of calculi in one tree.
std::optional<Calculus> calculus_of(const ProcPtr& p);

NameSet free_names(const ProcPtr& p);

// Capture-avoiding substitution; binders and restrictions are alpha-renamed
// when they would capture names from the range.
ProcPtr apply_subst_process(const Subst& sigma, const ProcPtr& p);

std::string show_process(const ProcPtr& p);

}  // namespace tmpc
