#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tmpc/congruence.hpp"
#include "tmpc/process.hpp"

namespace tmpc {

// Psi instance: channel equivalence is syntactic equality of terms.
bool channel_equiv(const TermPtr& m, const TermPtr& n);

// The unique substitution over `binders` with K = H[binders := ...], if any.
// Non-binder names in H must coincide with K; a binder occurring twice must
// match equal subterms. nullopt when no such substitution exists.
std::optional<Subst> psi_match(const TermPtr& k, const std::vector<Name>& binders,
                               const TermPtr& h);

struct Candidate {
  CanonicalForm canon;  // canonical successor

  // Diagnostics for the harness: the redex channel as printed in the
  // canonical source state (pi: the channel name; psi: the channel term;
  // empty for the channel-free calculi), and whether both reacting CPC
  // patterns were communicable (two output-shaped cases).
  std::string channel;
  bool out_out = false;
};

// All one-step successors of P, in canonical form, deduplicated, sorted by
// canonical key. Replications are unfolded at most once per enumeration.
// The calculus is inferred from the process; a neutral process has no
// candidates.
std::vector<Candidate> reduce_candidates(const ProcPtr& p);
std::vector<Candidate> reduce_candidates(const CanonicalForm& cf);

struct ReductionTrace {
  std::vector<CanonicalForm> states;  // states[0] = canonical input
  bool ambiguous = false;             // stopped because successor not unique
};

// Follows the unique successor while there is exactly one, up to max steps.
ReductionTrace run_reductions(const ProcPtr& p, std::size_t max);

}  // namespace tmpc
