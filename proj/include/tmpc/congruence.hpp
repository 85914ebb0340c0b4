#pragma once

#include <string>
#include <vector>

#include "tmpc/process.hpp"

namespace tmpc {

// Normalized representative of a structural-congruence class. Bound names
// are renamed to position-derived identifiers ("$0", "$1", ...), so equal
// keys imply congruent originals. Complete on the encoding fragment; general
// replication congruence is not decided.
struct CanonicalForm {
  std::optional<Calculus> calculus;
  ProcPtr proc;
  std::string key;

  bool operator==(const CanonicalForm& other) const { return key == other.key; }
};

CanonicalForm canonicalize(const ProcPtr& p);

// Stable serialization of the canonical structure (used for dedup and for
// trace state digests).
std::string structural_key(const ProcPtr& p);

// canonicalize(P) == canonicalize(Q); throws std::invalid_argument when the
// processes carry different calculus tags.
bool equiv(const ProcPtr& p, const ProcPtr& q);

// Equality after canonical bound-name renaming only; no other laws applied.
bool alpha_equal(const ProcPtr& p, const ProcPtr& q);

// Top-level decomposition of a process into its restriction prefix and
// parallel components (Nil components removed). On canonical forms this is
// exactly the normalized scope.
struct ScopeView {
  std::vector<Name> nus;
  std::vector<ProcPtr> comps;
};

ScopeView top_scope(const ProcPtr& p);
ProcPtr rebuild_scope(const ScopeView& scope);

}  // namespace tmpc
