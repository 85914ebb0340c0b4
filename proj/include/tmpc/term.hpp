#pragma once

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tmpc {

// Names form one shared universe; machines keep states and symbols disjoint
// inside it so both can be used as calculus names.
struct Name {
  std::string id;

  Name() = default;
  explicit Name(std::string s) : id(std::move(s)) {}
  Name(const char* s) : id(s) {}

  auto operator<=>(const Name&) const = default;
};

using NameSet = std::set<Name>;

// Terms: names n and compounds s•t.
struct TermNode;
using TermPtr = std::shared_ptr<const TermNode>;

struct TermNode {
  Name name;            // valid for leaves only
  TermPtr left, right;  // both set for compounds, both null for leaves

  bool is_name() const { return left == nullptr; }
};

TermPtr name_term(Name n);
TermPtr compound(TermPtr left, TermPtr right);

bool term_equal(const TermPtr& a, const TermPtr& b);
NameSet term_names(const TermPtr& t);
std::size_t term_size(const TermPtr& t);

// Patterns: binding names λn, name-matches n, and compound patterns.
enum class PatKind { Binder, NameMatch, Compound };

struct PatNode;
using PatPtr = std::shared_ptr<const PatNode>;

struct PatNode {
  PatKind kind = PatKind::NameMatch;
  Name name;           // Binder / NameMatch
  PatPtr left, right;  // Compound
};

PatPtr binder(Name n);
PatPtr name_match(Name n);
PatPtr compound_pat(PatPtr left, PatPtr right);
PatPtr term_to_pattern(const TermPtr& t);  // every name becomes a name-match

bool pattern_well_formed(const PatPtr& p);
std::vector<Name> binding_names(const PatPtr& p);  // positional order
NameSet pattern_free_names(const PatPtr& p);       // the name-matches

// Finite name -> term maps; lookups outside the domain are the identity.
struct Subst {
  std::map<Name, TermPtr> map;

  bool empty() const { return map.empty(); }
  TermPtr apply(const TermPtr& t) const;
  NameSet range_names() const;
};

// Matching {t // p}. Undefined match is a value; an ill-formed pattern is a
// caller error and throws.
std::optional<Subst> match_term(const TermPtr& t, const PatPtr& p);

// Display syntax: `name`, `λname`, `(t•t)`; compounds associate to the left.
std::string show_term(const TermPtr& t);
std::string show_pattern(const PatPtr& p);

struct TermParseError : std::runtime_error {
  std::size_t pos;
  TermParseError(std::size_t at, const std::string& msg)
      : std::runtime_error(msg), pos(at) {}
};

TermPtr parse_term(std::string_view text);
PatPtr parse_pattern(std::string_view text);

}  // namespace tmpc
