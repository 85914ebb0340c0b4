#include "tmpc/term.hpp"

#include <cctype>

namespace tmpc {

TermPtr name_term(Name n) {
  auto node = std::make_shared<TermNode>();
  node->name = std::move(n);
  return node;
}

TermPtr compound(TermPtr left, TermPtr right) {
  auto node = std::make_shared<TermNode>();
  node->left = std::move(left);
  node->right = std::move(right);
  return node;
}

bool term_equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->is_name() != b->is_name()) return false;
  if (a->is_name()) return a->name == b->name;
  return term_equal(a->left, b->left) && term_equal(a->right, b->right);
}

static void collect_term_names(const TermPtr& t, NameSet& out) {
  if (t->is_name()) {
    out.insert(t->name);
  } else {
    collect_term_names(t->left, out);
    collect_term_names(t->right, out);
  }
}

NameSet term_names(const TermPtr& t) {
  NameSet out;
  collect_term_names(t, out);
  return out;
}

std::size_t term_size(const TermPtr& t) {
  if (t->is_name()) return 1;
  return 1 + term_size(t->left) + term_size(t->right);
}

PatPtr binder(Name n) {
  auto node = std::make_shared<PatNode>();
  node->kind = PatKind::Binder;
  node->name = std::move(n);
  return node;
}

PatPtr name_match(Name n) {
  auto node = std::make_shared<PatNode>();
  node->kind = PatKind::NameMatch;
  node->name = std::move(n);
  return node;
}

PatPtr compound_pat(PatPtr left, PatPtr right) {
  auto node = std::make_shared<PatNode>();
  node->kind = PatKind::Compound;
  node->left = std::move(left);
  node->right = std::move(right);
  return node;
}

PatPtr term_to_pattern(const TermPtr& t) {
  if (t->is_name()) return name_match(t->name);
  return compound_pat(term_to_pattern(t->left), term_to_pattern(t->right));
}

static void collect_binders(const PatPtr& p, std::vector<Name>& out) {
  switch (p->kind) {
    case PatKind::Binder: out.push_back(p->name); break;
    case PatKind::NameMatch: break;
    case PatKind::Compound:
      collect_binders(p->left, out);
      collect_binders(p->right, out);
      break;
  }
}

std::vector<Name> binding_names(const PatPtr& p) {
  std::vector<Name> out;
  collect_binders(p, out);
  return out;
}

NameSet pattern_free_names(const PatPtr& p) {
  NameSet out;
  switch (p->kind) {
    case PatKind::Binder: break;
    case PatKind::NameMatch: out.insert(p->name); break;
    case PatKind::Compound: {
      for (const auto& n : pattern_free_names(p->left)) out.insert(n);
      for (const auto& n : pattern_free_names(p->right)) out.insert(n);
      break;
    }
  }
  return out;
}

bool pattern_well_formed(const PatPtr& p) {
  auto bs = binding_names(p);
  NameSet seen;
  for (const auto& b : bs) {
    if (!seen.insert(b).second) return false;
  }
  return true;
}

TermPtr Subst::apply(const TermPtr& t) const {
  if (t->is_name()) {
    auto it = map.find(t->name);
    return it == map.end() ? t : it->second;
  }
  TermPtr l = apply(t->left);
  TermPtr r = apply(t->right);
  if (l == t->left && r == t->right) return t;
  return compound(std::move(l), std::move(r));
}

NameSet Subst::range_names() const {
  NameSet out;
  for (const auto& [k, v] : map) collect_term_names(v, out);
  return out;
}

static bool match_rec(const TermPtr& t, const PatPtr& p, Subst& out) {
  switch (p->kind) {
    case PatKind::Binder:
      out.map.emplace(p->name, t);
      return true;
    case PatKind::NameMatch:
      return t->is_name() && t->name == p->name;
    case PatKind::Compound:
      if (t->is_name()) return false;
      return match_rec(t->left, p->left, out) &&
             match_rec(t->right, p->right, out);
  }
  return false;
}

std::optional<Subst> match_term(const TermPtr& t, const PatPtr& p) {
  if (!pattern_well_formed(p)) {
    throw std::invalid_argument("match_term: ill-formed pattern (duplicate binding name)");
  }
  Subst out;
  if (!match_rec(t, p, out)) return std::nullopt;
  return out;
}

// -- display ---------------------------------------------------------------

static constexpr const char* kBullet = "\xe2\x80\xa2";  // •
static constexpr const char* kLambda = "\xce\xbb";      // λ

std::string show_term(const TermPtr& t) {
  if (t->is_name()) return t->name.id;
  std::string l = t->left->is_name() ? t->left->name.id
                                     : "(" + show_term(t->left) + ")";
  std::string r = t->right->is_name() ? t->right->name.id
                                      : "(" + show_term(t->right) + ")";
  return l + kBullet + r;
}

std::string show_pattern(const PatPtr& p) {
  switch (p->kind) {
    case PatKind::Binder: return std::string(kLambda) + p->name.id;
    case PatKind::NameMatch: return p->name.id;
    case PatKind::Compound: {
      auto part = [](const PatPtr& q) {
        return q->kind == PatKind::Compound ? "(" + show_pattern(q) + ")"
                                            : show_pattern(q);
      };
      return part(p->left) + kBullet + part(p->right);
    }
  }
  return {};
}

// -- parsing ---------------------------------------------------------------

namespace {

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= text.size();
  }
  // Accepts the UTF-8 glyph or an ASCII fallback.
  bool eat(std::string_view utf8, char ascii) {
    skip_ws();
    if (pos < text.size() && text[pos] == ascii) {
      ++pos;
      return true;
    }
    if (text.substr(pos, utf8.size()) == utf8) {
      pos += utf8.size();
      return true;
    }
    return false;
  }
  bool eat_char(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  std::string name_token() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size()) {
      char c = text[pos];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' ||
          c == '#' || c == '$' || c == '@') {
        ++pos;
      } else {
        break;
      }
    }
    if (pos == start) throw TermParseError(start, "expected a name");
    return std::string(text.substr(start, pos - start));
  }
};

PatPtr parse_pat_rec(Cursor& c);

PatPtr parse_pat_atom(Cursor& c) {
  if (c.eat_char('(')) {
    PatPtr p = parse_pat_rec(c);
    if (!c.eat_char(')')) throw TermParseError(c.pos, "expected ')'");
    return p;
  }
  if (c.eat(kLambda, '\\')) return binder(Name(c.name_token()));
  return name_match(Name(c.name_token()));
}

PatPtr parse_pat_rec(Cursor& c) {
  PatPtr acc = parse_pat_atom(c);
  while (c.eat(kBullet, '*')) acc = compound_pat(acc, parse_pat_atom(c));
  return acc;  // left-associative chain
}

TermPtr pattern_as_term(const PatPtr& p, std::size_t err_pos) {
  switch (p->kind) {
    case PatKind::NameMatch: return name_term(p->name);
    case PatKind::Compound:
      return compound(pattern_as_term(p->left, err_pos),
                      pattern_as_term(p->right, err_pos));
    case PatKind::Binder:
      throw TermParseError(err_pos, "binding name not allowed in a term");
  }
  return nullptr;
}

}  // namespace

PatPtr parse_pattern(std::string_view text) {
  Cursor c{text};
  PatPtr p = parse_pat_rec(c);
  if (!c.eof()) throw TermParseError(c.pos, "trailing input after pattern");
  return p;
}

TermPtr parse_term(std::string_view text) {
  Cursor c{text};
  PatPtr p = parse_pat_rec(c);
  if (!c.eof()) throw TermParseError(c.pos, "trailing input after term");
  return pattern_as_term(p, 0);
}

}  // namespace tmpc
