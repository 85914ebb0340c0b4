#include "tmpc/tm.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace tmpc {

namespace {

bool contains(const std::vector<Name>& v, const Name& n) {
  return std::find(v.begin(), v.end(), n) != v.end();
}

}  // namespace

std::vector<Violation> validate(const Machine& m, bool allow_nondet) {
  std::vector<Violation> out;
  auto add = [&](std::string code, std::string msg) {
    out.push_back({std::move(code), std::move(msg)});
  };

  if (!contains(m.alphabet, m.blank))
    add("blank-not-in-alphabet", "blank symbol '" + m.blank.id + "' is not in the alphabet");
  if (!contains(m.states, m.start))
    add("start-not-in-states", "start state '" + m.start.id + "' is not in the states");

  for (const auto& q : m.states) {
    if (contains(m.alphabet, q))
      add("state-symbol-overlap", "name '" + q.id + "' is both a state and a symbol");
  }

  std::map<std::pair<Name, Name>, int> pair_count;
  std::set<Name> sources;
  for (const auto& r : m.rules) {
    if (!contains(m.states, r.from))
      add("unknown-state", "rule source state '" + r.from.id + "' is not declared");
    if (!contains(m.states, r.to))
      add("unknown-state", "rule target state '" + r.to.id + "' is not declared");
    if (!contains(m.alphabet, r.read))
      add("unknown-symbol", "rule read symbol '" + r.read.id + "' is not declared");
    if (!contains(m.alphabet, r.write))
      add("unknown-symbol", "rule write symbol '" + r.write.id + "' is not declared");
    ++pair_count[{r.from, r.read}];
    sources.insert(r.from);
  }

  if (!allow_nondet) {
    for (const auto& [key, n] : pair_count) {
      if (n > 1)
        add("nondeterministic-pair",
            "nondeterministic pair: " + std::to_string(n) + " rules from (" +
                key.first.id + ", " + key.second.id + ")");
    }
  }

  // Well formed: every non-terminating state has a rule for every symbol.
  for (const auto& q : m.states) {
    if (!sources.count(q)) continue;  // terminating
    for (const auto& s : m.alphabet) {
      if (!pair_count.count({q, s}))
        add("state-not-total",
            "state " + q.id + " not total: no rule for symbol '" + s.id + "'");
    }
  }
  return out;
}

bool is_terminating(const Machine& m, const Name& q) {
  if (!contains(m.states, q))
    throw std::invalid_argument("is_terminating: unknown state '" + q.id + "'");
  return std::none_of(m.rules.begin(), m.rules.end(),
                      [&](const Rule& r) { return r.from == q; });
}

namespace {

Configuration apply_rule(const Machine& m, const Configuration& cfg, const Rule& r) {
  Configuration next;
  next.state = r.to;
  const Tape& t = cfg.tape;
  if (r.move == Dir::L) {
    // Vacated cell (now r.write) becomes adjacent on the right.
    next.tape.right = t.right;
    next.tape.right.insert(next.tape.right.begin(), r.write);
    if (t.left.empty()) {
      next.tape.head = m.blank;  // materialize exactly one blank
    } else {
      next.tape.head = t.left.front();
      next.tape.left.assign(t.left.begin() + 1, t.left.end());
    }
  } else {
    next.tape.left = t.left;
    next.tape.left.insert(next.tape.left.begin(), r.write);
    if (t.right.empty()) {
      next.tape.head = m.blank;
    } else {
      next.tape.head = t.right.front();
      next.tape.right.assign(t.right.begin() + 1, t.right.end());
    }
  }
  return next;
}

}  // namespace

StepResult step(const Machine& m, const Configuration& cfg) {
  bool has_rule_from_state = false;
  for (const auto& r : m.rules) {
    if (r.from != cfg.state) continue;
    has_rule_from_state = true;
    if (r.read == cfg.tape.head) return {StepKind::Moved, apply_rule(m, cfg, r)};
  }
  if (!has_rule_from_state) return {StepKind::Halted, {}};
  return {StepKind::Stuck, {}};
}

std::vector<Configuration> step_all(const Machine& m, const Configuration& cfg) {
  std::vector<Configuration> out;
  for (const auto& r : m.rules) {
    if (r.from == cfg.state && r.read == cfg.tape.head)
      out.push_back(apply_rule(m, cfg, r));
  }
  return out;
}

TmTrace run(const Machine& m, Configuration cfg, std::size_t max_steps) {
  TmTrace trace;
  trace.configs.push_back(cfg);
  for (std::size_t i = 0; i < max_steps; ++i) {
    StepResult r = step(m, cfg);
    if (r.kind == StepKind::Halted) {
      trace.halted = true;
      return trace;
    }
    if (r.kind == StepKind::Stuck)
      throw std::runtime_error("run: stuck configuration (machine is not well formed)");
    cfg = r.next;
    trace.configs.push_back(cfg);
  }
  // One more probe so max_steps that land exactly on a halt report it.
  trace.halted = step(m, cfg).kind == StepKind::Halted;
  return trace;
}

std::string show_config(const Configuration& cfg) {
  std::string s = "(" + cfg.state.id + ", ...b";
  for (auto it = cfg.tape.left.rbegin(); it != cfg.tape.left.rend(); ++it)
    s += "," + it->id;
  s += ",[" + cfg.tape.head.id + "]";
  for (const auto& c : cfg.tape.right) s += "," + c.id;
  s += ",b...)";
  return s;
}

}  // namespace tmpc
