#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tmpc/term.hpp"

namespace tmpc {

enum class Dir { L, R };

// A transition tuple: in state `from` reading `read`, write `write`, move
// `move`, continue in state `to`.
struct Rule {
  Name from;
  Name read;
  Name write;
  Dir move;
  Name to;

  auto operator<=>(const Rule&) const = default;
};

struct Machine {
  std::vector<Name> alphabet;  // includes the blank
  Name blank;
  std::vector<Name> states;
  Name start;
  std::vector<Rule> rules;

  auto operator<=>(const Machine&) const = default;
};

// Finite explicit window; cells beyond it are implicitly blank. Both lists
// are ordered adjacent-to-head first.
struct Tape {
  std::vector<Name> left;
  Name head;
  std::vector<Name> right;

  auto operator<=>(const Tape&) const = default;
};

struct Configuration {
  Name state;
  Tape tape;

  auto operator<=>(const Configuration&) const = default;
};

struct TmTrace {
  std::vector<Configuration> configs;
  bool halted = false;
};

struct Violation {
  std::string code;
  std::string message;
};

// Total: returns every invariant/well-formedness violation with a reason
// code. With allow_nondet, duplicate (state, symbol) rules are permitted.
std::vector<Violation> validate(const Machine& m, bool allow_nondet = false);

bool is_terminating(const Machine& m, const Name& q);  // throws on unknown state

enum class StepKind { Moved, Halted, Stuck };

struct StepResult {
  StepKind kind;
  Configuration next;  // valid when kind == Moved
};

StepResult step(const Machine& m, const Configuration& cfg);

// All successors; empty for terminating states. Singleton for deterministic
// machines.
std::vector<Configuration> step_all(const Machine& m, const Configuration& cfg);

// Iterates step, stopping early on halt; throws on a stuck configuration
// (only reachable for ill-formed machines).
TmTrace run(const Machine& m, Configuration cfg, std::size_t max_steps);

std::string show_config(const Configuration& cfg);

}  // namespace tmpc
