#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "tmpc/encoding.hpp"
#include "tmpc/tm.hpp"

namespace tmpc {

// A parsed machine file: the machine itself plus the initial tape window and
// head position.
struct MachineSpec {
  Machine machine;
  std::vector<Name> window;  // explicit cells, left to right
  std::size_t head = 0;      // index into window (0 when window is empty)
  ReservedNames reserved;

  Configuration initial_config() const;

  auto operator<=>(const MachineSpec&) const = default;
};

struct MachineParseError : std::runtime_error {
  std::size_t line;  // 1-based; 0 for file-level errors
  std::size_t col;   // 1-based
  MachineParseError(std::size_t at_line, std::size_t at_col, const std::string& msg)
      : std::runtime_error("line " + std::to_string(at_line) + ", col " +
                           std::to_string(at_col) + ": " + msg),
        line(at_line),
        col(at_col) {}
};

// Line-oriented format, '#' comments:
//   alphabet: <sym> ...        blank: <sym>
//   states: <q> ...            start: <q>
//   rule: <q> <sym> -> <sym> <L|R> <q>        (repeatable)
//   tape: <sym> ...            head: <index>
//   reserved: e=<n> l=<n> l1=<n> r=<n> r1=<n> (optional, subset allowed)
// The result always passes validate() and validate_reserved(); any violation
// is reported as a parse error.
MachineSpec parse_machine(std::string_view text);

// Inverse of parse_machine: parse_machine(render_machine(s)) == s.
std::string render_machine(const MachineSpec& spec);

}  // namespace tmpc
