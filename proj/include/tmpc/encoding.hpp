#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "tmpc/process.hpp"
#include "tmpc/tm.hpp"

namespace tmpc {

// Names the encodings need for themselves; must stay clear of the machine's
// states and symbols.
struct ReservedNames {
  Name e{"e"};
  Name l{"l"};
  Name l1{"l1"};
  Name r{"r"};
  Name r1{"r1"};

  auto operator<=>(const ReservedNames&) const = default;
};

// Throws std::invalid_argument when a reserved name collides with a machine
// name (or another reserved name), or when a machine name uses the '#'
// namespace the encoders keep for generated names.
void validate_reserved(const Machine& m, const ReservedNames& rn);

// -- finite-term encoding (pattern-matching calculi) -------------------------------

TermPtr encode_tape(const Tape& t, const ReservedNames& rn);
ProcPtr encode_config(const Configuration& c, const ReservedNames& rn);
ProcPtr encode_tuple(const Rule& u, const Machine& m, const ReservedNames& rn);
ProcPtr encode_transition_fn(const Machine& m, const ReservedNames& rn);
ProcPtr encode_machine(const Machine& m, const Configuration& c,
                       const ReservedNames& rn);

struct DecodeError : std::runtime_error {
  std::string context;
  DecodeError(std::string where, const std::string& msg)
      : std::runtime_error(msg + " (at " + where + ")"), context(std::move(where)) {}
};

// Inverse of the configuration encoding; throws DecodeError on any shape
// violation.
Configuration decode_config(const TermPtr& t, const Machine& m,
                            const ReservedNames& rn);

// Same structure with both polarities expressed as cases.
ProcPtr encode_machine_cpc(const Machine& m, const Configuration& c,
                           const ReservedNames& rn);

// Compounds become pairs; the config is an output on channel q_i.
ProcPtr encode_machine_psi(const Machine& m, const Configuration& c,
                           const ReservedNames& rn);

// -- pi encoding -----------------------------------------------------------------

// Channel name standing for a (state, symbol) pair.
Name composite_name(const Name& state, const Name& symbol);

struct PiTape {
  ProcPtr process;  // both cell chains, links restricted
  Name left_end;
  Name right_end;
};

// Linked-list tape: each side is a chain of one-shot cell outputs reached
// from its endpoint, extended with `budget` explicit blank cells beyond the
// window (the finite stand-in for the infinitely blank tape).
PiTape encode_tape_pi(const Tape& t, std::size_t budget_left,
                      std::size_t budget_right, const Machine& m,
                      const ReservedNames& rn);
PiTape encode_tape_pi(const Tape& t, std::size_t budget, const Machine& m,
                      const ReservedNames& rn);

ProcPtr encode_tuple_pi(const Rule& u, const Machine& m, const ReservedNames& rn);

ProcPtr encode_machine_pi(const Machine& m, const Configuration& c,
                          std::size_t budget_left, std::size_t budget_right,
                          const ReservedNames& rn);
ProcPtr encode_machine_pi(const Machine& m, const Configuration& c,
                          std::size_t budget, const ReservedNames& rn);

}  // namespace tmpc
