#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tmpc/machine_file.hpp"
#include "tmpc/process.hpp"
#include "tmpc/tm.hpp"

namespace tmpc {

struct StepRecord {
  std::size_t index = 0;
  Configuration config;        // machine configuration after this step
  std::size_t reductions = 0;  // 1 (acpc/cpc/psi) or 2 (pi)
  bool equiv_ok = false;
};

struct FaithfulnessReport {
  Calculus calculus = Calculus::Acpc;
  std::size_t steps_requested = 0;
  std::size_t steps_performed = 0;
  std::vector<StepRecord> steps;
  bool pass = false;
  bool halted = false;    // machine reached a terminating state
  bool diverged = false;  // steps exhausted with both sides still running
  std::string error;      // first failure diagnostics; empty on pass
};

// Lockstep run: at every machine step, advance the encoded process by one
// reduction (pi: two, checking the even/odd phase discipline), assert the
// candidate set is a singleton throughout, and compare the result against the
// freshly encoded successor configuration. For pi the reference is encoded
// with the padding that remains after cells consumed at the window edges.
FaithfulnessReport check_faithful(const MachineSpec& spec, Calculus calc,
                                  std::size_t steps);

enum class TraceMode { Tm, Encoded, Lockstep };
enum class TraceFormat { Text, Json };

// Deterministic (byte-for-byte) trace rendering. Tm mode ignores `calc`.
std::string emit_trace(const MachineSpec& spec, TraceMode mode, TraceFormat fmt,
                       Calculus calc, std::size_t steps);

std::string render_report(const MachineSpec& spec, const FaithfulnessReport& rep,
                          TraceFormat fmt);

// The encoding of the initial configuration for any calculus (pi: with the
// given per-side padding budget).
ProcPtr encode_for(const MachineSpec& spec, Calculus calc, std::size_t budget);

}  // namespace tmpc
