// Command-line front end: validate and run machine files, print their
// process-calculus encodings, and run the lockstep faithfulness check.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "tmpc/congruence.hpp"
#include "tmpc/engine.hpp"
#include "tmpc/harness.hpp"
#include "tmpc/machine_file.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitInternal = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw tmpc::MachineParseError(0, 0, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

tmpc::Calculus to_calculus(const std::string& s) {
  auto c = tmpc::parse_calculus(s);
  if (!c) throw tmpc::MachineParseError(0, 0, "unknown calculus '" + s + "'");
  return *c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Turing machines and their process-calculus encodings"};
  app.require_subcommand(1);

  std::string file, calculus = "acpc";
  std::size_t max_steps = 100, steps = 100, budget = 0, max_reductions = 100;
  bool as_json = false;

  auto* validate_cmd = app.add_subcommand("validate", "parse and validate a machine file");
  validate_cmd->add_option("file", file)->required();

  auto* run_cmd = app.add_subcommand("run", "run the machine and print its trace");
  run_cmd->add_option("file", file)->required();
  run_cmd->add_option("--max-steps", max_steps);
  run_cmd->add_flag("--json", as_json);

  auto* encode_cmd = app.add_subcommand("encode", "print the encoded initial configuration");
  encode_cmd->add_option("file", file)->required();
  encode_cmd->add_option("--calculus", calculus)
      ->check(CLI::IsMember({"acpc", "cpc", "psi", "pi"}));
  encode_cmd->add_option("--budget", budget, "pi: blank tape cells per side");

  auto* sim_cmd = app.add_subcommand("simulate", "reduce the encoding step by step");
  sim_cmd->add_option("file", file)->required();
  sim_cmd->add_option("--calculus", calculus)
      ->check(CLI::IsMember({"acpc", "cpc", "psi", "pi"}));
  sim_cmd->add_option("--max-reductions", max_reductions);

  auto* check_cmd = app.add_subcommand("check", "lockstep faithfulness check");
  check_cmd->add_option("file", file)->required();
  check_cmd->add_option("--calculus", calculus)
      ->check(CLI::IsMember({"acpc", "cpc", "psi", "pi"}));
  check_cmd->add_option("--steps", steps);
  check_cmd->add_flag("--json", as_json);

  CLI11_PARSE(app, argc, argv);

  try {
    tmpc::MachineSpec spec = tmpc::parse_machine(read_file(file));

    if (validate_cmd->parsed()) {
      std::cout << "ok: " << spec.machine.states.size() << " states, "
                << spec.machine.alphabet.size() << " symbols, "
                << spec.machine.rules.size() << " rules\n";
      return kExitOk;
    }
    if (run_cmd->parsed()) {
      std::cout << tmpc::emit_trace(spec, tmpc::TraceMode::Tm,
                                    as_json ? tmpc::TraceFormat::Json
                                            : tmpc::TraceFormat::Text,
                                    tmpc::Calculus::Acpc, max_steps);
      return kExitOk;
    }
    if (encode_cmd->parsed()) {
      tmpc::ProcPtr p = tmpc::encode_for(spec, to_calculus(calculus), budget);
      std::cout << tmpc::show_process(p) << '\n';
      return kExitOk;
    }
    if (sim_cmd->parsed()) {
      std::cout << tmpc::emit_trace(spec, tmpc::TraceMode::Encoded,
                                    tmpc::TraceFormat::Text,
                                    to_calculus(calculus), max_reductions);
      return kExitOk;
    }
    if (check_cmd->parsed()) {
      tmpc::FaithfulnessReport rep =
          tmpc::check_faithful(spec, to_calculus(calculus), steps);
      std::cout << tmpc::render_report(spec, rep,
                                       as_json ? tmpc::TraceFormat::Json
                                               : tmpc::TraceFormat::Text);
      return rep.pass ? kExitOk : kExitMismatch;
    }
    return kExitInternal;
  } catch (const tmpc::MachineParseError& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kExitBadInput;
  } catch (const std::invalid_argument& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kExitBadInput;
  } catch (const std::exception& ex) {
    std::cerr << "internal error: " << ex.what() << '\n';
    return kExitInternal;
  }
}
