#include "tmpc/harness.hpp"

#include <sstream>

#include "json.hpp"
#include "tmpc/congruence.hpp"
#include "tmpc/encoding.hpp"
#include "tmpc/engine.hpp"

namespace tmpc {

namespace {

using nlohmann::ordered_json;

ProcPtr encode_reference(const MachineSpec& spec, Calculus calc,
                         const Configuration& c, std::size_t pad_left,
                         std::size_t pad_right) {
  switch (calc) {
    case Calculus::Acpc: return encode_machine(spec.machine, c, spec.reserved);
    case Calculus::Cpc: return encode_machine_cpc(spec.machine, c, spec.reserved);
    case Calculus::Psi: return encode_machine_psi(spec.machine, c, spec.reserved);
    case Calculus::Pi:
      return encode_machine_pi(spec.machine, c, pad_left, pad_right, spec.reserved);
  }
  throw std::logic_error("encode_reference: bad calculus");
}

// Best-effort recovery of the configuration an encoded state carries, for
// mismatch diagnostics.
std::string decoded_view(const CanonicalForm& cf, const MachineSpec& spec) {
  ScopeView sv = top_scope(cf.proc);
  for (const auto& comp : sv.comps) {
    TermPtr t;
    if (const auto* o = std::get_if<PAcpcOut>(&comp->node)) {
      t = o->term;
    } else if (const auto* cs = std::get_if<PCpcCase>(&comp->node)) {
      if (!cpc_communicable(cs->pattern)) continue;
      // communicable pattern -> plain term
      std::string shown = show_cpc_pattern(cs->pattern);
      try {
        t = parse_term(shown);
      } catch (const TermParseError&) {
        continue;
      }
    } else if (const auto* po = std::get_if<PPsiOut>(&comp->node)) {
      t = compound(po->channel, po->payload);
    } else {
      continue;
    }
    try {
      return show_config(decode_config(t, spec.machine, spec.reserved));
    } catch (const DecodeError& ex) {
      return std::string("undecodable output term: ") + ex.what();
    }
  }
  return "no output component found";
}

const Rule* applied_rule(const Machine& m, const Configuration& c) {
  for (const auto& r : m.rules)
    if (r.from == c.state && r.read == c.tape.head) return &r;
  return nullptr;
}

}  // namespace

ProcPtr encode_for(const MachineSpec& spec, Calculus calc, std::size_t budget) {
  return encode_reference(spec, calc, spec.initial_config(), budget, budget);
}

FaithfulnessReport check_faithful(const MachineSpec& spec, Calculus calc,
                                  std::size_t steps) {
  FaithfulnessReport rep;
  rep.calculus = calc;
  rep.steps_requested = steps;

  const Machine& m = spec.machine;
  Configuration cfg = spec.initial_config();

  // Encode just enough blank cells per side: a dry run counts how often the
  // head steps past an empty window edge. Padding both sides with `steps`
  // cells would double the process size for machines that only go one way.
  std::size_t pad_left = 0, pad_right = 0;
  {
    Configuration c = cfg;
    for (std::size_t i = 0; i < steps; ++i) {
      const Rule* r = applied_rule(m, c);
      if (!r) break;
      if (r->move == Dir::L && c.tape.left.empty()) ++pad_left;
      if (r->move == Dir::R && c.tape.right.empty()) ++pad_right;
      StepResult sr = step(m, c);
      if (sr.kind != StepKind::Moved) break;
      c = sr.next;
    }
  }

  CanonicalForm cur =
      canonicalize(encode_reference(spec, calc, cfg, pad_left, pad_right));

  auto fail = [&](const std::string& msg) {
    if (rep.error.empty()) rep.error = msg;
    rep.pass = false;
  };

  bool aborted = false;
  for (std::size_t i = 0; i < steps && !aborted; ++i) {
    StepResult sr = step(m, cfg);
    if (sr.kind == StepKind::Halted) {
      rep.halted = true;
      break;
    }
    if (sr.kind == StepKind::Stuck) {
      fail("step " + std::to_string(i) + ": machine stuck (not well formed)");
      break;
    }
    const Configuration next = sr.next;
    const std::size_t reds = calc == Calculus::Pi ? 2 : 1;

    for (std::size_t phase = 0; phase < reds && !aborted; ++phase) {
      std::vector<Candidate> cands = reduce_candidates(cur);
      if (cands.empty()) {
        fail("step " + std::to_string(i) + ": encoding stuck, no reduction " +
             "candidate (expected exactly one)");
        aborted = true;
        break;
      }
      if (cands.size() > 1) {
        fail("step " + std::to_string(i) + ": " + std::to_string(cands.size()) +
             " reduction candidates (expected exactly one)");
        aborted = true;
        break;
      }
      const Candidate& cand = cands.front();
      if (calc == Calculus::Pi) {
        if (phase == 0) {
          std::string expect = composite_name(cfg.state, cfg.tape.head).id;
          if (cand.channel != expect)
            fail("step " + std::to_string(i) +
                 ": even-phase reduction on channel '" + cand.channel +
                 "', expected head channel '" + expect + "'");
        } else if (cand.channel.empty() || cand.channel[0] != '$') {
          fail("step " + std::to_string(i) +
               ": odd-phase reduction on free channel '" + cand.channel +
               "', expected a restricted tape-cell channel");
        }
      }
      if (calc == Calculus::Cpc && cand.out_out)
        fail("step " + std::to_string(i) +
             ": two output-shaped cases reduced together");
      cur = cand.canon;
    }
    if (aborted) break;

    if (calc == Calculus::Pi) {
      const Rule* r = applied_rule(m, cfg);
      if (r) {
        if (r->move == Dir::L && cfg.tape.left.empty() && pad_left > 0) --pad_left;
        if (r->move == Dir::R && cfg.tape.right.empty() && pad_right > 0)
          --pad_right;
      }
    }

    CanonicalForm ref = canonicalize(
        encode_reference(spec, calc, next, pad_left, pad_right));
    bool eq = ref.key == cur.key;
    if (!eq)
      fail("step " + std::to_string(i) +
           ": process not equivalent to encoded successor; expected " +
           show_config(next) + "; decoded " + decoded_view(cur, spec));

    rep.steps.push_back({i, next, reds, eq});
    ++rep.steps_performed;
    cfg = next;
    if (!eq) break;
  }

  // The step limit may land exactly on a terminating state.
  if (!rep.halted && rep.error.empty() && rep.steps_performed == steps &&
      step(m, cfg).kind == StepKind::Halted)
    rep.halted = true;

  if (rep.halted) {
    std::vector<Candidate> cands = reduce_candidates(cur);
    if (!cands.empty())
      fail("machine halted but the process still has " +
           std::to_string(cands.size()) + " reduction candidate(s)");
  } else if (rep.error.empty() && rep.steps_performed == steps) {
    rep.diverged = true;
  }

  rep.pass = rep.error.empty();
  for (const auto& s : rep.steps) rep.pass = rep.pass && s.equiv_ok;
  return rep;
}

// -- trace rendering ------------------------------------------------------------

namespace {

ordered_json machine_json(const MachineSpec& spec) {
  ordered_json j;
  j["alphabet"] = ordered_json::array();
  for (const auto& s : spec.machine.alphabet) j["alphabet"].push_back(s.id);
  j["blank"] = spec.machine.blank.id;
  j["states"] = ordered_json::array();
  for (const auto& q : spec.machine.states) j["states"].push_back(q.id);
  j["start"] = spec.machine.start.id;
  j["rules"] = ordered_json::array();
  for (const auto& r : spec.machine.rules)
    j["rules"].push_back(r.from.id + " " + r.read.id + " -> " + r.write.id + " " +
                         (r.move == Dir::L ? "L" : "R") + " " + r.to.id);
  j["tape"] = ordered_json::array();
  for (const auto& s : spec.window) j["tape"].push_back(s.id);
  j["head"] = spec.head;
  return j;
}

ordered_json step_json(std::size_t index, const Configuration& c,
                       std::size_t reductions, bool equiv_ok) {
  ordered_json j;
  j["index"] = index;
  j["state"] = c.state.id;
  j["left"] = ordered_json::array();  // adjacent-to-head first
  for (const auto& s : c.tape.left) j["left"].push_back(s.id);
  j["head"] = c.tape.head.id;
  j["right"] = ordered_json::array();
  for (const auto& s : c.tape.right) j["right"].push_back(s.id);
  j["reductions"] = reductions;
  j["equiv"] = equiv_ok;
  return j;
}

std::string tm_trace(const MachineSpec& spec, TraceFormat fmt, std::size_t steps) {
  TmTrace tr = run(spec.machine, spec.initial_config(), steps);
  if (fmt == TraceFormat::Text) {
    std::ostringstream out;
    for (std::size_t i = 0; i < tr.configs.size(); ++i)
      out << i << ": " << show_config(tr.configs[i]) << '\n';
    out << (tr.halted ? "halted\n" : "step limit reached\n");
    return out.str();
  }
  ordered_json j;
  j["machine"] = machine_json(spec);
  j["steps"] = ordered_json::array();
  for (std::size_t i = 0; i < tr.configs.size(); ++i)
    j["steps"].push_back(step_json(i, tr.configs[i], 0, true));
  j["verdict"] = "PASS";
  j["diverged"] = !tr.halted;
  return j.dump(2) + "\n";
}

std::string encoded_trace(const MachineSpec& spec, TraceFormat fmt, Calculus calc,
                          std::size_t steps) {
  ReductionTrace rt = run_reductions(encode_for(spec, calc, steps), steps);
  if (fmt == TraceFormat::Text) {
    std::ostringstream out;
    for (std::size_t i = 0; i < rt.states.size(); ++i)
      out << i << ": " << show_process(rt.states[i].proc) << '\n';
    if (rt.ambiguous) out << "ambiguous successor\n";
    return out.str();
  }
  ordered_json j;
  j["machine"] = machine_json(spec);
  j["calculus"] = calculus_name(calc);
  j["states"] = ordered_json::array();
  for (const auto& s : rt.states) j["states"].push_back(show_process(s.proc));
  j["ambiguous"] = rt.ambiguous;
  return j.dump(2) + "\n";
}

}  // namespace

std::string render_report(const MachineSpec& spec, const FaithfulnessReport& rep,
                          TraceFormat fmt) {
  if (fmt == TraceFormat::Text) {
    std::ostringstream out;
    out << "calculus: " << calculus_name(rep.calculus) << '\n';
    for (const auto& s : rep.steps)
      out << "step " << s.index << ": " << show_config(s.config)
          << " reductions=" << s.reductions
          << " equiv=" << (s.equiv_ok ? "ok" : "MISMATCH") << '\n';
    if (!rep.error.empty()) out << "error: " << rep.error << '\n';
    if (rep.halted) out << "halted\n";
    if (rep.diverged) out << "diverged (step limit reached)\n";
    out << "verdict: " << (rep.pass ? "PASS" : "FAIL") << '\n';
    return out.str();
  }
  ordered_json j;
  j["machine"] = machine_json(spec);
  j["calculus"] = calculus_name(rep.calculus);
  j["steps"] = ordered_json::array();
  for (const auto& s : rep.steps)
    j["steps"].push_back(step_json(s.index, s.config, s.reductions, s.equiv_ok));
  j["verdict"] = rep.pass ? "PASS" : "FAIL";
  j["diverged"] = rep.diverged;
  if (!rep.error.empty()) j["error"] = rep.error;
  return j.dump(2) + "\n";
}

std::string emit_trace(const MachineSpec& spec, TraceMode mode, TraceFormat fmt,
                       Calculus calc, std::size_t steps) {
  switch (mode) {
    case TraceMode::Tm: return tm_trace(spec, fmt, steps);
    case TraceMode::Encoded: return encoded_trace(spec, fmt, calc, steps);
    case TraceMode::Lockstep:
      return render_report(spec, check_faithful(spec, calc, steps), fmt);
  }
  throw std::logic_error("emit_trace: bad mode");
}

}  // namespace tmpc
