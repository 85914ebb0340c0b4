#include "tmpc/machine_file.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <vector>

namespace tmpc {

Configuration MachineSpec::initial_config() const {
  Configuration cfg;
  cfg.state = machine.start;
  if (window.empty()) {
    cfg.tape.head = machine.blank;
    return cfg;
  }
  cfg.tape.head = window[head];
  for (std::size_t i = head; i-- > 0;) cfg.tape.left.push_back(window[i]);
  cfg.tape.right.assign(window.begin() + static_cast<std::ptrdiff_t>(head) + 1,
                        window.end());
  return cfg;
}

namespace {

struct Token {
  std::string text;
  std::size_t col;  // 1-based
};

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

std::vector<Token> split_tokens(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

}  // namespace

MachineSpec parse_machine(std::string_view text) {
  MachineSpec spec;
  std::map<std::string, std::size_t> seen;  // non-repeatable keys -> line
  bool have_tape = false, have_head = false;

  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    std::vector<Token> toks = split_tokens(line);
    if (toks.empty()) continue;

    std::string key = toks[0].text;
    if (key.empty() || key.back() != ':')
      throw MachineParseError(lineno, toks[0].col,
                              "expected '<key>:', found '" + key + "'");
    key.pop_back();

    auto name_at = [&](std::size_t idx, const char* what) {
      if (idx >= toks.size())
        throw MachineParseError(lineno, line.size() + 1,
                                std::string("missing ") + what);
      if (!valid_name(toks[idx].text))
        throw MachineParseError(lineno, toks[idx].col,
                                std::string("invalid ") + what + " '" +
                                    toks[idx].text +
                                    "' (letters, digits, '_' only)");
      return Name(toks[idx].text);
    };
    auto mark_once = [&] {
      if (seen.count(key))
        throw MachineParseError(lineno, toks[0].col,
                                "duplicate '" + key + ":' (first on line " +
                                    std::to_string(seen[key]) + ")");
      seen[key] = lineno;
    };

    if (key == "alphabet") {
      mark_once();
      if (toks.size() < 2)
        throw MachineParseError(lineno, toks[0].col, "alphabet must not be empty");
      for (std::size_t i = 1; i < toks.size(); ++i)
        spec.machine.alphabet.push_back(name_at(i, "symbol"));
    } else if (key == "blank") {
      mark_once();
      spec.machine.blank = name_at(1, "symbol");
      if (toks.size() > 2)
        throw MachineParseError(lineno, toks[2].col, "blank takes one symbol");
    } else if (key == "states") {
      mark_once();
      if (toks.size() < 2)
        throw MachineParseError(lineno, toks[0].col, "states must not be empty");
      for (std::size_t i = 1; i < toks.size(); ++i)
        spec.machine.states.push_back(name_at(i, "state"));
    } else if (key == "start") {
      mark_once();
      spec.machine.start = name_at(1, "state");
      if (toks.size() > 2)
        throw MachineParseError(lineno, toks[2].col, "start takes one state");
    } else if (key == "rule") {
      if (toks.size() != 7 || toks[3].text != "->")
        throw MachineParseError(
            lineno, toks.size() > 1 ? toks[1].col : toks[0].col,
            "rule format is: rule: <q> <sym> -> <sym> <L|R> <q>");
      Rule r;
      r.from = name_at(1, "state");
      r.read = name_at(2, "symbol");
      r.write = name_at(4, "symbol");
      if (toks[5].text == "L") r.move = Dir::L;
      else if (toks[5].text == "R") r.move = Dir::R;
      else
        throw MachineParseError(lineno, toks[5].col,
                                "direction must be L or R, found '" +
                                    toks[5].text + "'");
      r.to = name_at(6, "state");
      spec.machine.rules.push_back(r);
    } else if (key == "tape") {
      mark_once();
      have_tape = true;
      for (std::size_t i = 1; i < toks.size(); ++i)
        spec.window.push_back(name_at(i, "symbol"));
    } else if (key == "head") {
      mark_once();
      have_head = true;
      if (toks.size() != 2)
        throw MachineParseError(lineno, toks[0].col, "head takes one index");
      const std::string& s = toks[1].text;
      if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw MachineParseError(lineno, toks[1].col,
                                "head index must be a nonnegative integer");
      spec.head = std::stoull(s);
    } else if (key == "reserved") {
      mark_once();
      for (std::size_t i = 1; i < toks.size(); ++i) {
        auto eq = toks[i].text.find('=');
        if (eq == std::string::npos)
          throw MachineParseError(lineno, toks[i].col,
                                  "reserved entries look like e=<name>");
        std::string k = toks[i].text.substr(0, eq);
        std::string v = toks[i].text.substr(eq + 1);
        if (!valid_name(v))
          throw MachineParseError(lineno, toks[i].col,
                                  "invalid reserved name '" + v + "'");
        if (k == "e") spec.reserved.e = Name(v);
        else if (k == "l") spec.reserved.l = Name(v);
        else if (k == "l1") spec.reserved.l1 = Name(v);
        else if (k == "r") spec.reserved.r = Name(v);
        else if (k == "r1") spec.reserved.r1 = Name(v);
        else
          throw MachineParseError(lineno, toks[i].col,
                                  "unknown reserved key '" + k + "'");
      }
    } else {
      throw MachineParseError(lineno, toks[0].col, "unknown key '" + key + ":'");
    }
  }

  for (const char* req : {"alphabet", "blank", "states", "start"})
    if (!seen.count(req))
      throw MachineParseError(0, 0, std::string("missing '") + req + ":'");
  (void)have_tape;
  if (have_head && !spec.window.empty() && spec.head >= spec.window.size())
    throw MachineParseError(seen["head"], 1,
                            "head index " + std::to_string(spec.head) +
                                " is outside the tape window (size " +
                                std::to_string(spec.window.size()) + ")");
  if (spec.window.empty() && spec.head != 0)
    throw MachineParseError(seen["head"], 1, "head must be 0 on an empty tape");

  std::vector<Violation> vs = validate(spec.machine);
  if (!vs.empty())
    throw MachineParseError(0, 0, "machine not valid: " + vs.front().message);
  for (const auto& s : spec.window)
    if (std::find(spec.machine.alphabet.begin(), spec.machine.alphabet.end(), s) ==
        spec.machine.alphabet.end())
      throw MachineParseError(seen["tape"], 1,
                              "tape symbol '" + s.id + "' is not in the alphabet");
  try {
    validate_reserved(spec.machine, spec.reserved);
  } catch (const std::invalid_argument& ex) {
    throw MachineParseError(0, 0, ex.what());
  }
  return spec;
}

std::string render_machine(const MachineSpec& spec) {
  std::ostringstream out;
  out << "alphabet:";
  for (const auto& s : spec.machine.alphabet) out << ' ' << s.id;
  out << "\nblank: " << spec.machine.blank.id << "\nstates:";
  for (const auto& q : spec.machine.states) out << ' ' << q.id;
  out << "\nstart: " << spec.machine.start.id << '\n';
  for (const auto& r : spec.machine.rules)
    out << "rule: " << r.from.id << ' ' << r.read.id << " -> " << r.write.id << ' '
        << (r.move == Dir::L ? 'L' : 'R') << ' ' << r.to.id << '\n';
  out << "tape:";
  for (const auto& s : spec.window) out << ' ' << s.id;
  out << "\nhead: " << spec.head << '\n';
  out << "reserved: e=" << spec.reserved.e.id << " l=" << spec.reserved.l.id
      << " l1=" << spec.reserved.l1.id << " r=" << spec.reserved.r.id
      << " r1=" << spec.reserved.r1.id << '\n';
  return out.str();
}

}  // namespace tmpc
