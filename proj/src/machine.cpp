#include "tmlab/machine.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace tmlab {

char move_char(Move m) {
  switch (m) {
    case Move::Left: return 'L';
    case Move::Right: return 'R';
    case Move::Stay: return 'S';
  }
  return '?';
}

std::optional<StateId> MachineSpec::find_state(std::string_view name) const {
  auto it = state_ids_.find(std::string(name));
  if (it == state_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<Symbol> MachineSpec::find_symbol(std::string_view name) const {
  auto it = symbol_ids_.find(std::string(name));
  if (it == symbol_ids_.end()) return std::nullopt;
  return it->second;
}

std::vector<Symbol> MachineSpec::parse_input(std::string_view text) const {
  std::vector<Symbol> word;
  word.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    auto s = find_symbol(std::string_view(&text[i], 1));
    if (!s || !is_input_symbol(*s)) {
      throw Error(ErrorCode::InvalidInput,
                  "input symbol '" + std::string(1, text[i]) + "' at position " +
                      std::to_string(i) + " is not in the input alphabet");
    }
    word.push_back(*s);
  }
  return word;
}

std::string MachineSpec::format_input(std::span<const Symbol> word) const {
  std::string out;
  for (Symbol s : word) out += symbol_names_[s];
  return out;
}

void MachineSpec::build_index() {
  const std::size_t slots = state_names_.size() * symbol_names_.size();
  std::vector<std::uint32_t> counts(slots + 1, 0);
  for (const Transition& t : transitions_) {
    ++counts[static_cast<std::size_t>(t.from) * symbol_names_.size() + t.read];
  }
  slot_begin_.assign(slots + 1, 0);
  for (std::size_t i = 0; i < slots; ++i) slot_begin_[i + 1] = slot_begin_[i] + counts[i];
  by_slot_.assign(transitions_.size(), 0);
  std::vector<std::uint32_t> fill(slot_begin_.begin(), slot_begin_.end() - 1);
  for (TransitionId id = 0; id < transitions_.size(); ++id) {
    const Transition& t = transitions_[id];
    by_slot_[fill[static_cast<std::size_t>(t.from) * symbol_names_.size() + t.read]++] = id;
  }
}

namespace {

// Names must survive export_machine_text and parse_machine_text.
void check_name(const std::string& name, const char* what) {
  const bool bad = name.empty() || name.find_first_of("#(), \t\r\n") != std::string::npos;
  if (bad) throw Error(ErrorCode::InvalidArgument, std::string("invalid ") + what + " name '" + name + "'");
}

}  // namespace

StateId MachineBuilder::state(const std::string& name) {
  check_name(name, "state");
  auto it = spec_.state_ids_.find(name);
  if (it != spec_.state_ids_.end()) return it->second;
  const auto id = static_cast<StateId>(spec_.state_names_.size());
  spec_.state_names_.push_back(name);
  spec_.state_ids_.emplace(name, id);
  spec_.accepting_.push_back(0);
  spec_.rejecting_.push_back(0);
  if (!initial_set_) {
    initial_ = id;
    initial_set_ = true;
  }
  return id;
}

Symbol MachineBuilder::symbol(const std::string& name, bool input) {
  check_name(name, "symbol");
  auto it = spec_.symbol_ids_.find(name);
  if (it != spec_.symbol_ids_.end()) {
    if (input && !spec_.is_input_[it->second]) {
      spec_.is_input_[it->second] = 1;
      spec_.input_alphabet_.push_back(it->second);
    }
    return it->second;
  }
  const auto id = static_cast<Symbol>(spec_.symbol_names_.size());
  spec_.symbol_names_.push_back(name);
  spec_.symbol_ids_.emplace(name, id);
  spec_.is_input_.push_back(input ? 1 : 0);
  if (input) spec_.input_alphabet_.push_back(id);
  return id;
}

void MachineBuilder::set_blank(Symbol s) { blank_ = s; }

void MachineBuilder::set_accepting(StateId q) { spec_.accepting_.at(q) = 1; }

void MachineBuilder::set_rejecting(StateId q) { spec_.rejecting_.at(q) = 1; }

void MachineBuilder::add(StateId from, Symbol read, StateId to, Symbol write, Move move) {
  if (from >= state_count() || to >= state_count() || read >= symbol_count() ||
      write >= symbol_count()) {
    throw Error(ErrorCode::InvalidArgument, "transition references an undeclared state or symbol");
  }
  spec_.transitions_.push_back({from, read, to, write, move});
}

void MachineBuilder::prune_unreachable() {
  const std::size_t n = state_count();
  std::vector<std::vector<StateId>> succ(n);
  for (const Transition& t : spec_.transitions_) succ[t.from].push_back(t.to);
  std::vector<std::uint8_t> seen(n, 0);
  std::vector<StateId> stack{initial_};
  seen[initial_] = 1;
  while (!stack.empty()) {
    StateId q = stack.back();
    stack.pop_back();
    for (StateId r : succ[q]) {
      if (!seen[r]) {
        seen[r] = 1;
        stack.push_back(r);
      }
    }
  }
  for (StateId q = 0; q < n; ++q) {
    if (spec_.accepting_[q] || spec_.rejecting_[q]) seen[q] = 1;
  }
  std::vector<StateId> remap(n, 0);
  MachineSpec pruned;
  pruned.symbol_names_ = spec_.symbol_names_;
  pruned.symbol_ids_ = spec_.symbol_ids_;
  pruned.is_input_ = spec_.is_input_;
  pruned.input_alphabet_ = spec_.input_alphabet_;
  for (StateId q = 0; q < n; ++q) {
    if (!seen[q]) continue;
    remap[q] = static_cast<StateId>(pruned.state_names_.size());
    pruned.state_names_.push_back(spec_.state_names_[q]);
    pruned.state_ids_.emplace(spec_.state_names_[q], remap[q]);
    pruned.accepting_.push_back(spec_.accepting_[q]);
    pruned.rejecting_.push_back(spec_.rejecting_[q]);
  }
  for (const Transition& t : spec_.transitions_) {
    if (!seen[t.from]) continue;
    pruned.transitions_.push_back({remap[t.from], t.read, remap[t.to], t.write, t.move});
  }
  initial_ = remap[initial_];
  spec_ = std::move(pruned);
}

MachineSpec MachineBuilder::build() {
  if (!initial_set_) throw Error(ErrorCode::InvalidArgument, "machine has no states");
  if (!blank_) throw Error(ErrorCode::InvalidArgument, "machine has no blank symbol");
  MachineSpec out = spec_;
  out.blank_ = *blank_;
  out.initial_ = initial_;
  out.build_index();
  return out;
}

std::vector<Violation> validate_machine(const MachineSpec& spec) {
  std::vector<Violation> report;
  auto describe = [&](const Transition& t) {
    return "(" + spec.state_name(t.from) + ", " + spec.symbol_name(t.read) + ") -> (" +
           spec.state_name(t.to) + ", " + spec.symbol_name(t.write) + ", " +
           move_char(t.move) + ")";
  };
  if (spec.is_input_symbol(spec.blank())) {
    report.push_back({"blank symbol '" + spec.symbol_name(spec.blank()) +
                      "' is declared as an input symbol"});
  }
  for (StateId q = 0; q < spec.state_count(); ++q) {
    if (spec.is_accepting(q) && spec.is_rejecting(q)) {
      report.push_back({"state " + spec.state_name(q) + " is both accepting and rejecting"});
    }
  }
  for (const Transition& t : spec.transitions()) {
    if (t.write == spec.blank()) {
      report.push_back({"transition " + describe(t) + " writes the blank symbol"});
    }
    if (spec.is_halting(t.from)) {
      report.push_back({"transition " + describe(t) + " leaves halting state " +
                        spec.state_name(t.from)});
    }
  }
  return report;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> words(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

[[noreturn]] void parse_fail(int line, const std::string& msg) {
  throw Error(ErrorCode::Parse, "line " + std::to_string(line) + ": " + msg);
}

// "(a, b, c)" -> {"a","b","c"}
std::vector<std::string> tuple_items(std::string_view s, int line) {
  std::string t = trim(s);
  if (t.size() < 2 || t.front() != '(' || t.back() != ')') {
    parse_fail(line, "expected a parenthesised tuple, got '" + t + "'");
  }
  std::vector<std::string> items;
  std::string cur;
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    if (t[i] == ',') {
      items.push_back(trim(cur));
      cur.clear();
    } else {
      cur += t[i];
    }
  }
  items.push_back(trim(cur));
  return items;
}

}  // namespace

MachineSpec parse_machine_text(std::string_view text) {
  std::vector<std::string> states, input, tape, accept, reject;
  std::string blank, initial;
  struct RawTransition {
    int line;
    std::string from, read, to, write, move;
  };
  std::vector<RawTransition> raw;
  bool in_transitions = false;
  int initial_line = 0, accept_line = 0, reject_line = 0;

  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '(') {
      if (!in_transitions) parse_fail(lineno, "transition outside the 'transitions:' section");
      auto arrow = t.find("->");
      if (arrow == std::string::npos) parse_fail(lineno, "missing '->'");
      auto lhs = tuple_items(std::string_view(t).substr(0, arrow), lineno);
      auto rhs = tuple_items(std::string_view(t).substr(arrow + 2), lineno);
      if (lhs.size() != 2) parse_fail(lineno, "left side must be (state, symbol)");
      if (rhs.size() != 3) parse_fail(lineno, "right side must be (state, symbol, L|R|S)");
      raw.push_back({lineno, lhs[0], lhs[1], rhs[0], rhs[1], rhs[2]});
      continue;
    }
    auto colon = t.find(':');
    if (colon == std::string::npos) parse_fail(lineno, "expected 'key: values'");
    std::string key = trim(std::string_view(t).substr(0, colon));
    auto values = words(std::string_view(t).substr(colon + 1));
    in_transitions = false;
    if (key == "states") {
      states.insert(states.end(), values.begin(), values.end());
    } else if (key == "input") {
      input.insert(input.end(), values.begin(), values.end());
    } else if (key == "tape") {
      tape.insert(tape.end(), values.begin(), values.end());
    } else if (key == "blank" || key == "initial") {
      if (values.size() != 1) parse_fail(lineno, "'" + key + "' takes exactly one value");
      (key == "blank" ? blank : initial) = values[0];
      if (key == "initial") initial_line = lineno;
    } else if (key == "accept") {
      accept_line = lineno;
      accept.insert(accept.end(), values.begin(), values.end());
    } else if (key == "reject") {
      reject_line = lineno;
      reject.insert(reject.end(), values.begin(), values.end());
    } else if (key == "transitions") {
      if (!values.empty()) parse_fail(lineno, "'transitions:' takes no values");
      in_transitions = true;
    } else {
      parse_fail(lineno, "unknown key '" + key + "'");
    }
  }
  if (states.empty()) throw Error(ErrorCode::Parse, "no 'states:' declared");
  if (blank.empty()) throw Error(ErrorCode::Parse, "no 'blank:' declared");

  MachineBuilder b;
  for (const auto& q : states) b.state(q);
  for (const auto& a : input) {
    if (a.size() != 1) throw Error(ErrorCode::Parse, "input symbol '" + a + "' must be one character");
    b.symbol(a, true);
  }
  b.set_blank(b.symbol(blank));
  for (const auto& g : tape) b.symbol(g);

  auto need_state = [&](const std::string& name, int ln) -> StateId {
    auto it = std::find(states.begin(), states.end(), name);
    if (it == states.end()) parse_fail(ln, "undeclared state '" + name + "'");
    return b.state(name);
  };
  auto need_symbol = [&](const std::string& name, int ln) -> Symbol {
    if (name != blank && std::find(input.begin(), input.end(), name) == input.end() &&
        std::find(tape.begin(), tape.end(), name) == tape.end()) {
      parse_fail(ln, "undeclared symbol '" + name + "'");
    }
    return b.symbol(name);
  };

  b.set_initial(initial.empty() ? b.state(states.front()) : need_state(initial, initial_line));
  for (const auto& q : accept) b.set_accepting(need_state(q, accept_line));
  for (const auto& q : reject) b.set_rejecting(need_state(q, reject_line));
  for (const auto& r : raw) {
    Move m;
    if (r.move == "L") m = Move::Left;
    else if (r.move == "R") m = Move::Right;
    else if (r.move == "S") m = Move::Stay;
    else parse_fail(r.line, "move must be L, R or S, got '" + r.move + "'");
    b.add(need_state(r.from, r.line), need_symbol(r.read, r.line), need_state(r.to, r.line),
          need_symbol(r.write, r.line), m);
  }
  return b.build();
}

MachineSpec load_machine_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::Io, "cannot open machine file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_machine_text(ss.str());
}

std::string export_machine_text(const MachineSpec& spec) {
  std::ostringstream out;
  auto list = [&](const char* key, auto pred) {
    out << key << ":";
    for (StateId q = 0; q < spec.state_count(); ++q) {
      if (pred(q)) out << ' ' << spec.state_name(q);
    }
    out << '\n';
  };
  list("states", [](StateId) { return true; });
  out << "input:";
  for (Symbol a : spec.input_alphabet()) out << ' ' << spec.symbol_name(a);
  out << "\ntape:";
  for (Symbol s = 0; s < spec.symbol_count(); ++s) {
    if (!spec.is_input_symbol(s) && s != spec.blank()) out << ' ' << spec.symbol_name(s);
  }
  out << "\nblank: " << spec.symbol_name(spec.blank()) << '\n';
  out << "initial: " << spec.state_name(spec.initial_state()) << '\n';
  list("accept", [&](StateId q) { return spec.is_accepting(q); });
  list("reject", [&](StateId q) { return spec.is_rejecting(q); });
  out << "transitions:\n";
  for (const Transition& t : spec.transitions()) {
    out << "(" << spec.state_name(t.from) << ", " << spec.symbol_name(t.read) << ") -> ("
        << spec.state_name(t.to) << ", " << spec.symbol_name(t.write) << ", "
        << move_char(t.move) << ")\n";
  }
  return out.str();
}

}  // namespace tmlab
