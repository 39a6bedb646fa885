#include "tmlab/run.hpp"

#include <algorithm>
#include <sstream>

namespace tmlab {

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Accepted: return "accepted";
    case Outcome::Rejected: return "rejected";
    case Outcome::Hung: return "hung";
    case Outcome::FuelExhausted: return "fuel-exhausted";
  }
  return "?";
}

std::string format_script(const GuessScript& script) {
  std::string out;
  for (std::size_t i = 0; i < script.choices.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(script.choices[i]);
  }
  return out;
}

GuessScript parse_script(const std::string& text) {
  GuessScript script;
  std::string spaced = text;
  std::replace(spaced.begin(), spaced.end(), ',', ' ');
  std::istringstream in(spaced);
  std::string tok;
  while (in >> tok) {
    for (char ch : tok) {
      if (ch < '0' || ch > '9') {
        throw Error(ErrorCode::Parse, "guess script entry '" + tok + "' is not a choice index");
      }
    }
    script.choices.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
  }
  return script;
}

Configuration initial_configuration(const MachineSpec& spec, std::span<const Symbol> input) {
  for (std::size_t i = 0; i < input.size(); ++i) {
    if (input[i] >= spec.symbol_count() || !spec.is_input_symbol(input[i])) {
      throw Error(ErrorCode::InvalidInput,
                  "input position " + std::to_string(i) + " holds a non-input symbol");
    }
  }
  Configuration c;
  c.state = spec.initial_state();
  c.head = 0;
  c.tape.assign(input.begin(), input.end());
  c.frontier = input.empty() ? 0 : input.size() - 1;
  return c;
}

namespace {

// Applies t to c in place. Returns false (and leaves c untouched) for a Left
// move on cell 0.
bool apply(const MachineSpec& spec, const Transition& t, Configuration& c) {
  if (t.move == Move::Left && c.head == 0) return false;
  if (c.head >= c.tape.size()) c.tape.resize(c.head + 1, spec.blank());
  c.tape[c.head] = t.write;
  c.state = t.to;
  if (t.move == Move::Left) --c.head;
  else if (t.move == Move::Right) ++c.head;
  if (c.head > c.frontier) c.frontier = c.head;
  return true;
}

Outcome halting_outcome(const MachineSpec& spec, StateId q) {
  return spec.is_accepting(q) ? Outcome::Accepted : Outcome::Rejected;
}

template <class Chooser>
Trace run_with(const MachineSpec& spec, std::span<const Symbol> input, std::uint64_t fuel,
               Chooser&& choose) {
  Configuration c = initial_configuration(spec, input);
  Trace trace;
  trace.input.assign(input.begin(), input.end());
  for (;;) {
    if (spec.is_halting(c.state)) {
      trace.outcome = halting_outcome(spec, c.state);
      break;
    }
    const Symbol read = c.read(spec.blank());
    auto apps = spec.applicable(c.state, read);
    if (apps.empty()) {
      trace.outcome = Outcome::Hung;
      break;
    }
    if (trace.steps.size() >= fuel) {
      trace.outcome = Outcome::FuelExhausted;
      break;
    }
    const TransitionId id = apps[choose(apps, c, trace.steps.size())];
    const StateId before = c.state;
    const std::size_t head = c.head;
    if (!apply(spec, spec.transition(id), c)) {
      trace.outcome = Outcome::Hung;
      trace.hang_transition = id;
      break;
    }
    trace.steps.push_back({before, static_cast<std::uint32_t>(head), read, id});
  }
  trace.final_state = c.state;
  trace.final_head = c.head;
  trace.frontier = c.frontier;
  return trace;
}

}  // namespace

std::vector<Successor> successors(const MachineSpec& spec, const Configuration& c) {
  std::vector<Successor> out;
  if (spec.is_halting(c.state)) return out;
  for (TransitionId id : spec.applicable(c.state, c.read(spec.blank()))) {
    Configuration next = c;
    if (apply(spec, spec.transition(id), next)) out.push_back({id, std::move(next)});
  }
  return out;
}

Trace run_deterministic(const MachineSpec& spec, std::span<const Symbol> input,
                        std::uint64_t fuel) {
  return run_with(spec, input, fuel,
                  [&](std::span<const TransitionId> apps, const Configuration& c,
                      std::size_t step) -> std::size_t {
                    if (apps.size() > 1) {
                      throw Error(ErrorCode::DeterminismViolation,
                                  "nondeterministic branch at step " + std::to_string(step) +
                                      ": state " + spec.state_name(c.state) + ", head " +
                                      std::to_string(c.head) + ", symbol " +
                                      spec.symbol_name(c.read(spec.blank())) + " has " +
                                      std::to_string(apps.size()) + " transitions");
                    }
                    return 0;
                  });
}

Trace run_scripted(const MachineSpec& spec, std::span<const Symbol> input,
                   const GuessScript& script, std::uint64_t fuel) {
  std::size_t next = 0;
  return run_with(spec, input, fuel,
                  [&](std::span<const TransitionId> apps, const Configuration&,
                      std::size_t step) -> std::size_t {
                    if (apps.size() == 1) return 0;
                    if (next >= script.choices.size()) {
                      if (script.policy == ExhaustionPolicy::FirstDeclared) return 0;
                      throw Error(ErrorCode::Script, "guess script exhausted at step " +
                                                         std::to_string(step));
                    }
                    const std::uint32_t choice = script.choices[next++];
                    if (choice >= apps.size()) {
                      throw Error(ErrorCode::Script,
                                  "guess script entry " + std::to_string(next - 1) + " (" +
                                      std::to_string(choice) + ") at step " +
                                      std::to_string(step) + " exceeds the " +
                                      std::to_string(apps.size()) + " applicable transitions");
                    }
                    return choice;
                  });
}

std::string replay_mismatch(const MachineSpec& spec, const Trace& trace) {
  Configuration c;
  try {
    c = initial_configuration(spec, trace.input);
  } catch (const Error& e) {
    return e.what();
  }
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const Step& s = trace.steps[i];
    const std::string at = "step " + std::to_string(i) + ": ";
    if (s.state != c.state || s.head != c.head || s.read != c.read(spec.blank())) {
      return at + "recorded configuration differs from the replayed one";
    }
    if (s.transition >= spec.transitions().size()) return at + "unknown transition";
    const Transition& t = spec.transition(s.transition);
    if (t.from != c.state || t.read != s.read) return at + "transition not applicable";
    if (!apply(spec, t, c)) return at + "left move on cell 0";
  }
  if (trace.hang_transition) {
    const Transition& t = spec.transition(*trace.hang_transition);
    if (t.from != c.state || t.read != c.read(spec.blank()) || t.move != Move::Left ||
        c.head != 0) {
      return "recorded hang transition does not hang";
    }
  }
  if (c.state != trace.final_state || c.head != trace.final_head ||
      c.frontier != trace.frontier) {
    return "final configuration differs";
  }
  Outcome expected;
  if (spec.is_halting(c.state)) {
    expected = halting_outcome(spec, c.state);
  } else if (trace.hang_transition || spec.applicable(c.state, c.read(spec.blank())).empty()) {
    expected = Outcome::Hung;
  } else {
    expected = Outcome::FuelExhausted;
  }
  if (expected != trace.outcome) {
    return std::string("outcome ") + outcome_name(trace.outcome) + " but replay gives " +
           outcome_name(expected);
  }
  return {};
}

Configuration final_configuration(const MachineSpec& spec, const Trace& trace) {
  Configuration c = initial_configuration(spec, trace.input);
  for (const Step& s : trace.steps) apply(spec, spec.transition(s.transition), c);
  return c;
}

namespace {

struct UndoRecord {
  StateId state;
  std::uint32_t head;
  std::uint32_t frontier;
  Symbol old_symbol;
  std::uint32_t tape_size;
  std::int64_t boundary;  // crossing counter bumped by this move, or -1
  std::uint8_t move;
};

struct Frame {
  std::span<const TransitionId> apps;
  std::size_t next;
  std::size_t undo_mark;
  std::uint64_t depth;
};

}  // namespace

ExploreStats explore(const MachineSpec& spec, std::span<const Symbol> input,
                     const ExploreOptions& options,
                     const std::function<bool(const LeafView&)>& on_leaf) {
  Configuration c = initial_configuration(spec, input);
  ExploreStats stats;
  std::vector<Frame> frames;
  std::vector<UndoRecord> undo;
  std::vector<Step> steps;
  std::vector<std::uint32_t> crossings(options.count_crossings ? c.tape.size() + 2 : 0, 0);
  std::uint64_t depth = 0, lefts = 0, rights = 0;

  // Performs one move; returns false for a hang on cell 0.
  auto step = [&](TransitionId id) -> bool {
    const Transition& t = spec.transition(id);
    if (t.move == Move::Left && c.head == 0) return false;
    const Symbol read = c.read(spec.blank());
    if (!frames.empty()) {
      undo.push_back({c.state, static_cast<std::uint32_t>(c.head),
                      static_cast<std::uint32_t>(c.frontier), read,
                      static_cast<std::uint32_t>(c.tape.size()), -1,
                      static_cast<std::uint8_t>(t.move)});
    }
    if (options.record_steps) {
      steps.push_back({c.state, static_cast<std::uint32_t>(c.head), read, id});
    }
    std::int64_t boundary = -1;
    if (t.move == Move::Right) boundary = static_cast<std::int64_t>(c.head) + 1;
    if (t.move == Move::Left) boundary = static_cast<std::int64_t>(c.head);
    apply(spec, t, c);
    ++depth;
    if (t.move == Move::Left) ++lefts;
    if (t.move == Move::Right) ++rights;
    if (options.count_crossings && boundary >= 0) {
      if (static_cast<std::size_t>(boundary) >= crossings.size()) {
        crossings.resize(2 * static_cast<std::size_t>(boundary) + 2, 0);
      }
      ++crossings[static_cast<std::size_t>(boundary)];
    }
    if (!frames.empty()) undo.back().boundary = boundary;
    return true;
  };

  auto rollback = [&](std::size_t mark) {
    while (undo.size() > mark) {
      const UndoRecord& u = undo.back();
      c.state = u.state;
      c.head = u.head;
      c.frontier = u.frontier;
      c.tape.resize(u.tape_size, spec.blank());
      if (c.head < c.tape.size()) c.tape[c.head] = u.old_symbol;
      if (u.boundary >= 0 && options.count_crossings) --crossings[static_cast<std::size_t>(u.boundary)];
      if (u.move == static_cast<std::uint8_t>(Move::Left)) --lefts;
      if (u.move == static_cast<std::uint8_t>(Move::Right)) --rights;
      --depth;
      if (options.record_steps) steps.pop_back();
      undo.pop_back();
    }
  };

  auto leaf = [&](Outcome o, std::optional<TransitionId> hang) -> bool {
    ++stats.computations;
    if (o == Outcome::FuelExhausted) stats.fuel_truncated = true;
    LeafView v{o,
               depth,
               c.state,
               c.head,
               c.frontier,
               hang,
               std::span<const Step>(steps),
               std::span<const std::uint32_t>(crossings),
               lefts,
               rights};
    if (!on_leaf(v)) return false;
    if (stats.computations >= options.max_branches) return false;
    return true;
  };

  // Runs forward from the current configuration until a leaf is reached.
  // `pending` is a transition to apply first (after a backtrack).
  auto descend = [&](std::optional<TransitionId> pending) -> bool {
    if (pending && !step(*pending)) return leaf(Outcome::Hung, pending);
    for (;;) {
      if (spec.is_halting(c.state)) return leaf(halting_outcome(spec, c.state), std::nullopt);
      auto apps = spec.applicable(c.state, c.read(spec.blank()));
      if (apps.empty()) return leaf(Outcome::Hung, std::nullopt);
      if (depth >= options.fuel) return leaf(Outcome::FuelExhausted, std::nullopt);
      if (apps.size() > 1) frames.push_back({apps, 1, undo.size(), depth});
      if (!step(apps[0])) return leaf(Outcome::Hung, apps[0]);
    }
  };

  bool go = descend(std::nullopt);
  while (go) {
    while (!frames.empty() && frames.back().next == frames.back().apps.size()) {
      rollback(frames.back().undo_mark);
      frames.pop_back();
    }
    if (frames.empty()) break;
    Frame& f = frames.back();
    rollback(f.undo_mark);
    const TransitionId id = f.apps[f.next++];
    go = descend(id);
  }
  if (!go) {
    // Stopped before exhausting the tree: anything left is unexplored.
    bool rest = false;
    for (const Frame& f : frames) rest = rest || f.next < f.apps.size();
    if (rest) stats.branch_truncated = true;
  }
  return stats;
}

Enumeration enumerate_computations(const MachineSpec& spec, std::span<const Symbol> input,
                                   std::uint64_t fuel, std::uint64_t max_branches) {
  Enumeration out;
  ExploreOptions opt;
  opt.fuel = fuel;
  opt.max_branches = max_branches;
  opt.record_steps = true;
  out.stats = explore(spec, input, opt, [&](const LeafView& v) {
    Trace t;
    t.input.assign(input.begin(), input.end());
    t.steps.assign(v.steps.begin(), v.steps.end());
    t.outcome = v.outcome;
    t.final_state = v.state;
    t.final_head = v.head;
    t.frontier = v.frontier;
    t.hang_transition = v.hang_transition;
    out.traces.push_back(std::move(t));
    return true;
  });
  return out;
}

}  // namespace tmlab
