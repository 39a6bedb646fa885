// Executing one-tape machines: single runs, scripted nondeterminism and
// exhaustive enumeration of the computation tree.

#ifndef TMLAB_RUN_HPP_
#define TMLAB_RUN_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tmlab/machine.hpp"

namespace tmlab {

enum class Outcome : std::uint8_t { Accepted, Rejected, Hung, FuelExhausted };

const char* outcome_name(Outcome o);

// Cells past `tape.size()` are implicitly blank.
struct Configuration {
  StateId state = 0;
  std::size_t head = 0;
  std::vector<Symbol> tape;
  std::size_t frontier = 0;

  Symbol read(Symbol blank) const { return head < tape.size() ? tape[head] : blank; }
  bool operator==(const Configuration&) const = default;
};

// One move. The configuration before the move is (state, head, tape as
// produced by the earlier steps); `read` is the scanned symbol.
struct Step {
  StateId state;
  std::uint32_t head;
  Symbol read;
  TransitionId transition;
  bool operator==(const Step&) const = default;
};

struct Trace {
  std::vector<Symbol> input;
  std::vector<Step> steps;
  Outcome outcome = Outcome::Hung;
  StateId final_state = 0;
  std::size_t final_head = 0;
  std::size_t frontier = 0;
  // Set when the computation hung by choosing a Left move on cell 0; that
  // move is not counted in `steps`.
  std::optional<TransitionId> hang_transition;

  std::uint64_t time() const { return steps.size(); }
  bool operator==(const Trace&) const = default;
};

enum class ExhaustionPolicy : std::uint8_t { Fail, FirstDeclared };

// Choices are consumed only at branch points (more than one applicable
// transition) and index the applicable transitions in declaration order.
struct GuessScript {
  std::vector<std::uint32_t> choices;
  ExhaustionPolicy policy = ExhaustionPolicy::Fail;
};

std::string format_script(const GuessScript& script);
GuessScript parse_script(const std::string& text);

Configuration initial_configuration(const MachineSpec& spec, std::span<const Symbol> input);

struct Successor {
  TransitionId transition;
  Configuration next;
};

// A Left move on cell 0 has no successor.
std::vector<Successor> successors(const MachineSpec& spec, const Configuration& c);

Trace run_deterministic(const MachineSpec& spec, std::span<const Symbol> input,
                        std::uint64_t fuel);
Trace run_scripted(const MachineSpec& spec, std::span<const Symbol> input,
                   const GuessScript& script, std::uint64_t fuel);

// Re-executes the trace's transitions from the initial configuration.
// Returns an empty string when the trace is reproduced exactly, otherwise a
// description of the first mismatch.
std::string replay_mismatch(const MachineSpec& spec, const Trace& trace);

// Tape contents after the whole trace.
Configuration final_configuration(const MachineSpec& spec, const Trace& trace);

// Leaf of the computation tree as seen by an explorer callback.
struct LeafView {
  Outcome outcome;
  std::uint64_t time;
  StateId state;
  std::size_t head;
  std::size_t frontier;
  std::optional<TransitionId> hang_transition;
  std::span<const Step> steps;                 // empty unless recorded
  std::span<const std::uint32_t> crossings;    // per boundary, index 0 unused
  std::uint64_t left_moves;
  std::uint64_t right_moves;
};

struct ExploreOptions {
  std::uint64_t fuel = 10000;
  std::uint64_t max_branches = 100000;
  bool record_steps = false;
  bool count_crossings = false;
};

struct ExploreStats {
  std::uint64_t computations = 0;
  bool branch_truncated = false;   // stopped at max_branches
  bool fuel_truncated = false;     // some computation ran out of fuel
  bool exact() const { return !branch_truncated && !fuel_truncated; }
};

// Depth-first over all maximal computations, transitions in declaration
// order. The callback returns false to stop early (recorded as truncation).
ExploreStats explore(const MachineSpec& spec, std::span<const Symbol> input,
                     const ExploreOptions& options,
                     const std::function<bool(const LeafView&)>& on_leaf);

struct Enumeration {
  std::vector<Trace> traces;
  ExploreStats stats;
};

Enumeration enumerate_computations(const MachineSpec& spec, std::span<const Symbol> input,
                                   std::uint64_t fuel, std::uint64_t max_branches);

}  // namespace tmlab

#endif  // TMLAB_RUN_HPP_
