// Local analysis of crossing sequences: one-cell compatibility, the
// finite automaton whose states are bounded crossing sequences, and the
// cut-and-paste recombination of two computations.

#ifndef TMLAB_CROSSING_HPP_
#define TMLAB_CROSSING_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "tmlab/machine.hpp"
#include "tmlab/metering.hpp"
#include "tmlab/run.hpp"

namespace tmlab {

enum class Terminal : std::uint8_t { None, AcceptedInSquare, RejectedInSquare };

// One possible behaviour of a single tape square, given the states in which
// it is entered from the left.
struct LocalRunOutcome {
  StateSeq right_sequence;
  Terminal terminal = Terminal::None;
  std::size_t left_consumed = 0;
  auto operator<=>(const LocalRunOutcome&) const = default;
};

struct LocalRuns {
  std::vector<LocalRunOutcome> outcomes;  // sorted, no duplicates
  bool truncated = false;          // some right sequence exceeded k_cap
  bool stationary_pruned = false;  // some stay chain exceeded |Q|*|Gamma|
};

// Every local behaviour of a square holding `symbol`, entered from the left
// in the odd entries of `left` and left to the left in its even entries.
// Re-entries from the right are guessed among the targets of Left moves.
LocalRuns local_runs(const MachineSpec& spec, std::span<const StateId> left, Symbol symbol,
                     std::size_t k_cap);

// True iff some local run consumes all of `left`, emits exactly `right` and
// ends with `terminal` (None: the head leaves the square for good).
bool compatible(const MachineSpec& spec, std::span<const StateId> left,
                std::span<const StateId> right, Symbol symbol, std::size_t k_cap,
                Terminal terminal = Terminal::None);

// Lazily evaluated facts about the blank region to the right of the input.
// accepting(c): a blank region whose left boundary carries c can complete an
// accepting computation. returning(c): it can absorb c with the head ending
// to its left and nothing halting inside it.
class BlankAnalysis {
 public:
  BlankAnalysis(const MachineSpec& spec, std::size_t k);
  bool accepting(const StateSeq& c);
  bool returning(const StateSeq& c);
  std::size_t explored() const { return outcomes_.size(); }

 private:
  struct Node {
    std::vector<StateSeq> next;       // None outcomes
    std::vector<StateSeq> accept_at;  // right sequences of in-square accepts
  };
  const Node& node(const StateSeq& c);
  void solve(const StateSeq& root);

  const MachineSpec& spec_;
  std::size_t k_;
  std::map<StateSeq, Node> outcomes_;
  std::map<StateSeq, bool> accepting_;
  std::map<StateSeq, bool> returning_;
};

// Enumerates the domain of sequences of length <= k (odd entries: targets of
// Right moves or the initial state; even entries: targets of Left moves).
// Throws CapExceeded when the domain exceeds `domain_cap`.
std::set<StateSeq> blank_accepting_set(const MachineSpec& spec, std::size_t k,
                                       std::size_t domain_cap = 1u << 20);

struct NfaState {
  StateSeq seq;
  bool halted = false;  // the computation already accepted to the left
  auto operator<=>(const NfaState&) const = default;
};

// States are reachable crossing sequences (plus the halted flag); the
// universal accepting sink is the halted empty sequence.
struct NfaSpec {
  std::size_t k = 0;
  std::vector<std::string> alphabet;      // input symbol names
  std::vector<std::string> state_names;   // machine state names
  std::vector<NfaState> states;
  std::size_t initial = 0;
  std::vector<std::uint8_t> final;
  // delta[state][symbol index] -> sorted target states
  std::vector<std::vector<std::vector<std::uint32_t>>> delta;
  bool truncated = false;  // some local run exceeded k

  std::optional<std::size_t> sink() const;
};

struct NfaBuildOptions {
  std::size_t max_states = 1u << 20;
};

NfaSpec build_crossing_nfa(const MachineSpec& spec, std::size_t k,
                           const NfaBuildOptions& options = {});

// Input symbols are indices into nfa.alphabet.
bool nfa_run(const NfaSpec& nfa, std::span<const std::uint32_t> word);
bool nfa_run_text(const NfaSpec& nfa, const std::string& word);

std::string export_nfa_text(const NfaSpec& nfa);
NfaSpec parse_nfa_text(const std::string& text);

enum class Decision : std::uint8_t { Accept, Reject, Inconclusive };

// Machine acceptance for one word; the default explores all computations.
using Decider = std::function<Decision(std::span<const Symbol>)>;
Decider exhaustive_decider(const MachineSpec& spec, std::uint64_t fuel,
                           std::uint64_t max_branches);

struct Comparison {
  std::optional<std::vector<Symbol>> disagreement;  // shortest, then lexicographic
  bool machine_accepts = false;                     // at the disagreement
  std::vector<std::vector<Symbol>> inconclusive;
  std::uint64_t words_checked = 0;
};

Comparison compare_machine_nfa(const MachineSpec& spec, const NfaSpec& nfa, std::size_t max_len,
                               const Decider& decider);
Comparison compare_machine_nfa(const MachineSpec& spec, const NfaSpec& nfa, std::size_t max_len,
                               std::uint64_t fuel);

struct Splice {
  Trace trace;
  StateSeq shared;
  bool odd = false;  // odd shared sequence: outcome follows the first trace
};

// Computation on u'v from a computation on uv (cut at b1 = |u|) and one on
// u'v' (cut at b2 = |u'|) sharing the crossing sequence at the cut.
Splice cut_and_paste(const MachineSpec& spec, const Trace& first, std::size_t b1,
                     const Trace& second, std::size_t b2);

}  // namespace tmlab

#endif  // TMLAB_CROSSING_HPP_
