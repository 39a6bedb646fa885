// One-tape off-line Turing machines: the immutable machine description,
// its builder, structural validation and the plain-text spec format.

#ifndef TMLAB_MACHINE_HPP_
#define TMLAB_MACHINE_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tmlab {

using StateId = std::uint32_t;
using Symbol = std::uint32_t;
using TransitionId = std::uint32_t;

enum class Move : std::uint8_t { Left, Right, Stay };

char move_char(Move m);

enum class ErrorCode {
  InvalidArgument,
  Parse,
  InvalidInput,
  DeterminismViolation,
  Script,
  Splice,
  NoWitness,
  CapExceeded,
  Compile,
  Io,
};

// Base of every exception thrown by the library; the C API maps `code()`
// onto its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct Transition {
  StateId from;
  Symbol read;
  StateId to;
  Symbol write;
  Move move;
};

class MachineBuilder;

// Immutable after construction; safe to share between threads.
class MachineSpec {
 public:
  std::size_t state_count() const { return state_names_.size(); }
  std::size_t symbol_count() const { return symbol_names_.size(); }
  const std::string& state_name(StateId q) const { return state_names_[q]; }
  const std::string& symbol_name(Symbol s) const { return symbol_names_[s]; }
  std::optional<StateId> find_state(std::string_view name) const;
  std::optional<Symbol> find_symbol(std::string_view name) const;

  Symbol blank() const { return blank_; }
  StateId initial_state() const { return initial_; }
  bool is_input_symbol(Symbol s) const { return is_input_[s] != 0; }
  const std::vector<Symbol>& input_alphabet() const { return input_alphabet_; }
  bool is_accepting(StateId q) const { return accepting_[q] != 0; }
  bool is_rejecting(StateId q) const { return rejecting_[q] != 0; }
  bool is_halting(StateId q) const { return is_accepting(q) || is_rejecting(q); }

  // Declaration order is significant: it fixes enumeration order and the
  // meaning of guess-script choice indices.
  const std::vector<Transition>& transitions() const { return transitions_; }
  const Transition& transition(TransitionId id) const { return transitions_[id]; }

  // Transitions applicable to (state, symbol), in declaration order.
  std::span<const TransitionId> applicable(StateId q, Symbol s) const {
    const std::size_t slot = static_cast<std::size_t>(q) * symbol_names_.size() + s;
    return {by_slot_.data() + slot_begin_[slot],
            by_slot_.data() + slot_begin_[slot + 1]};
  }

  // Input text is one character per symbol; the named symbol must be in the
  // input alphabet. Throws ErrorCode::InvalidInput otherwise.
  std::vector<Symbol> parse_input(std::string_view text) const;
  std::string format_input(std::span<const Symbol> word) const;

 private:
  friend class MachineBuilder;
  void build_index();

  std::vector<std::string> state_names_;
  std::vector<std::string> symbol_names_;
  std::unordered_map<std::string, StateId> state_ids_;
  std::unordered_map<std::string, Symbol> symbol_ids_;
  std::vector<std::uint8_t> is_input_;
  std::vector<Symbol> input_alphabet_;
  std::vector<std::uint8_t> accepting_;
  std::vector<std::uint8_t> rejecting_;
  Symbol blank_ = 0;
  StateId initial_ = 0;
  std::vector<Transition> transitions_;
  std::vector<std::uint32_t> slot_begin_;
  std::vector<TransitionId> by_slot_;
};

class MachineBuilder {
 public:
  // Adding an existing name returns its id.
  StateId state(const std::string& name);
  Symbol symbol(const std::string& name, bool input = false);
  void set_blank(Symbol s);
  void set_initial(StateId q) { initial_ = q; }
  void set_accepting(StateId q);
  void set_rejecting(StateId q);
  void add(StateId from, Symbol read, StateId to, Symbol write, Move move);

  std::size_t state_count() const { return spec_.state_names_.size(); }
  std::size_t symbol_count() const { return spec_.symbol_names_.size(); }

  // Drops states unreachable from the initial state in the transition graph
  // (halting states are always kept).
  void prune_unreachable();

  MachineSpec build();

 private:
  MachineSpec spec_;
  std::optional<Symbol> blank_;
  StateId initial_ = 0;
  bool initial_set_ = false;
};

struct Violation {
  std::string message;
};

// Empty iff every structural invariant of the model holds.
std::vector<Violation> validate_machine(const MachineSpec& spec);

// Text format, see README.md for the grammar.
MachineSpec parse_machine_text(std::string_view text);
MachineSpec load_machine_file(const std::string& path);
std::string export_machine_text(const MachineSpec& spec);

}  // namespace tmlab

#endif  // TMLAB_MACHINE_HPP_
