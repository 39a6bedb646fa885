// Multi-track unary machines built from counting phases: the shifted
// binary counter, divisibility tests, the sieve and the guessing front end,
// compiled into ordinary machine descriptions. Also the machine catalog.

#ifndef TMLAB_GADGETS_HPP_
#define TMLAB_GADGETS_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tmlab/crossing.hpp"
#include "tmlab/machine.hpp"
#include "tmlab/metering.hpp"
#include "tmlab/run.hpp"

namespace tmlab {

// Tape layout. Every cell carries
//   input  'a' or '.' (past the input; blank reads as '.')
//   edge   set on cell 0 once visited
//   P      sieve mark: -, X or Y
//   M      position of the current prime candidate
//   block  membership in the moving counter block, with first/last flags
//   C D K J S  one bit each; bit i of a value sits in the i-th block cell
//              (least significant bit in the first, leftmost cell)
// C is the counter, K the stored modulus (track T), D the second counter,
// J the second modulus and S flags a prime modulus. Fields outside the
// block are zero.
struct Track {
  std::string name;
  std::vector<std::string> values;
};

struct TrackLayout {
  std::vector<Track> tracks;
  bool has(const std::string& name) const;
};

enum class Atom : std::uint8_t {
  CounterZero,
  SecondZero,
  ModulusIsTwo,
  ModulusPowerOfTwo,
  InputEmpty,  // only before the first block exists
  Always,
};

struct Literal {
  Atom atom = Atom::Always;
  bool negated = false;
};

// Writes the block at the origin: K = modulus (if any), C = 0, and the
// prime marker M at `marker_at`.
struct InitBlock {
  std::optional<std::uint32_t> modulus;
  std::optional<std::uint32_t> marker_at;
  bool prime_flag = false;
};

// Guesses s >= 1 and writes K = 2^s and J = t with 2^s < t < 2^(s+1) over
// cells 0..s. Per cell i < s the choice is the J bit (index 0 or 1); at
// cell s the choice index is 2. Guessing past the input rejects.
struct GuessBinary {};

enum class SecondCounter : std::uint8_t { None, OnWrap, EveryStep };
enum class Sieve : std::uint8_t { None, X, XY };

// Counts the input from the origin, shifting the block one cell right per
// counted cell. With `reset` the counter runs modulo K. The second counter
// D runs modulo K on every wrap of C, or modulo J on every step. On a wrap
// the sieve marks the new position: X marks 0 -> X; XY marks 0 -> X and
// X -> Y only while S is set. The marker cell M is never marked.
struct CountFactor {
  bool reset = true;
  SecondCounter second = SecondCounter::None;
  Sieve sieve = Sieve::None;
};

// Halts (accepting or rejecting) when every literal holds.
struct Branch {
  bool accept = true;
  std::vector<Literal> when;
};

// From the end of the input: drops the block, moves M to the first cell
// right of it that is unmarked (or X-marked when accept_x) and starts a
// fresh block there with S = "cell was unmarked". A scan past cell n+1
// enters the rejecting state horizon_fault.
struct NextPrimeScan {
  bool accept_x = false;
};

// Moves the block back to the origin while counting the distance, then
// turns the count into the modulus K.
struct ShiftBack {};

struct LoopWhile;
using Phase = std::variant<InitBlock, GuessBinary, CountFactor, Branch, NextPrimeScan, ShiftBack,
                           LoopWhile>;

// Runs `body` while every literal in `condition` holds; an empty condition
// loops forever.
struct LoopWhile {
  std::vector<Literal> condition;
  std::vector<Phase> body;
};

struct GadgetProgram {
  std::string name;
  std::vector<Phase> phases;
};

inline Branch accept_if(std::vector<Literal> when) { return {true, std::move(when)}; }
inline Branch reject_if(std::vector<Literal> when) { return {false, std::move(when)}; }

// The tracks a program touches.
TrackLayout layout_for(const GadgetProgram& program);

// Throws ErrorCode::Compile when phases do not chain or need tracks the
// layout lacks. Running off the end of the program rejects.
MachineSpec compile(const GadgetProgram& program, const TrackLayout& layout);
MachineSpec compile(const GadgetProgram& program);

GadgetProgram program_L0();
GadgetProgram program_LAM();
GadgetProgram program_coLAM();
// InitBlock, CountFactor without reset, accept: counts the whole input.
GadgetProgram program_counter();

// Binary value of column `column` ('C', 'D', 'K', 'J', 'S') of the block
// whose first cell is at `first`, read from a tape.
std::uint64_t block_value(const MachineSpec& spec, const std::vector<Symbol>& tape,
                          std::size_t first, char column);
std::optional<std::size_t> block_start(const MachineSpec& spec, const std::vector<Symbol>& tape);

// Choices s..: bits of t below bit s, then 2. Throws NoWitness when q(n) is
// a power of two or n = 0.
GuessScript guess_script_coLAM(std::uint64_t n);

struct MachineCatalogEntry {
  std::string name;
  std::shared_ptr<const MachineSpec> spec;
  std::function<bool(std::uint64_t)> oracle;  // membership of a^n
  bool deterministic = true;
  MeasureKind measure = MeasureKind::Strong;
  std::string time_bound;
  std::string crossing_bound;
  ScriptProvider scripts;  // empty for deterministic entries
  std::function<Decision(std::span<const Symbol>)> decider;
};

const MachineCatalogEntry& machine_L0();
const MachineCatalogEntry& machine_LAM();
const MachineCatalogEntry& machine_coLAM();

// L0, LAM, coLAM, counter, sweeper, mod2, mod3, bounce, zigzag.
std::vector<std::string> catalog_names();
const MachineCatalogEntry& catalog_entry(const std::string& name);

}  // namespace tmlab

#endif  // TMLAB_GADGETS_HPP_
