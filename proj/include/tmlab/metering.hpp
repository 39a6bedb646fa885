// Time and crossing-sequence resources of computations, and the strong,
// accept and weak measures over all computations on an input.

#ifndef TMLAB_METERING_HPP_
#define TMLAB_METERING_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tmlab/machine.hpp"
#include "tmlab/run.hpp"

namespace tmlab {

using StateSeq = std::vector<StateId>;

// Boundary b separates cells b-1 and b. Odd positions (1st, 3rd, ...) are
// left-to-right crossings, even positions right-to-left; each entry is the
// state entered by the crossing move.
struct CrossingSequence {
  std::size_t boundary = 0;
  StateSeq states;
  bool operator==(const CrossingSequence&) const = default;
};

using CrossingMap = std::map<std::size_t, CrossingSequence>;

CrossingMap extract_crossing_sequences(const MachineSpec& spec, const Trace& trace);

// Crossing sequence at `boundary`, empty if never crossed. Boundary 0 is the
// virtual left edge, crossed once in the initial state.
StateSeq crossing_at(const MachineSpec& spec, const CrossingMap& map, std::size_t boundary);

struct ResourceReport {
  std::uint64_t time = 0;
  std::size_t max_crossing = 0;
  CrossingMap per_boundary;
  Outcome outcome = Outcome::Hung;
  std::uint64_t left_moves = 0;
  std::uint64_t right_moves = 0;
  bool partial = false;  // computation cut off by fuel
};

ResourceReport trace_resources(const MachineSpec& spec, const Trace& trace);

// Resources of one run without materialising the trace; crossing sequences
// are kept only as per-boundary lengths. `script` may be null for a
// deterministic run.
struct RunSummary {
  Outcome outcome = Outcome::Hung;
  std::uint64_t time = 0;
  std::size_t max_crossing = 0;
  std::uint64_t left_moves = 0;
  std::uint64_t right_moves = 0;
  std::vector<std::uint32_t> crossing_lengths;  // index = boundary
};

RunSummary meter_run(const MachineSpec& spec, std::span<const Symbol> input,
                     const GuessScript* script, std::uint64_t fuel);

enum class Resource : std::uint8_t { Time, Crossing };
enum class MeasureKind : std::uint8_t { Strong, Accept, Weak };
enum class Exactness : std::uint8_t { Exact, LowerBound, UpperBound };

const char* resource_name(Resource r);
const char* measure_name(MeasureKind k);
const char* exactness_name(Exactness e);
std::optional<Resource> parse_resource(const std::string& s);
std::optional<MeasureKind> parse_measure(const std::string& s);

struct Measurement {
  std::uint64_t value = 0;
  Exactness exactness = Exactness::Exact;
  bool accepted = false;       // some accepting computation was seen
  std::uint64_t computations = 0;
};

Measurement measure_input(const MachineSpec& spec, std::span<const Symbol> input,
                          Resource resource, MeasureKind kind, std::uint64_t fuel,
                          std::uint64_t max_branches);

// One computation selected by `script`. Weak values are upper bounds,
// strong/accept values lower bounds.
Measurement measure_scripted(const MachineSpec& spec, std::span<const Symbol> input,
                             Resource resource, MeasureKind kind, const GuessScript& script,
                             std::uint64_t fuel);

struct LengthOptions {
  std::uint64_t fuel = 10000;
  std::uint64_t max_branches = 100000;
  std::uint64_t input_cap = 1u << 16;  // max number of words of length n
};

// r(n): the worst input of length n.
Measurement measure_length(const MachineSpec& spec, std::size_t n, Resource resource,
                           MeasureKind kind, const LengthOptions& options);

// Returns nullopt when no accepting computation is known for a^n.
using ScriptProvider = std::function<std::optional<GuessScript>(std::uint64_t n)>;

struct ProfileRow {
  std::uint64_t n = 0;
  Resource resource = Resource::Time;
  MeasureKind kind = MeasureKind::Strong;
  std::uint64_t value = 0;
  Exactness exactness = Exactness::Exact;
  std::string outcome;  // accepted | rejected | inconclusive | no-witness
};

struct ProfileOptions {
  LengthOptions length;
  const ScriptProvider* scripts = nullptr;  // script-provider mode when set
  unsigned threads = 1;
};

// Rows are sorted by n regardless of thread count.
std::vector<ProfileRow> profile_range(const MachineSpec& spec, std::span<const std::uint64_t> ns,
                                      Resource resource, MeasureKind kind,
                                      const ProfileOptions& options);

// Header `n,resource,measure,value,exactness,outcome`.
std::string profile_csv(std::span<const ProfileRow> rows);

}  // namespace tmlab

#endif  // TMLAB_METERING_HPP_
