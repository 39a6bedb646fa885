// Experiment drivers shared by the C API and the command-line tool.

#ifndef TMLAB_LAB_HPP_
#define TMLAB_LAB_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tmlab/crossing.hpp"
#include "tmlab/gadgets.hpp"
#include "tmlab/machine.hpp"
#include "tmlab/metering.hpp"
#include "tmlab/oracles.hpp"
#include "tmlab/run.hpp"

namespace tmlab {

// A catalog name or a path to a machine spec file.
struct LoadedMachine {
  std::shared_ptr<const MachineSpec> spec;
  const MachineCatalogEntry* entry = nullptr;  // null for files
};

LoadedMachine resolve_machine(const std::string& selector);

struct RunReport {
  Trace trace;
  ResourceReport resources;
};

// Deterministic run unless `script` is given.
RunReport run_report(const MachineSpec& spec, std::span<const Symbol> input,
                     const GuessScript* script, std::uint64_t fuel);
std::string format_run_report(const MachineSpec& spec, const RunReport& r, bool boundaries);

// a^n for a unary machine; throws InvalidArgument otherwise.
std::vector<Symbol> unary_word(const MachineSpec& spec, std::uint64_t n);

struct KarpRow {
  std::uint64_t n = 0;
  std::size_t min_dfa_states = 0;
  std::uint64_t bound = 0;
  bool meets = false;
};

// One row per n in 0..n_max stepping by `step`, bits taken up to n.
std::vector<KarpRow> karp_table(UnaryLanguage language, std::uint64_t n_max, std::uint64_t step = 1);
// Header `n,min_dfa_states,karp_bound,meets`.
std::string karp_csv(const std::vector<KarpRow>& rows);

struct NfaReport {
  NfaSpec nfa;
  Comparison comparison;
  std::size_t max_len = 0;
};

NfaReport nfa_report(const MachineSpec& spec, std::size_t k, std::size_t max_len,
                     const Decider& decider, std::size_t max_states = 1u << 20);
std::string format_nfa_report(const MachineSpec& spec, const NfaReport& r);

struct SpliceReport {
  Trace first;
  Trace second;
  Splice splice;
  std::string replay_error;  // empty when the spliced trace replays
  Outcome expected = Outcome::Hung;  // from the parity rule
};

SpliceReport splice_report(const MachineSpec& spec, std::span<const Symbol> input1, std::size_t b1,
                           const GuessScript* script1, std::span<const Symbol> input2,
                           std::size_t b2, const GuessScript* script2, std::uint64_t fuel);
std::string format_splice_report(const MachineSpec& spec, const SpliceReport& r);

// gnuplot script plotting value against n from a profile CSV.
std::string plot_script(const std::string& csv_path, const std::string& title);

// Growth models for ratio checks: value <= slack * fitted model.
enum class GrowthModel : std::uint8_t { Linear, NLogN, LogLog, NLogLog };
std::optional<GrowthModel> parse_growth_model(const std::string& s);
double growth_term(GrowthModel m, double n);

struct GrowthCheck {
  double scale = 0;   // C, or A for LogLog
  double offset = 0;  // B for LogLog, else 0
  bool pass = true;
  std::size_t fitted = 0;   // points with n <= fit_upto used for the fit
  std::size_t checked = 0;  // points beyond the fit window
  std::optional<std::uint64_t> first_violation;
};

// Single-term models take C as the largest ratio over the fit window; LogLog
// fits A*log2(log2 n) + B by least squares there. Points where the model
// term is not positive are skipped.
GrowthCheck check_growth(std::span<const std::pair<std::uint64_t, std::uint64_t>> points,
                         GrowthModel model, std::uint64_t fit_upto, double slack);

// Seeded random machine with at most `max_states` states (accept and reject
// included when they fit) and at most `max_symbols` symbols including the
// blank.
MachineSpec random_machine(std::uint64_t seed, std::size_t max_states = 4,
                           std::size_t max_symbols = 3);
// Every word over the input alphabet of length <= max_len, shortlex.
std::vector<std::vector<Symbol>> all_words(const MachineSpec& spec, std::size_t max_len);

}  // namespace tmlab

#endif  // TMLAB_LAB_HPP_
