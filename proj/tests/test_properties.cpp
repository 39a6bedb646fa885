// Invariants over a seeded corpus of small random machines.

#include <doctest.h>

#include "fuzz_checks.hpp"

using namespace tmlab;
using namespace tmtest;

namespace {

constexpr std::uint64_t kSeedBase = 7000;
constexpr std::uint64_t kMachines = 300;

bool slots_deterministic(const MachineSpec& spec) {
  for (StateId q = 0; q < spec.state_count(); ++q) {
    for (Symbol s = 0; s < spec.symbol_count(); ++s) {
      if (spec.applicable(q, s).size() > 1) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("traces replay, keep blank discipline and conserve crossings") {
  std::size_t traces = 0;
  for (std::uint64_t seed = kSeedBase; seed < kSeedBase + kMachines; ++seed) {
    const MachineSpec spec = random_machine(seed);
    for (const auto& w : all_words(spec, 4)) {
      for (const Trace& t : fuzz_traces(spec, w)) {
        ++traces;
        for (const std::string& err : {check_replay(spec, t), check_blank_and_frontier(spec, t),
                                       check_conservation(spec, t), check_parity(spec, t),
                                       check_compatibility(spec, t)}) {
          REQUIRE_MESSAGE(err.empty(), "seed " << seed << ": " << err);
        }
      }
    }
  }
  CHECK(traces > 1000);
}

TEST_CASE("measure ordering and determinism collapse") {
  for (std::uint64_t seed = kSeedBase; seed < kSeedBase + kMachines; ++seed) {
    const MachineSpec spec = random_machine(seed);
    const bool det = slots_deterministic(spec);
    for (const auto& w : all_words(spec, 3)) {
      for (Resource r : {Resource::Time, Resource::Crossing}) {
        const auto strong = measure_input(spec, w, r, MeasureKind::Strong, kFuzzFuel, 1u << 20);
        const auto accept = measure_input(spec, w, r, MeasureKind::Accept, kFuzzFuel, 1u << 20);
        const auto weak = measure_input(spec, w, r, MeasureKind::Weak, kFuzzFuel, 1u << 20);
        if (!accept.accepted || strong.exactness != Exactness::Exact) continue;
        CHECK_MESSAGE(weak.value <= accept.value, "seed " << seed);
        CHECK_MESSAGE(accept.value <= strong.value, "seed " << seed);
        if (det) CHECK_MESSAGE(weak.value == accept.value, "seed " << seed);
      }
    }
  }
}

TEST_CASE("an NFA with a large enough bound agrees with the machine") {
  // k = the largest weak crossing measure over accepted words up to length
  // 4; every accepted word then has an accepting computation within k.
  std::size_t compared = 0;
  for (std::uint64_t seed = kSeedBase; seed < kSeedBase + kMachines; ++seed) {
    const MachineSpec spec = random_machine(seed);
    std::uint64_t k = 1;
    bool exact = true;
    for (const auto& w : all_words(spec, 4)) {
      const auto m = measure_input(spec, w, Resource::Crossing, MeasureKind::Weak, 200, 1u << 16);
      exact = exact && m.exactness == Exactness::Exact;
      k = std::max(k, m.value);
    }
    if (!exact || k > 4) continue;
    NfaSpec nfa;
    try {
      NfaBuildOptions opt;
      opt.max_states = 5000;
      nfa = build_crossing_nfa(spec, k, opt);
    } catch (const Error&) {
      continue;
    }
    const auto c = compare_machine_nfa(spec, nfa, 4, exhaustive_decider(spec, 200, 1u << 16));
    if (!c.inconclusive.empty()) continue;
    ++compared;
    CHECK_MESSAGE(!c.disagreement.has_value(),
                  "seed " << seed << " k " << k << ": disagreement on \""
                          << spec.format_input(c.disagreement.value_or(std::vector<Symbol>{})) << "\"");
  }
  CHECK(compared > 100);
}

TEST_CASE("blank_accepting_set is monotone in k on random machines") {
  for (std::uint64_t seed = kSeedBase; seed < kSeedBase + 100; ++seed) {
    const MachineSpec spec = random_machine(seed);
    auto prev = blank_accepting_set(spec, 1);
    for (std::size_t k = 2; k <= 3; ++k) {
      auto next = blank_accepting_set(spec, k);
      for (const auto& c : prev) CHECK_MESSAGE(next.count(c) == 1, "seed " << seed);
      prev = std::move(next);
    }
  }
}

TEST_CASE("sieve horizon is never crossed") {
  // The rejecting state horizon_fault is entered only if the next-prime scan
  // runs past the sieved region.
  for (const char* name : {"L0", "LAM"}) {
    const auto& spec = *catalog_entry(name).spec;
    const auto fault = spec.find_state("horizon_fault");
    REQUIRE(fault.has_value());
    for (std::uint64_t n = 1; n <= 10000; n += (n < 3000 ? 1 : 7)) {
      const Trace t = run_deterministic(spec, unary_word(spec, n), std::uint64_t{1} << 32);
      REQUIRE_MESSAGE(t.final_state != *fault, name << " n=" << n);
    }
  }
}
