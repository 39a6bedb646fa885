#include <doctest.h>

#include "helpers.hpp"
#include "tmlab/crossing.hpp"
#include "tmlab/gadgets.hpp"

using namespace tmlab;
using tmtest::machine;
using tmtest::word;

namespace {

std::vector<Symbol> unary(const MachineSpec& spec, std::size_t n) {
  return std::vector<Symbol>(n, spec.input_alphabet()[0]);
}

}  // namespace

TEST_CASE("local_runs of the sweeper") {
  auto spec = machine(tmtest::kSweeper);
  const StateId q0 = spec.initial_state();
  const Symbol a = *spec.find_symbol("a");
  auto runs = local_runs(spec, StateSeq{q0}, a, 4);
  REQUIRE(runs.outcomes.size() == 1);
  CHECK(runs.outcomes[0].right_sequence == StateSeq{q0});
  CHECK(runs.outcomes[0].terminal == Terminal::None);
  CHECK(runs.outcomes[0].left_consumed == 1);
  CHECK_FALSE(runs.truncated);
}

TEST_CASE("local_runs accepting in the square") {
  auto spec = machine("states: q0 acc\ninput: a\nblank: _\naccept: acc\ntransitions:\n(q0, a) -> (acc, a, S)\n");
  auto runs = local_runs(spec, StateSeq{spec.initial_state()}, *spec.find_symbol("a"), 2);
  REQUIRE(runs.outcomes.size() == 1);
  CHECK(runs.outcomes[0].terminal == Terminal::AcceptedInSquare);
  CHECK(runs.outcomes[0].right_sequence.empty());
}

TEST_CASE("local_runs prunes stay loops") {
  auto spec = machine("states: q0\ninput: a\nblank: _\ntransitions:\n(q0, a) -> (q0, a, S)\n");
  auto runs = local_runs(spec, StateSeq{spec.initial_state()}, *spec.find_symbol("a"), 2);
  CHECK(runs.outcomes.empty());
  CHECK(runs.stationary_pruned);
}

TEST_CASE("local_runs reports truncation") {
  // Bounces across the right boundary forever.
  auto spec = machine(R"(
states: q0 q1
input: a
blank: _
tape: b
transitions:
(q0, a) -> (q1, b, R)
(q0, b) -> (q1, b, R)
(q1, _) -> (q0, b, L)
(q1, b) -> (q0, b, L)
)");
  auto runs = local_runs(spec, StateSeq{spec.initial_state()}, *spec.find_symbol("a"), 3);
  CHECK(runs.truncated);
}

TEST_CASE("compatible") {
  auto spec = machine(tmtest::kSweeper);
  const StateId q0 = spec.initial_state();
  const Symbol a = *spec.find_symbol("a");
  CHECK(compatible(spec, StateSeq{q0}, StateSeq{q0}, a, 2));
  CHECK_FALSE(compatible(spec, StateSeq{q0}, StateSeq{}, a, 2));
  CHECK(compatible(spec, StateSeq{q0}, StateSeq{*spec.find_state("acc")}, spec.blank(), 2));
}

TEST_CASE("blank_accepting_set") {
  auto instant = machine("states: q0 acc\ninput: a\ntape: b\nblank: _\naccept: acc\ntransitions:\n(q0, _) -> (acc, b, S)\n");
  CHECK(blank_accepting_set(instant, 1).count(StateSeq{instant.initial_state()}) == 1);

  auto never = machine("states: q0 rej\ninput: a\ntape: b\nblank: _\nreject: rej\ntransitions:\n(q0, _) -> (rej, b, R)\n");
  CHECK(blank_accepting_set(never, 3).empty());

  auto sweeper = machine(tmtest::kSweeper);
  CHECK(blank_accepting_set(sweeper, 1).count(StateSeq{sweeper.initial_state()}) == 1);
}

TEST_CASE("blank_accepting_set grows with k") {
  for (const char* name : {"bounce", "zigzag", "mod3"}) {
    const auto& spec = *catalog_entry(name).spec;
    auto prev = blank_accepting_set(spec, 1);
    for (std::size_t k = 2; k <= 4; ++k) {
      auto next = blank_accepting_set(spec, k);
      for (const auto& c : prev) CHECK(next.count(c) == 1);
      prev = std::move(next);
    }
  }
}

TEST_CASE("mod-3 NFA") {
  const auto& spec = *catalog_entry("mod3").spec;
  auto nfa = build_crossing_nfa(spec, 1);
  CHECK(nfa.states.size() <= 4);
  for (std::size_t n = 0; n <= 20; ++n) {
    std::vector<std::uint32_t> w(n, 0);
    CHECK(nfa_run(nfa, w) == (n % 3 == 0));
  }
  CHECK(nfa_run_text(nfa, "aaaaaa"));
  CHECK(nfa_run_text(nfa, ""));
  CHECK_FALSE(nfa_run_text(nfa, "a"));
  CHECK_FALSE(compare_machine_nfa(spec, nfa, 20, 1000).disagreement.has_value());
}

TEST_CASE("empty word on an NFA without a final initial state") {
  const auto& spec = *catalog_entry("mod3").spec;
  auto mod2 = build_crossing_nfa(*catalog_entry("mod2").spec, 1);
  CHECK(nfa_run_text(mod2, ""));
  // An acceptor that must see one a.
  auto one = machine("states: q0 acc\ninput: a\ntape: b\nblank: _\naccept: acc\ntransitions:\n(q0, a) -> (acc, b, R)\n");
  auto nfa = build_crossing_nfa(one, 1);
  CHECK_FALSE(nfa.final[nfa.initial]);
  CHECK_FALSE(nfa_run_text(nfa, ""));
  CHECK(nfa_run_text(nfa, "aaa"));
  (void)spec;
}

TEST_CASE("k = 0 gives the degenerate automaton") {
  auto sweeper = machine(tmtest::kSweeper);
  auto nfa = build_crossing_nfa(sweeper, 0);
  CHECK(nfa.states.size() == 1);
  CHECK(nfa.final[nfa.initial]);  // the sweeper accepts the empty word
  CHECK_FALSE(nfa_run_text(nfa, "a"));

  auto one = machine("states: q0 acc\ninput: a\ntape: b\nblank: _\naccept: acc\ntransitions:\n(q0, a) -> (acc, b, R)\n");
  auto none = build_crossing_nfa(one, 0);
  CHECK_FALSE(nfa_run_text(none, ""));
}

TEST_CASE("compare_machine_nfa") {
  auto sweeper = machine(tmtest::kSweeper);
  auto nfa = build_crossing_nfa(sweeper, 1);
  auto same = compare_machine_nfa(sweeper, nfa, 20, 1000);
  CHECK_FALSE(same.disagreement.has_value());
  CHECK(same.words_checked == 21);

  auto mod3 = build_crossing_nfa(*catalog_entry("mod3").spec, 1);
  const auto& mod2 = *catalog_entry("mod2").spec;
  auto diff = compare_machine_nfa(mod2, mod3, 20, 1000);
  REQUIRE(diff.disagreement.has_value());
  CHECK(mod2.format_input(*diff.disagreement) == "aa");
  CHECK(diff.machine_accepts);
}

TEST_CASE("inconclusive words are reported separately") {
  auto looper = machine(tmtest::kLooper);
  auto nfa = build_crossing_nfa(looper, 1);
  auto c = compare_machine_nfa(looper, nfa, 2, 50);
  CHECK_FALSE(c.disagreement.has_value());
  CHECK(c.inconclusive.size() == 3);
}

TEST_CASE("NFA text round-trip") {
  auto nfa = build_crossing_nfa(*catalog_entry("bounce").spec, 2);
  auto text = export_nfa_text(nfa);
  CHECK(text.rfind("nfa k=2", 0) == 0);
  auto back = parse_nfa_text(text);
  CHECK(export_nfa_text(back) == text);
  for (std::size_t n = 0; n <= 12; ++n) {
    std::vector<std::uint32_t> w(n, 0);
    CHECK(nfa_run(back, w) == nfa_run(nfa, w));
  }
  CHECK_THROWS_AS(parse_nfa_text("nfa k=1\nbogus\n"), Error);
}

TEST_CASE("NFA state cap") {
  NfaBuildOptions opt;
  opt.max_states = 2;
  CHECK_THROWS_AS(build_crossing_nfa(*catalog_entry("zigzag").spec, 3, opt), Error);
}

TEST_CASE("self-splice is the identity") {
  const auto& spec = *catalog_entry("zigzag").spec;
  auto t = run_deterministic(spec, unary(spec, 6), 1000);
  for (std::size_t b = 0; b <= 6; ++b) {
    auto s = cut_and_paste(spec, t, b, t, b);
    CHECK(s.trace == t);
  }
}

TEST_CASE("sweeper splices") {
  const auto& spec = *catalog_entry("sweeper").spec;
  auto t3 = run_deterministic(spec, unary(spec, 3), 100);
  auto t5 = run_deterministic(spec, unary(spec, 5), 100);

  // a^5 cut at 3 keeps v = aa; a^3 cut at 1 gives u' = a.
  auto s = cut_and_paste(spec, t5, 3, t3, 1);
  CHECK(s.trace.input.size() == 3);
  CHECK(s.trace.outcome == Outcome::Accepted);
  CHECK(s.odd);
  CHECK(replay_mismatch(spec, s.trace).empty());

  auto r = cut_and_paste(spec, t3, 1, t5, 3);
  CHECK(r.trace.input.size() == 5);
  CHECK(r.trace.outcome == Outcome::Accepted);
  CHECK(replay_mismatch(spec, r.trace).empty());
}

TEST_CASE("mismatched crossing sequences cannot be spliced") {
  const auto& spec = *catalog_entry("zigzag").spec;
  auto t = run_deterministic(spec, unary(spec, 6), 1000);
  try {
    cut_and_paste(spec, t, 1, t, 3);
    FAIL("expected a splice error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Splice);
  }
}

TEST_CASE("even shared sequences follow the second computation") {
  // bounce decides back on cell 0, so every inner boundary is crossed twice.
  const auto& spec = *catalog_entry("bounce").spec;
  auto even = run_deterministic(spec, unary(spec, 4), 1000);
  auto odd = run_deterministic(spec, unary(spec, 5), 1000);
  CHECK(even.outcome == Outcome::Accepted);
  CHECK(odd.outcome == Outcome::Rejected);
  const auto me = extract_crossing_sequences(spec, even);
  const auto mo = extract_crossing_sequences(spec, odd);
  // Boundaries carrying equal sequences, if any, splice with the second's outcome.
  for (std::size_t b1 = 1; b1 <= 4; ++b1) {
    for (std::size_t b2 = 1; b2 <= 5; ++b2) {
      if (crossing_at(spec, me, b1) != crossing_at(spec, mo, b2)) continue;
      auto s = cut_and_paste(spec, even, b1, odd, b2);
      CHECK(replay_mismatch(spec, s.trace).empty());
      if (!s.odd) CHECK(s.trace.outcome == odd.outcome);
    }
  }
}
