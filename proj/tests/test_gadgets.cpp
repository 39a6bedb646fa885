#include <doctest.h>

#include "tmlab/gadgets.hpp"
#include "tmlab/oracles.hpp"

using namespace tmlab;

namespace {

std::vector<Symbol> unary(const MachineSpec& spec, std::size_t n) {
  return std::vector<Symbol>(n, spec.input_alphabet()[0]);
}

Outcome decide(const MachineSpec& spec, std::size_t n) {
  return run_deterministic(spec, unary(spec, n), std::uint64_t{1} << 30).outcome;
}

std::uint64_t counter_after(const MachineSpec& spec, std::size_t n, char column) {
  const Trace t = run_deterministic(spec, unary(spec, n), std::uint64_t{1} << 30);
  REQUIRE(t.outcome == Outcome::Accepted);
  const Configuration c = final_configuration(spec, t);
  const auto first = block_start(spec, c.tape);
  REQUIRE(first.has_value());
  return block_value(spec, c.tape, *first, column);
}

}  // namespace

TEST_CASE("counter program counts the whole input") {
  const MachineSpec spec = compile(program_counter());
  for (std::size_t n : {0, 1, 5, 8, 13, 64, 100}) CHECK(counter_after(spec, n, 'C') == n);
}

TEST_CASE("reset counter runs modulo the stored value") {
  GadgetProgram p;
  p.name = "mod";
  p.phases.push_back(InitBlock{3, std::nullopt, false});
  p.phases.push_back(CountFactor{true, SecondCounter::None, Sieve::None});
  p.phases.push_back(accept_if({{Atom::Always}}));
  const MachineSpec spec = compile(p);
  CHECK(validate_machine(spec).empty());
  for (std::size_t n = 0; n <= 20; ++n) {
    CHECK(counter_after(spec, n, 'C') == n % 3);
    CHECK(counter_after(spec, n, 'K') == 3);
  }
}

TEST_CASE("second counter counts wraps") {
  GadgetProgram p;
  p.name = "wraps";
  p.phases.push_back(InitBlock{2, std::nullopt, false});
  p.phases.push_back(CountFactor{true, SecondCounter::OnWrap, Sieve::None});
  p.phases.push_back(accept_if({{Atom::Always}}));
  const MachineSpec spec = compile(p);
  for (std::size_t n = 0; n <= 16; ++n) CHECK(counter_after(spec, n, 'D') == (n / 2) % 2);
}

TEST_CASE("empty program is a rejecting stub") {
  const MachineSpec spec = compile(GadgetProgram{"empty", {}});
  CHECK(spec.is_rejecting(spec.initial_state()));
  CHECK(decide(spec, 3) == Outcome::Rejected);
}

TEST_CASE("phases that do not chain are compile errors") {
  auto expect_compile_error = [](GadgetProgram p) {
    try {
      compile(p);
      FAIL("expected a compile error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Compile);
      CHECK(std::string(e.what()).find("cannot follow") != std::string::npos);
    }
  };
  // reset needs a stored modulus
  expect_compile_error({"t", {InitBlock{}, CountFactor{true, SecondCounter::None, Sieve::None}}});
  // no block yet
  expect_compile_error({"t", {CountFactor{false, SecondCounter::None, Sieve::None}}});
  // counting twice without moving back
  expect_compile_error({"t", {InitBlock{}, CountFactor{false, SecondCounter::None, Sieve::None},
                              CountFactor{false, SecondCounter::None, Sieve::None}}});
  // a missing track is reported by name
  GadgetProgram sieve{"t", {InitBlock{2, 2, false}, CountFactor{true, SecondCounter::None, Sieve::X}}};
  TrackLayout bare;
  bare.tracks.push_back({"input", {"a", "."}});
  CHECK_THROWS_AS(compile(sieve, bare), Error);
}

TEST_CASE("compiled catalog machines are valid") {
  for (const auto& name : catalog_names()) {
    const auto& e = catalog_entry(name);
    CHECK_MESSAGE(validate_machine(*e.spec).empty(), name);
    CHECK(e.spec->input_alphabet().size() == 1);
  }
  CHECK_THROWS_AS(catalog_entry("nope"), Error);
}

TEST_CASE("machine_L0 examples") {
  const auto& spec = *machine_L0().spec;
  CHECK(decide(spec, 2) == Outcome::Accepted);
  CHECK(decide(spec, 4) == Outcome::Rejected);
  CHECK(decide(spec, 6) == Outcome::Accepted);
  CHECK(decide(spec, 0) == Outcome::Rejected);
  CHECK(decide(spec, 30) == Outcome::Accepted);
  CHECK(decide(spec, 210) == Outcome::Accepted);
  CHECK(decide(spec, 60) == Outcome::Rejected);
}

TEST_CASE("machine_LAM examples") {
  const auto& spec = *machine_LAM().spec;
  CHECK(decide(spec, 6) == Outcome::Accepted);
  CHECK(decide(spec, 2) == Outcome::Rejected);
  CHECK(decide(spec, 1) == Outcome::Accepted);
  CHECK(decide(spec, 0) == Outcome::Rejected);
  CHECK(decide(spec, 12) == Outcome::Rejected);
  CHECK(decide(spec, 420) == Outcome::Accepted);  // q(420) = 8
}

TEST_CASE("deterministic catalog machines agree with their oracles") {
  for (const char* name : {"L0", "LAM", "sweeper", "mod2", "mod3", "bounce", "zigzag", "counter"}) {
    const auto& e = catalog_entry(name);
    for (std::size_t n = 1; n <= 200; ++n) {
      CHECK_MESSAGE((decide(*e.spec, n) == Outcome::Accepted) == e.oracle(n), name << " n=" << n);
    }
  }
}

TEST_CASE("guess_script_coLAM") {
  CHECK(guess_script_coLAM(2).choices == std::vector<std::uint32_t>{1, 2});      // s=1, t=3
  CHECK(guess_script_coLAM(12).choices == std::vector<std::uint32_t>{1, 0, 2});  // s=2, t=5
  try {
    guess_script_coLAM(6);
    FAIL("expected no witness");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoWitness);
  }
  CHECK_THROWS_AS(guess_script_coLAM(0), Error);
}

TEST_CASE("machine_coLAM examples") {
  const auto& e = machine_coLAM();
  const auto& spec = *e.spec;
  auto t2 = run_scripted(spec, unary(spec, 2), guess_script_coLAM(2), 100000);
  CHECK(t2.outcome == Outcome::Accepted);
  auto t12 = run_scripted(spec, unary(spec, 12), guess_script_coLAM(12), 100000);
  CHECK(t12.outcome == Outcome::Accepted);

  // The guessed values sit in the block: K = 2^s and J = t.
  const Configuration c = final_configuration(spec, t12);
  const auto first = block_start(spec, c.tape);
  REQUIRE(first.has_value());
  CHECK(block_value(spec, c.tape, *first, 'K') == 4);
  CHECK(block_value(spec, c.tape, *first, 'J') == 5);

  bool accepted = false;
  ExploreOptions opt;
  opt.fuel = 10000;
  opt.max_branches = 1u << 20;
  auto stats = explore(spec, unary(spec, 6), opt, [&](const LeafView& v) {
    accepted = accepted || v.outcome == Outcome::Accepted;
    return true;
  });
  CHECK_FALSE(accepted);
  CHECK(stats.exact());

  // A wrong guess does not accept.
  auto wrong = run_scripted(spec, unary(spec, 12), parse_script("1,2"), 100000);  // s=1, t=3
  CHECK(wrong.outcome != Outcome::Accepted);
}

TEST_CASE("coLAM decider") {
  const auto& e = machine_coLAM();
  const auto& spec = *e.spec;
  CHECK(e.decider(unary(spec, 2)) == Decision::Accept);
  CHECK(e.decider(unary(spec, 6)) == Decision::Reject);
  CHECK(e.decider(unary(spec, 0)) == Decision::Reject);
  CHECK_FALSE(e.deterministic);
  CHECK(e.measure == MeasureKind::Weak);
  CHECK_FALSE(e.scripts(6).has_value());
  CHECK(e.scripts(12).has_value());
}

TEST_CASE("catalog machines export and re-import") {
  for (const char* name : {"counter", "bounce"}) {
    const auto& spec = *catalog_entry(name).spec;
    const MachineSpec again = parse_machine_text(export_machine_text(spec));
    for (std::size_t n = 0; n <= 20; ++n) {
      CHECK(run_deterministic(again, unary(again, n), 1u << 20).time() ==
            run_deterministic(spec, unary(spec, n), 1u << 20).time());
    }
  }
}
