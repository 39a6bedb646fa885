#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "helpers.hpp"
#include "tmlab/lab.hpp"

using namespace tmlab;

TEST_CASE("resolve_machine by name and by file") {
  auto byname = resolve_machine("mod3");
  REQUIRE(byname.entry != nullptr);
  CHECK(byname.entry->name == "mod3");

  const std::string path = "tmlab_test_sweeper.tm";
  {
    std::ofstream out(path);
    out << tmtest::kSweeper;
  }
  auto byfile = resolve_machine(path);
  CHECK(byfile.entry == nullptr);
  CHECK(byfile.spec->state_count() == 2);
  std::remove(path.c_str());

  try {
    resolve_machine("no-such-machine");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("run reports") {
  const auto& spec = *catalog_entry("L0").spec;
  auto acc = run_report(spec, unary_word(spec, 6), nullptr, 1u << 24);
  CHECK(acc.trace.outcome == Outcome::Accepted);
  auto rej = run_report(spec, unary_word(spec, 4), nullptr, 1u << 24);
  CHECK(rej.trace.outcome == Outcome::Rejected);
  const std::string text = format_run_report(spec, acc, true);
  CHECK(text.find("outcome: accepted") != std::string::npos);
  CHECK(text.find("crossing lengths: 1:") != std::string::npos);
  CHECK(format_run_report(spec, acc, false).find("crossing lengths") == std::string::npos);

  const auto& co = machine_coLAM();
  const auto script = guess_script_coLAM(12);
  auto scripted = run_report(*co.spec, unary_word(*co.spec, 12), &script, 1u << 24);
  CHECK(scripted.trace.outcome == Outcome::Accepted);
}

TEST_CASE("unary_word needs a unary machine") {
  auto bin = tmtest::machine("states: q0\ninput: a b\nblank: _\n");
  CHECK_THROWS_AS(unary_word(bin, 3), Error);
}

TEST_CASE("karp table") {
  auto rows = karp_table(UnaryLanguage::LAM, 256);
  CHECK(rows.size() == 257);
  CHECK(rows[7].bound == 5);
  std::size_t witnesses = 0;
  for (const auto& r : rows) witnesses += r.meets;
  CHECK(witnesses >= 1);

  auto zero = karp_table(UnaryLanguage::L0, 0);
  REQUIRE(zero.size() == 1);
  CHECK(zero[0].min_dfa_states == 1);
  CHECK(zero[0].bound == 2);
  CHECK_FALSE(zero[0].meets);
  CHECK(karp_csv(zero) == "n,min_dfa_states,karp_bound,meets\n0,1,2,0\n");

  auto coarse = karp_table(UnaryLanguage::LAM, 20, 5);
  CHECK(coarse.size() == 5);
  CHECK(coarse[4].n == 20);
  CHECK_THROWS_AS(karp_table(UnaryLanguage::LAM, 20, 0), Error);
  CHECK_FALSE(parse_language("LXM").has_value());
}

TEST_CASE("nfa reports") {
  const auto& sweeper = catalog_entry("sweeper");
  auto ok = nfa_report(*sweeper.spec, 1, 20, sweeper.decider);
  CHECK_FALSE(ok.comparison.disagreement.has_value());
  CHECK(format_nfa_report(*sweeper.spec, ok).find("agreement up to length 20") != std::string::npos);

  auto degenerate = nfa_report(*sweeper.spec, 0, 5, sweeper.decider);
  const std::string text = format_nfa_report(*sweeper.spec, degenerate);
  CHECK(text.find("degenerate") != std::string::npos);
  CHECK(text.find("disagreement at length 1") != std::string::npos);
}

TEST_CASE("coLAM against a small crossing bound disagrees at a finite length") {
  const auto& co = machine_coLAM();
  auto r = nfa_report(*co.spec, 2, 64, co.decider);
  REQUIRE(r.comparison.disagreement.has_value());
  CHECK(r.comparison.disagreement->size() <= 64);
}

TEST_CASE("splice reports") {
  const auto& spec = *catalog_entry("sweeper").spec;
  auto w3 = unary_word(spec, 3), w5 = unary_word(spec, 5);
  auto r = splice_report(spec, w5, 3, nullptr, w3, 1, nullptr, 100);
  CHECK(r.replay_error.empty());
  CHECK(r.splice.trace.outcome == Outcome::Accepted);
  CHECK(r.expected == Outcome::Accepted);
  const std::string text = format_splice_report(spec, r);
  CHECK(text.find("replay: valid") != std::string::npos);
  CHECK(text.find("(odd)") != std::string::npos);

  auto self = splice_report(spec, w3, 2, nullptr, w3, 2, nullptr, 100);
  CHECK(self.splice.trace == self.first);

  const auto& zig = *catalog_entry("zigzag").spec;
  auto z = unary_word(zig, 6);
  CHECK_THROWS_AS(splice_report(zig, z, 1, nullptr, z, 3, nullptr, 1000), Error);
}

TEST_CASE("plot script names the CSV") {
  const std::string s = plot_script("out.csv", "L0 time strong");
  CHECK(s.find("'out.csv'") != std::string::npos);
  CHECK(s.find("L0 time strong") != std::string::npos);
}

TEST_CASE("growth checks") {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> nlogn;
  for (std::uint64_t n = 16; n <= 4096; n *= 2) nlogn.push_back({n, 3 * n * static_cast<std::uint64_t>(std::log2(n)) + 7});
  auto g = check_growth(nlogn, GrowthModel::NLogN, 16, 2.0);
  CHECK(g.pass);
  CHECK(g.fitted == 1);
  CHECK(g.checked == 8);

  std::vector<std::pair<std::uint64_t, std::uint64_t>> square;
  for (std::uint64_t n = 16; n <= 4096; n *= 2) square.push_back({n, n * n});
  auto bad = check_growth(square, GrowthModel::NLogN, 16, 2.0);
  CHECK_FALSE(bad.pass);
  REQUIRE(bad.first_violation.has_value());
  CHECK(*bad.first_violation == 64);

  std::vector<std::pair<std::uint64_t, std::uint64_t>> ll;
  for (std::uint64_t n = 4; n <= 65536; n *= 2) {
    ll.push_back({n, static_cast<std::uint64_t>(4 * std::log2(std::log2(n)) + 1)});
  }
  auto fit = check_growth(ll, GrowthModel::LogLog, 256, 2.0);
  CHECK(fit.pass);
  CHECK(fit.scale > 2.0);
  CHECK_THROWS_AS(check_growth(ll, GrowthModel::LogLog, 4, 2.0), Error);
  CHECK(parse_growth_model("nloglog") == GrowthModel::NLogLog);
  CHECK_FALSE(parse_growth_model("cubic").has_value());
}

TEST_CASE("random machines are reproducible and within bounds") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const MachineSpec a = random_machine(seed);
    const MachineSpec b = random_machine(seed);
    CHECK(export_machine_text(a) == export_machine_text(b));
    CHECK(a.state_count() <= 4);
    CHECK(a.symbol_count() <= 3);
    CHECK(validate_machine(a).empty());
    CHECK_FALSE(a.input_alphabet().empty());
  }
  CHECK(export_machine_text(random_machine(1)) != export_machine_text(random_machine(2)));
}

TEST_CASE("all_words enumerates in shortlex order") {
  auto bin = tmtest::machine("states: q0\ninput: a b\nblank: _\n");
  auto words = all_words(bin, 2);
  REQUIRE(words.size() == 7);
  CHECK(bin.format_input(words[0]).empty());
  CHECK(bin.format_input(words[1]) == "a");
  CHECK(bin.format_input(words[4]) == "ab");
  CHECK(bin.format_input(words[6]) == "bb");
}
