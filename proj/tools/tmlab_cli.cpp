// tmlab: run machines, profile resources, build crossing automata, search
// Karp witnesses and splice computations.
//
// Exit codes: 0 success, 1 usage error, 2 experiment-level failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tmlab/tmlab.h"

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kFailure = 2;

struct Failed {
  int code;
};

// Errors caused by what the user typed are usage errors; the rest are
// failures of the experiment itself.
int exit_code_for(tmlab_status s) {
  switch (s) {
    case TMLAB_OK: return kOk;
    case TMLAB_E_INVALID_ARGUMENT:
    case TMLAB_E_PARSE:
    case TMLAB_E_INVALID_INPUT:
    case TMLAB_E_IO: return kUsage;
    default: return kFailure;
  }
}

void check(tmlab_status s) {
  if (s == TMLAB_OK) return;
  std::cerr << "tmlab: " << tmlab_status_name(s) << ": " << tmlab_last_error() << '\n';
  throw Failed{exit_code_for(s)};
}

struct Text {
  char* p = nullptr;
  ~Text() { tmlab_free(p); }
  std::string str() const { return p ? p : ""; }
};

using Machine = std::unique_ptr<tmlab_machine, decltype(&tmlab_machine_free)>;

Machine load(const std::string& selector) {
  tmlab_machine* m = nullptr;
  check(tmlab_machine_load(selector.c_str(), &m));
  return {m, &tmlab_machine_free};
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "tmlab: cannot write " << path << '\n';
    throw Failed{kUsage};
  }
  out << content;
}

// Literal input or a^n.
std::string input_text(const tmlab_machine* m, const std::optional<std::string>& literal,
                       const std::optional<std::uint64_t>& n) {
  if (literal) return *literal;
  Text t;
  check(tmlab_unary_input(m, *n, &t.p));
  return t.str();
}

std::optional<std::string> script_text(const tmlab_machine* m, const std::optional<std::string>& given,
                                       bool oracle, const std::optional<std::uint64_t>& n) {
  if (given) return given;
  if (!oracle) return std::nullopt;
  if (!n) {
    std::cerr << "tmlab: --oracle-script needs --n\n";
    throw Failed{kUsage};
  }
  Text t;
  check(tmlab_oracle_script(m, *n, &t.p));
  return t.str();
}

std::vector<std::uint64_t> parse_ns(const std::vector<std::string>& parts) {
  std::vector<std::uint64_t> out;
  for (const std::string& part : parts) {
    const auto dots = part.find("..");
    auto number = [&](const std::string& s) {
      if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
        std::cerr << "tmlab: bad n value '" << s << "'\n";
        throw Failed{kUsage};
      }
      return std::stoull(s);
    };
    if (dots == std::string::npos) {
      out.push_back(number(part));
      continue;
    }
    const std::uint64_t lo = number(part.substr(0, dots));
    std::string rest = part.substr(dots + 2);
    std::uint64_t factor = 0;
    if (const auto star = rest.find('*'); star != std::string::npos) {
      factor = number(rest.substr(star + 1));
      rest = rest.substr(0, star);
      if (factor < 2 || lo == 0) {
        std::cerr << "tmlab: geometric range needs lo >= 1 and factor >= 2\n";
        throw Failed{kUsage};
      }
    }
    const std::uint64_t hi = number(rest);
    for (std::uint64_t n = lo; n <= hi; n = factor ? n * factor : n + 1) out.push_back(n);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Turing machine crossing-sequence laboratory"};
  app.require_subcommand(1);

  // run
  std::string machine;
  std::optional<std::string> input, script;
  std::optional<std::uint64_t> n;
  bool oracle = false, boundaries = false;
  std::uint64_t fuel = 10'000'000;
  auto* run = app.add_subcommand("run", "run one computation and report its resources");
  run->add_option("--machine,-m", machine, "catalog name or spec file")->required();
  auto* run_input = run->add_option("--input", input, "literal input word");
  auto* run_n = run->add_option("--n", n, "unary input length");
  run_input->excludes(run_n);
  auto* run_script = run->add_option("--script", script, "guess script, e.g. 0,1,2");
  run->add_flag("--oracle-script", oracle, "use the catalog's guess script for a^n")->excludes(run_script);
  run->add_option("--fuel", fuel, "step limit");
  run->add_flag("--boundaries", boundaries, "list crossing-sequence length per boundary");

  // profile
  std::vector<std::string> ns;
  std::string resource = "time", measure = "strong", csv_path, plot_path, check_model;
  std::uint64_t max_branches = 100000, fit_upto = 0;
  bool oracle_scripts = false;
  unsigned threads = 1;
  double slack = 2.0;
  auto* profile = app.add_subcommand("profile", "measure a resource over input lengths, CSV out");
  profile->add_option("--machine,-m", machine, "catalog name or spec file")->required();
  profile->add_option("--n", ns, "lengths: 1,2,8 or lo..hi or lo..hi*2")->required()->delimiter(',');
  profile->add_option("--resource", resource, "time | crossing");
  profile->add_option("--measure", measure, "strong | accept | weak");
  profile->add_option("--fuel", fuel, "step limit per computation");
  profile->add_option("--max-branches", max_branches, "computation limit per input");
  profile->add_flag("--oracle-scripts", oracle_scripts, "follow the catalog's guess scripts");
  profile->add_option("--threads", threads, "worker threads");
  profile->add_option("--csv", csv_path, "output path (default stdout)");
  profile->add_option("--plot", plot_path, "also write a gnuplot script here (needs --csv)");
  profile->add_option("--check", check_model, "ratio check: n | nlogn | loglog | nloglog");
  profile->add_option("--fit-upto", fit_upto, "fit window for --check (default: first n)");
  profile->add_option("--slack", slack, "slack factor for --check");

  // nfa
  std::size_t k = 1, max_len = 20, max_states = 1u << 20;
  std::string export_path;
  auto* nfa = app.add_subcommand("nfa", "build the crossing-sequence NFA and compare it with the machine");
  nfa->add_option("--machine,-m", machine, "catalog name or spec file")->required();
  nfa->add_option("--k", k, "crossing-sequence length bound");
  nfa->add_option("--max-len", max_len, "compare all words up to this length");
  nfa->add_option("--fuel", fuel, "step limit for the machine decider");
  nfa->add_option("--max-branches", max_branches, "computation limit for the machine decider");
  nfa->add_option("--max-states", max_states, "NFA state cap");
  nfa->add_option("--export", export_path, "write the NFA in text form");

  // karp
  std::string language;
  std::uint64_t n_max = 256, step = 1;
  std::size_t min_witnesses = 0;
  auto* karp = app.add_subcommand("karp", "minimal unary DFA sizes against the (n+3)/2 bound");
  karp->add_option("--language", language, "L0 | LAM | coLAM")->required();
  karp->add_option("--n-max", n_max, "largest n");
  karp->add_option("--step", step, "grid step");
  karp->add_option("--csv", csv_path, "output path (default stdout)");
  karp->add_option("--min-witnesses", min_witnesses, "fail unless this many witnesses are found");

  // splice
  std::optional<std::string> input1, input2, script1, script2;
  std::optional<std::uint64_t> n1, n2;
  std::size_t b1 = 0, b2 = 0;
  bool oracle1 = false, oracle2 = false;
  auto* splice = app.add_subcommand("splice", "cut and paste two computations at equal crossing sequences");
  splice->add_option("--machine,-m", machine, "catalog name or spec file")->required();
  splice->add_option("--input1", input1, "first input (u v)")->excludes(splice->add_option("--n1", n1, "first input a^n1"));
  splice->add_option("--input2", input2, "second input (u' v')")->excludes(splice->add_option("--n2", n2, "second input a^n2"));
  splice->add_option("--b1", b1, "cut boundary in the first input")->required();
  splice->add_option("--b2", b2, "cut boundary in the second input")->required();
  splice->add_option("--script1", script1, "guess script for the first run");
  splice->add_option("--script2", script2, "guess script for the second run");
  splice->add_flag("--oracle-script1", oracle1, "catalog guess script for a^n1");
  splice->add_flag("--oracle-script2", oracle2, "catalog guess script for a^n2");
  splice->add_option("--fuel", fuel, "step limit per run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (run->parsed()) {
      if (!input && !n) {
        std::cerr << "tmlab: run needs --input or --n\n";
        return kUsage;
      }
      Machine m = load(machine);
      const std::string word = input_text(m.get(), input, n);
      const auto s = script_text(m.get(), script, oracle, n);
      tmlab_run_summary summary{};
      Text report;
      check(tmlab_run(m.get(), word.c_str(), s ? s->c_str() : nullptr, fuel, boundaries, &summary,
                      &report.p));
      std::cout << report.str();
      return kOk;
    }

    if (profile->parsed()) {
      const auto list = parse_ns(ns);
      if (list.empty()) {
        std::cerr << "tmlab: empty n list\n";
        return kUsage;
      }
      if (!plot_path.empty() && csv_path.empty()) {
        std::cerr << "tmlab: --plot needs --csv\n";
        return kUsage;
      }
      Machine m = load(machine);
      tmlab_profile_options po{resource.c_str(), measure.c_str(), fuel, max_branches,
                               oracle_scripts ? 1 : 0, threads};
      Text csv;
      check(tmlab_profile(m.get(), list.data(), list.size(), &po, &csv.p));
      if (csv_path.empty()) {
        std::cout << csv.str();
      } else {
        write_file(csv_path, csv.str());
      }
      if (!plot_path.empty()) {
        Text plot;
        check(tmlab_plot_script(csv_path.c_str(), (machine + " " + resource + " " + measure).c_str(), &plot.p));
        write_file(plot_path, plot.str());
      }
      if (!check_model.empty()) {
        int passed = 0;
        Text report;
        check(tmlab_check_growth(csv.str().c_str(), check_model.c_str(),
                                 fit_upto ? fit_upto : list.front(), slack, &passed, &report.p));
        std::cerr << report.str();
        if (!passed) return kFailure;
      }
      return kOk;
    }

    if (nfa->parsed()) {
      Machine m = load(machine);
      tmlab_nfa* raw = nullptr;
      check(tmlab_nfa_build(m.get(), k, max_states, &raw));
      std::unique_ptr<tmlab_nfa, decltype(&tmlab_nfa_free)> automaton(raw, &tmlab_nfa_free);
      if (!export_path.empty()) {
        Text text;
        check(tmlab_nfa_export(automaton.get(), &text.p));
        write_file(export_path, text.str());
      }
      tmlab_comparison cmp{};
      Text report;
      check(tmlab_nfa_compare(m.get(), automaton.get(), max_len, fuel, max_branches, &cmp, &report.p));
      std::cout << report.str();
      return cmp.agree ? kOk : kFailure;
    }

    if (karp->parsed()) {
      std::size_t witnesses = 0;
      Text csv;
      check(tmlab_karp(language.c_str(), n_max, step, &witnesses, &csv.p));
      if (csv_path.empty()) {
        std::cout << csv.str();
      } else {
        write_file(csv_path, csv.str());
      }
      std::cerr << "witnesses: " << witnesses << '\n';
      return witnesses >= min_witnesses ? kOk : kFailure;
    }

    if (splice->parsed()) {
      if ((!input1 && !n1) || (!input2 && !n2)) {
        std::cerr << "tmlab: splice needs --input1/--n1 and --input2/--n2\n";
        return kUsage;
      }
      Machine m = load(machine);
      const std::string w1 = input_text(m.get(), input1, n1);
      const std::string w2 = input_text(m.get(), input2, n2);
      const auto s1 = script_text(m.get(), script1, oracle1, n1);
      const auto s2 = script_text(m.get(), script2, oracle2, n2);
      tmlab_splice_result result{};
      Text report;
      check(tmlab_splice(m.get(), w1.c_str(), b1, s1 ? s1->c_str() : nullptr, w2.c_str(), b2,
                         s2 ? s2->c_str() : nullptr, fuel, &result, &report.p));
      std::cout << report.str();
      return result.replay_valid && result.parity_holds ? kOk : kFailure;
    }
  } catch (const Failed& f) {
    return f.code;
  }
  return kUsage;
}
