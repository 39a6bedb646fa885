#include "tmlab/lab.hpp"

#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

namespace tmlab {

LoadedMachine resolve_machine(const std::string& selector) {
  const auto names = catalog_names();
  if (std::find(names.begin(), names.end(), selector) != names.end()) {
    const MachineCatalogEntry& e = catalog_entry(selector);
    return {e.spec, &e};
  }
  if (!std::filesystem::exists(selector)) {
    throw Error(ErrorCode::InvalidArgument,
                "'" + selector + "' is neither a catalog machine nor a readable spec file");
  }
  return {std::make_shared<const MachineSpec>(load_machine_file(selector)), nullptr};
}

RunReport run_report(const MachineSpec& spec, std::span<const Symbol> input,
                     const GuessScript* script, std::uint64_t fuel) {
  RunReport r;
  r.trace = script ? run_scripted(spec, input, *script, fuel) : run_deterministic(spec, input, fuel);
  r.resources = trace_resources(spec, r.trace);
  return r;
}

std::string format_run_report(const MachineSpec& spec, const RunReport& r, bool boundaries) {
  std::ostringstream out;
  out << "outcome: " << outcome_name(r.trace.outcome) << '\n';
  out << "final state: " << spec.state_name(r.trace.final_state) << '\n';
  out << "time: " << r.resources.time << '\n';
  out << "max crossing: " << r.resources.max_crossing << '\n';
  out << "moves: " << r.resources.left_moves << " left, " << r.resources.right_moves << " right\n";
  if (boundaries) {
    out << "crossing lengths:";
    for (const auto& [b, cs] : r.resources.per_boundary) out << ' ' << b << ':' << cs.states.size();
    out << '\n';
  }
  return out.str();
}

std::vector<Symbol> unary_word(const MachineSpec& spec, std::uint64_t n) {
  if (spec.input_alphabet().size() != 1) {
    throw Error(ErrorCode::InvalidArgument, "a length-only input needs a unary machine");
  }
  return std::vector<Symbol>(n, spec.input_alphabet()[0]);
}

std::vector<KarpRow> karp_table(UnaryLanguage language, std::uint64_t n_max, std::uint64_t step) {
  if (step == 0) throw Error(ErrorCode::InvalidArgument, "karp grid step must be positive");
  const UnaryBits all = language_bits(language, n_max);
  std::vector<KarpRow> rows;
  for (std::uint64_t n = 0; n <= n_max; n += step) {
    UnaryBits prefix{n, {all.bits.begin(), all.bits.begin() + static_cast<std::ptrdiff_t>(n + 1)}};
    KarpRow row;
    row.n = n;
    row.min_dfa_states = min_consistent_unary_dfa(prefix);
    row.bound = karp_bound(n);
    row.meets = row.min_dfa_states >= row.bound;
    rows.push_back(row);
  }
  return rows;
}

std::string karp_csv(const std::vector<KarpRow>& rows) {
  std::ostringstream out;
  out << "n,min_dfa_states,karp_bound,meets\n";
  for (const KarpRow& r : rows) {
    out << r.n << ',' << r.min_dfa_states << ',' << r.bound << ',' << (r.meets ? 1 : 0) << '\n';
  }
  return out.str();
}

NfaReport nfa_report(const MachineSpec& spec, std::size_t k, std::size_t max_len,
                     const Decider& decider, std::size_t max_states) {
  NfaReport r;
  r.max_len = max_len;
  NfaBuildOptions opt;
  opt.max_states = max_states;
  r.nfa = build_crossing_nfa(spec, k, opt);
  r.comparison = compare_machine_nfa(spec, r.nfa, max_len, decider);
  return r;
}

std::string format_nfa_report(const MachineSpec& spec, const NfaReport& r) {
  std::ostringstream out;
  std::size_t transitions = 0;
  for (const auto& row : r.nfa.delta) {
    for (const auto& targets : row) transitions += targets.size();
  }
  out << "k: " << r.nfa.k << '\n';
  out << "nfa states: " << r.nfa.states.size() << ", transitions: " << transitions << '\n';
  if (r.nfa.k == 0) out << "degenerate bound: only the empty input can be accepted\n";
  if (r.nfa.truncated) out << "note: some local runs needed crossing sequences longer than k\n";
  out << "words checked: " << r.comparison.words_checked << '\n';
  if (!r.comparison.inconclusive.empty()) {
    out << "inconclusive words: " << r.comparison.inconclusive.size() << '\n';
  }
  if (r.comparison.disagreement) {
    const auto& w = *r.comparison.disagreement;
    out << "disagreement at length " << w.size() << ": \"" << spec.format_input(w) << "\" machine "
        << (r.comparison.machine_accepts ? "accepts" : "rejects") << ", nfa "
        << (r.comparison.machine_accepts ? "rejects" : "accepts") << '\n';
  } else {
    out << "agreement up to length " << r.max_len << '\n';
  }
  return out.str();
}

SpliceReport splice_report(const MachineSpec& spec, std::span<const Symbol> input1, std::size_t b1,
                           const GuessScript* script1, std::span<const Symbol> input2,
                           std::size_t b2, const GuessScript* script2, std::uint64_t fuel) {
  SpliceReport r;
  r.first = script1 ? run_scripted(spec, input1, *script1, fuel) : run_deterministic(spec, input1, fuel);
  r.second = script2 ? run_scripted(spec, input2, *script2, fuel) : run_deterministic(spec, input2, fuel);
  r.splice = cut_and_paste(spec, r.first, b1, r.second, b2);
  r.replay_error = replay_mismatch(spec, r.splice.trace);
  r.expected = r.splice.odd ? r.first.outcome : r.second.outcome;
  return r;
}

std::string format_splice_report(const MachineSpec& spec, const SpliceReport& r) {
  std::ostringstream out;
  out << "shared crossing sequence: (";
  for (std::size_t i = 0; i < r.splice.shared.size(); ++i) {
    out << (i ? "," : "") << spec.state_name(r.splice.shared[i]);
  }
  out << ") length " << r.splice.shared.size() << (r.splice.odd ? " (odd)" : " (even)") << '\n';
  out << "spliced input: \"" << spec.format_input(r.splice.trace.input) << "\"\n";
  out << "spliced outcome: " << outcome_name(r.splice.trace.outcome) << ", time "
      << r.splice.trace.time() << '\n';
  out << "parity rule: outcome of the " << (r.splice.odd ? "first" : "second") << " computation ("
      << outcome_name(r.expected) << ")\n";
  out << "replay: " << (r.replay_error.empty() ? "valid" : r.replay_error) << '\n';
  return out.str();
}

std::string plot_script(const std::string& csv_path, const std::string& title) {
  std::ostringstream out;
  out << "# gnuplot script\n"
      << "set datafile separator ','\n"
      << "set key off\n"
      << "set logscale x 2\n"
      << "set xlabel 'n'\n"
      << "set ylabel 'value'\n"
      << "set title '" << title << "'\n"
      << "plot '" << csv_path << "' using 1:4 skip 1 with linespoints\n";
  return out.str();
}

std::optional<GrowthModel> parse_growth_model(const std::string& s) {
  if (s == "n") return GrowthModel::Linear;
  if (s == "nlogn") return GrowthModel::NLogN;
  if (s == "loglog") return GrowthModel::LogLog;
  if (s == "nloglog") return GrowthModel::NLogLog;
  return std::nullopt;
}

double growth_term(GrowthModel m, double n) {
  switch (m) {
    case GrowthModel::Linear: return n;
    case GrowthModel::NLogN: return n > 0 ? n * std::log2(n) : 0;
    case GrowthModel::LogLog: return n > 1 ? std::log2(std::log2(n)) : 0;
    case GrowthModel::NLogLog: return n > 1 ? n * std::log2(std::log2(n)) : 0;
  }
  return 0;
}

GrowthCheck check_growth(std::span<const std::pair<std::uint64_t, std::uint64_t>> points,
                         GrowthModel model, std::uint64_t fit_upto, double slack) {
  GrowthCheck g;
  if (model == GrowthModel::LogLog) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [n, v] : points) {
      const double x = growth_term(model, static_cast<double>(n));
      if (n > fit_upto || x <= 0) continue;
      ++g.fitted;
      sx += x;
      sy += static_cast<double>(v);
      sxx += x * x;
      sxy += x * static_cast<double>(v);
    }
    const double k = static_cast<double>(g.fitted);
    const double den = k * sxx - sx * sx;
    if (g.fitted < 2 || den == 0) throw Error(ErrorCode::InvalidArgument, "log log fit needs two distinct points");
    g.scale = (k * sxy - sx * sy) / den;
    g.offset = (sy - g.scale * sx) / k;
  } else {
    for (const auto& [n, v] : points) {
      const double x = growth_term(model, static_cast<double>(n));
      if (n > fit_upto || x <= 0) continue;
      ++g.fitted;
      g.scale = std::max(g.scale, static_cast<double>(v) / x);
    }
    if (g.fitted == 0) throw Error(ErrorCode::InvalidArgument, "no points inside the fit window");
  }
  for (const auto& [n, v] : points) {
    const double x = growth_term(model, static_cast<double>(n));
    if (n <= fit_upto || x <= 0) continue;
    ++g.checked;
    if (static_cast<double>(v) > slack * (g.scale * x + g.offset) && g.pass) {
      g.pass = false;
      g.first_violation = n;
    }
  }
  return g;
}

MachineSpec random_machine(std::uint64_t seed, std::size_t max_states, std::size_t max_symbols) {
  if (max_states < 1 || max_symbols < 2) {
    throw Error(ErrorCode::InvalidArgument, "random machines need a state and two symbols");
  }
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  MachineBuilder b;
  // Halting states count towards max_states; without a reject state a
  // machine rejects by hanging.
  const std::size_t nq = max_states == 1 ? 1 : pick(1, max_states - 1);
  const std::size_t ns = pick(2, max_symbols);
  std::vector<StateId> q;
  for (std::size_t i = 0; i < nq; ++i) q.push_back(b.state("q" + std::to_string(i)));
  std::vector<StateId> targets = q;
  if (nq < max_states) {
    const StateId acc = b.state("acc");
    b.set_accepting(acc);
    targets.push_back(acc);
  }
  if (nq + 1 < max_states) {
    const StateId rej = b.state("rej");
    b.set_rejecting(rej);
    targets.push_back(rej);
  }
  std::vector<Symbol> sym;
  const Symbol blank = b.symbol("_");
  b.set_blank(blank);
  for (std::size_t i = 1; i < ns; ++i) {
    // the first non-blank symbol is always an input symbol
    sym.push_back(b.symbol(std::string(1, static_cast<char>('a' + i - 1)), i == 1 || pick(0, 1)));
  }
  const Move moves[3] = {Move::Left, Move::Right, Move::Stay};
  for (StateId from : q) {
    for (std::size_t r = 0; r < ns; ++r) {
      const Symbol read = r == 0 ? blank : sym[r - 1];
      // 0, 1 or 2 transitions per slot, so nondeterminism appears
      const std::size_t count = pick(0, 9) < 2 ? 0 : (pick(0, 9) < 7 ? 1 : 2);
      for (std::size_t i = 0; i < count; ++i) {
        b.add(from, read, targets[pick(0, targets.size() - 1)], sym[pick(0, sym.size() - 1)],
              moves[pick(0, 2)]);
      }
    }
  }
  return b.build();
}

std::vector<std::vector<Symbol>> all_words(const MachineSpec& spec, std::size_t max_len) {
  const auto& alpha = spec.input_alphabet();
  std::vector<std::vector<Symbol>> out{{}};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= max_len && !alpha.empty(); ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (Symbol s : alpha) {
        auto w = out[i];
        w.push_back(s);
        out.push_back(std::move(w));
      }
    }
    begin = end;
  }
  return out;
}

}  // namespace tmlab
