#include "tmlab/tmlab.h"

#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>

#include "tmlab/lab.hpp"

using namespace tmlab;

struct tmlab_machine {
  LoadedMachine loaded;
};

struct tmlab_nfa {
  NfaSpec nfa;
};

namespace {

thread_local std::string last_error;

tmlab_status to_status(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument: return TMLAB_E_INVALID_ARGUMENT;
    case ErrorCode::Parse: return TMLAB_E_PARSE;
    case ErrorCode::InvalidInput: return TMLAB_E_INVALID_INPUT;
    case ErrorCode::DeterminismViolation: return TMLAB_E_DETERMINISM;
    case ErrorCode::Script: return TMLAB_E_SCRIPT;
    case ErrorCode::Splice: return TMLAB_E_SPLICE;
    case ErrorCode::NoWitness: return TMLAB_E_NO_WITNESS;
    case ErrorCode::CapExceeded: return TMLAB_E_CAP_EXCEEDED;
    case ErrorCode::Compile: return TMLAB_E_COMPILE;
    case ErrorCode::Io: return TMLAB_E_IO;
  }
  return TMLAB_E_INTERNAL;
}

template <typename F>
tmlab_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return TMLAB_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return TMLAB_E_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return TMLAB_E_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

tmlab_outcome to_outcome(Outcome o) { return static_cast<tmlab_outcome>(o); }

std::optional<GuessScript> script_of(const char* text) {
  if (!text) return std::nullopt;
  return parse_script(text);
}

Decider decider_for(const tmlab_machine* m, std::uint64_t fuel, std::uint64_t max_branches) {
  if (m->loaded.entry && m->loaded.entry->decider) return m->loaded.entry->decider;
  return exhaustive_decider(*m->loaded.spec, fuel, max_branches);
}

bool slots_deterministic(const MachineSpec& spec) {
  for (StateId q = 0; q < spec.state_count(); ++q) {
    for (Symbol s = 0; s < spec.symbol_count(); ++s) {
      if (spec.applicable(q, s).size() > 1) return false;
    }
  }
  return true;
}

}  // namespace

extern "C" {

const char* tmlab_last_error(void) { return last_error.c_str(); }

const char* tmlab_status_name(tmlab_status s) {
  switch (s) {
    case TMLAB_OK: return "ok";
    case TMLAB_E_INVALID_ARGUMENT: return "invalid argument";
    case TMLAB_E_PARSE: return "parse error";
    case TMLAB_E_INVALID_INPUT: return "invalid input";
    case TMLAB_E_DETERMINISM: return "determinism violation";
    case TMLAB_E_SCRIPT: return "script error";
    case TMLAB_E_SPLICE: return "splice error";
    case TMLAB_E_NO_WITNESS: return "no witness";
    case TMLAB_E_CAP_EXCEEDED: return "cap exceeded";
    case TMLAB_E_COMPILE: return "compile error";
    case TMLAB_E_IO: return "i/o error";
    case TMLAB_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* tmlab_outcome_name(tmlab_outcome o) { return outcome_name(static_cast<Outcome>(o)); }

void tmlab_free(char* s) { std::free(s); }

tmlab_status tmlab_machine_load(const char* selector, tmlab_machine** out) {
  return guarded([&] {
    require(selector && out, "null argument");
    *out = new tmlab_machine{resolve_machine(selector)};
  });
}

tmlab_status tmlab_machine_from_text(const char* text, tmlab_machine** out) {
  return guarded([&] {
    require(text && out, "null argument");
    *out = new tmlab_machine{{std::make_shared<const MachineSpec>(parse_machine_text(text)), nullptr}};
  });
}

void tmlab_machine_free(tmlab_machine* m) { delete m; }

tmlab_status tmlab_machine_export(const tmlab_machine* m, char** out) {
  return guarded([&] {
    require(m && out, "null argument");
    *out = dup(export_machine_text(*m->loaded.spec));
  });
}

tmlab_status tmlab_catalog_names(char** out) {
  return guarded([&] {
    require(out, "null argument");
    std::string s;
    for (const auto& n : catalog_names()) s += n + "\n";
    *out = dup(s);
  });
}

tmlab_status tmlab_machine_describe(const tmlab_machine* m, tmlab_machine_info* out) {
  return guarded([&] {
    require(m && out, "null argument");
    const MachineSpec& spec = *m->loaded.spec;
    out->states = spec.state_count();
    out->symbols = spec.symbol_count();
    out->transitions = spec.transitions().size();
    out->catalog = m->loaded.entry != nullptr;
    out->deterministic = m->loaded.entry ? m->loaded.entry->deterministic : slots_deterministic(spec);
    out->has_scripts = m->loaded.entry && m->loaded.entry->scripts ? 1 : 0;
  });
}

tmlab_status tmlab_unary_input(const tmlab_machine* m, uint64_t n, char** out) {
  return guarded([&] {
    require(m && out, "null argument");
    const MachineSpec& spec = *m->loaded.spec;
    *out = dup(spec.format_input(unary_word(spec, n)));
  });
}

tmlab_status tmlab_oracle_script(const tmlab_machine* m, uint64_t n, char** out) {
  return guarded([&] {
    require(m && out, "null argument");
    if (!m->loaded.entry || !m->loaded.entry->scripts) {
      throw Error(ErrorCode::InvalidArgument, "machine has no guess-script provider");
    }
    auto s = m->loaded.entry->scripts(n);
    if (!s) throw Error(ErrorCode::NoWitness, "no accepting computation is known for length " + std::to_string(n));
    *out = dup(format_script(*s));
  });
}

tmlab_status tmlab_run(const tmlab_machine* m, const char* input, const char* script,
                       uint64_t fuel, int boundaries, tmlab_run_summary* summary, char** report) {
  return guarded([&] {
    require(m && input, "null argument");
    const MachineSpec& spec = *m->loaded.spec;
    const auto word = spec.parse_input(input);
    const auto gs = script_of(script);
    const RunReport r = run_report(spec, word, gs ? &*gs : nullptr, fuel);
    if (summary) {
      summary->outcome = to_outcome(r.trace.outcome);
      summary->time = r.resources.time;
      summary->max_crossing = r.resources.max_crossing;
      summary->left_moves = r.resources.left_moves;
      summary->right_moves = r.resources.right_moves;
    }
    if (report) *report = dup(format_run_report(spec, r, boundaries != 0));
  });
}

tmlab_status tmlab_profile(const tmlab_machine* m, const uint64_t* ns, size_t count,
                           const tmlab_profile_options* options, char** csv) {
  return guarded([&] {
    require(m && options && csv && (ns || count == 0), "null argument");
    require(count > 0, "empty n list");
    const auto resource = parse_resource(options->resource ? options->resource : "");
    const auto kind = parse_measure(options->measure ? options->measure : "");
    require(resource.has_value(), "resource must be time or crossing");
    require(kind.has_value(), "measure must be strong, accept or weak");
    ProfileOptions po;
    po.length.fuel = options->fuel;
    po.length.max_branches = options->max_branches;
    po.threads = options->threads ? options->threads : 1;
    if (options->use_scripts) {
      if (!m->loaded.entry || !m->loaded.entry->scripts) {
        throw Error(ErrorCode::InvalidArgument, "machine has no guess-script provider");
      }
      po.scripts = &m->loaded.entry->scripts;
    }
    const std::vector<std::uint64_t> list(ns, ns + count);
    const auto rows = profile_range(*m->loaded.spec, list, *resource, *kind, po);
    *csv = dup(profile_csv(rows));
  });
}

tmlab_status tmlab_check_growth(const char* csv, const char* model, uint64_t fit_upto,
                                double slack, int* passed, char** report) {
  return guarded([&] {
    require(csv && model && passed, "null argument");
    const auto gm = parse_growth_model(model);
    require(gm.has_value(), "growth model must be n, nlogn, loglog or nloglog");
    std::vector<std::pair<std::uint64_t, std::uint64_t>> points;
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream fields(line);
      std::string n, resource, measure, value;
      std::getline(fields, n, ',');
      std::getline(fields, resource, ',');
      std::getline(fields, measure, ',');
      std::getline(fields, value, ',');
      try {
        points.emplace_back(std::stoull(n), std::stoull(value));
      } catch (const std::exception&) {
        throw Error(ErrorCode::Parse, "bad profile row '" + line + "'");
      }
    }
    const GrowthCheck g = check_growth(points, *gm, fit_upto, slack);
    *passed = g.pass ? 1 : 0;
    if (report) {
      std::ostringstream out;
      out << "model " << model << ": scale " << g.scale;
      if (*gm == GrowthModel::LogLog) out << ", offset " << g.offset;
      out << ", fitted on " << g.fitted << " points, checked " << g.checked << " with slack " << slack;
      if (g.first_violation) out << ", first violation at n=" << *g.first_violation;
      out << (g.pass ? ": pass\n" : ": FAIL\n");
      *report = dup(out.str());
    }
  });
}

tmlab_status tmlab_nfa_build(const tmlab_machine* m, size_t k, size_t max_states, tmlab_nfa** out) {
  return guarded([&] {
    require(m && out, "null argument");
    NfaBuildOptions opt;
    opt.max_states = max_states ? max_states : (1u << 20);
    *out = new tmlab_nfa{build_crossing_nfa(*m->loaded.spec, k, opt)};
  });
}

void tmlab_nfa_free(tmlab_nfa* nfa) { delete nfa; }

tmlab_status tmlab_nfa_export(const tmlab_nfa* nfa, char** out) {
  return guarded([&] {
    require(nfa && out, "null argument");
    *out = dup(export_nfa_text(nfa->nfa));
  });
}

tmlab_status tmlab_nfa_accepts(const tmlab_nfa* nfa, const char* word, int* accepts) {
  return guarded([&] {
    require(nfa && word && accepts, "null argument");
    *accepts = nfa_run_text(nfa->nfa, word) ? 1 : 0;
  });
}

tmlab_status tmlab_nfa_compare(const tmlab_machine* m, const tmlab_nfa* nfa, size_t max_len,
                               uint64_t fuel, uint64_t max_branches, tmlab_comparison* result,
                               char** report) {
  return guarded([&] {
    require(m && nfa && result, "null argument");
    NfaReport r;
    r.nfa = nfa->nfa;
    r.max_len = max_len;
    r.comparison = compare_machine_nfa(*m->loaded.spec, nfa->nfa, max_len,
                                       decider_for(m, fuel, max_branches));
    result->agree = r.comparison.disagreement ? 0 : 1;
    result->disagreement_length = r.comparison.disagreement ? r.comparison.disagreement->size() : 0;
    result->machine_accepts = r.comparison.machine_accepts ? 1 : 0;
    result->words_checked = r.comparison.words_checked;
    result->inconclusive = r.comparison.inconclusive.size();
    if (report) *report = dup(format_nfa_report(*m->loaded.spec, r));
  });
}

tmlab_status tmlab_karp(const char* language, uint64_t n_max, uint64_t step, size_t* witnesses,
                        char** csv) {
  return guarded([&] {
    require(language && csv, "null argument");
    const auto lang = parse_language(language);
    if (!lang) throw Error(ErrorCode::InvalidArgument, std::string("unknown language '") + language + "'");
    const auto rows = karp_table(*lang, n_max, step ? step : 1);
    if (witnesses) {
      *witnesses = 0;
      for (const auto& r : rows) *witnesses += r.meets ? 1 : 0;
    }
    *csv = dup(karp_csv(rows));
  });
}

tmlab_status tmlab_splice(const tmlab_machine* m, const char* input1, size_t b1,
                          const char* script1, const char* input2, size_t b2,
                          const char* script2, uint64_t fuel, tmlab_splice_result* result,
                          char** report) {
  return guarded([&] {
    require(m && input1 && input2 && result, "null argument");
    const MachineSpec& spec = *m->loaded.spec;
    const auto w1 = spec.parse_input(input1);
    const auto w2 = spec.parse_input(input2);
    const auto s1 = script_of(script1);
    const auto s2 = script_of(script2);
    const SpliceReport r = splice_report(spec, w1, b1, s1 ? &*s1 : nullptr, w2, b2,
                                         s2 ? &*s2 : nullptr, fuel);
    result->replay_valid = r.replay_error.empty() ? 1 : 0;
    result->outcome = to_outcome(r.splice.trace.outcome);
    result->expected = to_outcome(r.expected);
    result->parity_holds = r.splice.trace.outcome == r.expected ? 1 : 0;
    result->shared_length = r.splice.shared.size();
    if (report) *report = dup(format_splice_report(spec, r));
  });
}

tmlab_status tmlab_plot_script(const char* csv_path, const char* title, char** out) {
  return guarded([&] {
    require(csv_path && out, "null argument");
    *out = dup(plot_script(csv_path, title ? title : ""));
  });
}

}  // extern "C"
