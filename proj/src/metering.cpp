#include "tmlab/metering.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <thread>

namespace tmlab {

CrossingMap extract_crossing_sequences(const MachineSpec& spec, const Trace& trace) {
  CrossingMap map;
  for (const Step& s : trace.steps) {
    const Transition& t = spec.transition(s.transition);
    std::size_t boundary;
    if (t.move == Move::Right) boundary = static_cast<std::size_t>(s.head) + 1;
    else if (t.move == Move::Left) boundary = s.head;
    else continue;
    auto& cs = map[boundary];
    cs.boundary = boundary;
    cs.states.push_back(t.to);
  }
  return map;
}

StateSeq crossing_at(const MachineSpec& spec, const CrossingMap& map, std::size_t boundary) {
  if (boundary == 0) return {spec.initial_state()};
  auto it = map.find(boundary);
  return it == map.end() ? StateSeq{} : it->second.states;
}

ResourceReport trace_resources(const MachineSpec& spec, const Trace& trace) {
  ResourceReport r;
  r.time = trace.time();
  r.outcome = trace.outcome;
  r.partial = trace.outcome == Outcome::FuelExhausted;
  r.per_boundary = extract_crossing_sequences(spec, trace);
  for (const auto& [b, cs] : r.per_boundary) r.max_crossing = std::max(r.max_crossing, cs.states.size());
  for (const Step& s : trace.steps) {
    const Move m = spec.transition(s.transition).move;
    if (m == Move::Left) ++r.left_moves;
    if (m == Move::Right) ++r.right_moves;
  }
  return r;
}

RunSummary meter_run(const MachineSpec& spec, std::span<const Symbol> input,
                     const GuessScript* script, std::uint64_t fuel) {
  Configuration c = initial_configuration(spec, input);
  RunSummary out;
  out.crossing_lengths.assign(c.tape.size() + 2, 0);
  std::size_t next_choice = 0;
  const Symbol blank = spec.blank();
  for (;;) {
    if (spec.is_halting(c.state)) {
      out.outcome = spec.is_accepting(c.state) ? Outcome::Accepted : Outcome::Rejected;
      break;
    }
    const Symbol read = c.head < c.tape.size() ? c.tape[c.head] : blank;
    auto apps = spec.applicable(c.state, read);
    if (apps.empty()) {
      out.outcome = Outcome::Hung;
      break;
    }
    if (out.time >= fuel) {
      out.outcome = Outcome::FuelExhausted;
      break;
    }
    std::size_t pick = 0;
    if (apps.size() > 1) {
      if (!script) {
        throw Error(ErrorCode::DeterminismViolation,
                    "nondeterministic branch at step " + std::to_string(out.time));
      }
      if (next_choice < script->choices.size()) {
        pick = script->choices[next_choice++];
        if (pick >= apps.size()) {
          throw Error(ErrorCode::Script, "guess script entry " + std::to_string(next_choice - 1) +
                                             " at step " + std::to_string(out.time) +
                                             " is not applicable");
        }
      } else if (script->policy == ExhaustionPolicy::Fail) {
        throw Error(ErrorCode::Script, "guess script exhausted at step " + std::to_string(out.time));
      }
    }
    const Transition& t = spec.transition(apps[pick]);
    if (t.move == Move::Left && c.head == 0) {
      out.outcome = Outcome::Hung;
      break;
    }
    if (c.head >= c.tape.size()) c.tape.resize(c.head + 1, blank);
    c.tape[c.head] = t.write;
    c.state = t.to;
    std::size_t boundary = 0;
    if (t.move == Move::Right) {
      boundary = ++c.head;
      ++out.right_moves;
    } else if (t.move == Move::Left) {
      boundary = c.head--;
      ++out.left_moves;
    }
    if (boundary) {
      if (boundary >= out.crossing_lengths.size()) {
        out.crossing_lengths.resize(2 * boundary + 2, 0);
      }
      ++out.crossing_lengths[boundary];
    }
    ++out.time;
  }
  for (std::uint32_t v : out.crossing_lengths) {
    out.max_crossing = std::max<std::size_t>(out.max_crossing, v);
  }
  while (out.crossing_lengths.size() > 1 && out.crossing_lengths.back() == 0) {
    out.crossing_lengths.pop_back();
  }
  return out;
}

const char* resource_name(Resource r) { return r == Resource::Time ? "time" : "crossing"; }

const char* measure_name(MeasureKind k) {
  switch (k) {
    case MeasureKind::Strong: return "strong";
    case MeasureKind::Accept: return "accept";
    case MeasureKind::Weak: return "weak";
  }
  return "?";
}

const char* exactness_name(Exactness e) {
  switch (e) {
    case Exactness::Exact: return "exact";
    case Exactness::LowerBound: return "lower-bound";
    case Exactness::UpperBound: return "upper-bound";
  }
  return "?";
}

std::optional<Resource> parse_resource(const std::string& s) {
  if (s == "time") return Resource::Time;
  if (s == "crossing") return Resource::Crossing;
  return std::nullopt;
}

std::optional<MeasureKind> parse_measure(const std::string& s) {
  if (s == "strong") return MeasureKind::Strong;
  if (s == "accept") return MeasureKind::Accept;
  if (s == "weak") return MeasureKind::Weak;
  return std::nullopt;
}

namespace {

Exactness inexact_flag(MeasureKind kind) {
  return kind == MeasureKind::Weak ? Exactness::UpperBound : Exactness::LowerBound;
}

}  // namespace

Measurement measure_input(const MachineSpec& spec, std::span<const Symbol> input,
                          Resource resource, MeasureKind kind, std::uint64_t fuel,
                          std::uint64_t max_branches) {
  ExploreOptions opt;
  opt.fuel = fuel;
  opt.max_branches = max_branches;
  opt.count_crossings = resource == Resource::Crossing;
  std::uint64_t strong = 0, accept_max = 0;
  std::optional<std::uint64_t> weak;
  bool accepted = false;
  ExploreStats stats = explore(spec, input, opt, [&](const LeafView& v) {
    std::uint64_t value = v.time;
    if (resource == Resource::Crossing) {
      value = 0;
      for (std::uint32_t x : v.crossings) value = std::max<std::uint64_t>(value, x);
    }
    strong = std::max(strong, value);
    if (v.outcome == Outcome::Accepted) {
      accepted = true;
      accept_max = std::max(accept_max, value);
      weak = weak ? std::min(*weak, value) : value;
    }
    return true;
  });
  Measurement m;
  m.accepted = accepted;
  m.computations = stats.computations;
  switch (kind) {
    case MeasureKind::Strong: m.value = strong; break;
    case MeasureKind::Accept: m.value = accepted ? accept_max : 0; break;
    case MeasureKind::Weak: m.value = weak.value_or(0); break;
  }
  m.exactness = stats.exact() ? Exactness::Exact : inexact_flag(kind);
  return m;
}

Measurement measure_scripted(const MachineSpec& spec, std::span<const Symbol> input,
                             Resource resource, MeasureKind kind, const GuessScript& script,
                             std::uint64_t fuel) {
  RunSummary run = meter_run(spec, input, &script, fuel);
  Measurement m;
  m.computations = 1;
  m.accepted = run.outcome == Outcome::Accepted;
  const std::uint64_t value = resource == Resource::Time ? run.time : run.max_crossing;
  if (kind == MeasureKind::Strong || m.accepted) m.value = value;
  m.exactness = kind == MeasureKind::Weak && m.accepted ? Exactness::UpperBound
                                                         : Exactness::LowerBound;
  return m;
}

Measurement measure_length(const MachineSpec& spec, std::size_t n, Resource resource,
                           MeasureKind kind, const LengthOptions& options) {
  const auto& sigma = spec.input_alphabet();
  if (n > 0 && sigma.empty()) {
    throw Error(ErrorCode::InvalidArgument, "machine has an empty input alphabet");
  }
  // |Sigma|^n with overflow guard.
  std::uint64_t words = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (words > options.input_cap / std::max<std::size_t>(sigma.size(), 1)) {
      throw Error(ErrorCode::CapExceeded, "input space of length " + std::to_string(n) +
                                              " exceeds the cap of " +
                                              std::to_string(options.input_cap));
    }
    words *= sigma.size();
  }
  if (words > options.input_cap) {
    throw Error(ErrorCode::CapExceeded, "input space exceeds the cap");
  }
  std::vector<std::size_t> digits(n, 0);
  std::vector<Symbol> word(n, sigma.empty() ? 0 : sigma[0]);
  Measurement best;
  bool first = true, exact = true;
  std::uint64_t total = 0;
  for (std::uint64_t w = 0; w < words; ++w) {
    for (std::size_t i = 0; i < n; ++i) word[i] = sigma[digits[i]];
    Measurement m = measure_input(spec, word, resource, kind, options.fuel, options.max_branches);
    exact = exact && m.exactness == Exactness::Exact;
    total += m.computations;
    if (first || m.value > best.value) {
      best = m;
      first = false;
    }
    for (std::size_t i = n; i-- > 0;) {
      if (++digits[i] < sigma.size()) break;
      digits[i] = 0;
    }
  }
  best.exactness = exact ? Exactness::Exact : inexact_flag(kind);
  best.computations = total;
  return best;
}

namespace {

ProfileRow profile_one(const MachineSpec& spec, std::uint64_t n, Resource resource,
                       MeasureKind kind, const ProfileOptions& options) {
  ProfileRow row;
  row.n = n;
  row.resource = resource;
  row.kind = kind;
  if (options.scripts) {
    const auto& sigma = spec.input_alphabet();
    if (sigma.size() != 1) {
      throw Error(ErrorCode::InvalidArgument, "script-provider profiles need a unary machine");
    }
    std::optional<GuessScript> script = (*options.scripts)(n);
    if (!script) {
      row.exactness = Exactness::LowerBound;
      row.outcome = "no-witness";
      return row;
    }
    std::vector<Symbol> word(n, sigma[0]);
    Measurement m = measure_scripted(spec, word, resource, kind, *script, options.length.fuel);
    row.value = m.value;
    row.exactness = m.exactness;
    row.outcome = m.accepted ? "accepted" : "rejected";
    return row;
  }
  Measurement m = measure_length(spec, n, resource, kind, options.length);
  row.value = m.value;
  row.exactness = m.exactness;
  if (m.accepted) row.outcome = "accepted";
  else row.outcome = m.exactness == Exactness::Exact ? "rejected" : "inconclusive";
  return row;
}

}  // namespace

std::vector<ProfileRow> profile_range(const MachineSpec& spec, std::span<const std::uint64_t> ns,
                                      Resource resource, MeasureKind kind,
                                      const ProfileOptions& options) {
  std::vector<ProfileRow> rows(ns.size());
  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads,
                                                           static_cast<unsigned>(ns.size())));
  if (threads <= 1) {
    for (std::size_t i = 0; i < ns.size(); ++i) rows[i] = profile_one(spec, ns[i], resource, kind, options);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (std::size_t i; (i = next.fetch_add(1)) < ns.size();) {
              rows[i] = profile_one(spec, ns[i], resource, kind, options);
            }
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ProfileRow& a, const ProfileRow& b) { return a.n < b.n; });
  return rows;
}

std::string profile_csv(std::span<const ProfileRow> rows) {
  std::ostringstream out;
  out << "n,resource,measure,value,exactness,outcome\n";
  for (const ProfileRow& r : rows) {
    out << r.n << ',' << resource_name(r.resource) << ',' << measure_name(r.kind) << ','
        << r.value << ',' << exactness_name(r.exactness) << ',' << r.outcome << '\n';
  }
  return out.str();
}

}  // namespace tmlab
