#include "tmlab/crossing.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace tmlab {

namespace {

std::vector<StateId> left_move_targets(const MachineSpec& spec) {
  std::vector<std::uint8_t> seen(spec.state_count(), 0);
  for (const Transition& t : spec.transitions()) {
    if (t.move == Move::Left) seen[t.to] = 1;
  }
  std::vector<StateId> out;
  for (StateId q = 0; q < spec.state_count(); ++q) {
    if (seen[q]) out.push_back(q);
  }
  return out;
}

std::vector<StateId> right_move_targets(const MachineSpec& spec) {
  std::vector<std::uint8_t> seen(spec.state_count(), 0);
  for (const Transition& t : spec.transitions()) {
    if (t.move == Move::Right) seen[t.to] = 1;
  }
  seen[spec.initial_state()] = 1;
  std::vector<StateId> out;
  for (StateId q = 0; q < spec.state_count(); ++q) {
    if (seen[q]) out.push_back(q);
  }
  return out;
}

// Depth-first search over the behaviours of one square. With `right` set,
// re-entries follow it instead of being guessed, which is the compatibility
// test proper.
class LocalSearch {
 public:
  LocalSearch(const MachineSpec& spec, std::span<const StateId> left,
              std::optional<std::span<const StateId>> right, std::size_t cap,
              const std::vector<StateId>* reentry)
      : spec_(spec),
        left_(left),
        right_(right),
        cap_(cap),
        stay_cap_(spec.state_count() * spec.symbol_count()),
        reentry_(reentry) {}

  void run(Symbol symbol) {
    if (left_.empty()) {
      emit(Terminal::None, 0);
      return;
    }
    in_cell(left_[0], symbol, 1, 0);
  }

  // Stops the search at the first outcome satisfying `want`.
  void stop_on(Terminal want) {
    stop_when_ = want;
  }
  bool found() const { return found_; }

  LocalRuns result() {
    LocalRuns out;
    out.outcomes.assign(outcomes_.begin(), outcomes_.end());
    out.truncated = truncated_;
    out.stationary_pruned = pruned_;
    return out;
  }

 private:
  void emit(Terminal terminal, std::size_t consumed) {
    if (right_) {
      if (r_.size() != right_->size()) return;
      if (stop_when_ && *stop_when_ == terminal && consumed == left_.size()) found_ = true;
    }
    outcomes_.insert({r_, terminal, consumed});
  }

  void in_cell(StateId q, Symbol g, std::size_t li, std::size_t stays) {
    if (found_) return;
    if (spec_.is_accepting(q)) {
      emit(Terminal::AcceptedInSquare, li);
      return;
    }
    if (spec_.is_rejecting(q)) {
      emit(Terminal::RejectedInSquare, li);
      return;
    }
    for (TransitionId id : spec_.applicable(q, g)) {
      if (found_) return;
      const Transition& t = spec_.transition(id);
      switch (t.move) {
        case Move::Stay:
          if (stays + 1 > stay_cap_) {
            pruned_ = true;
            break;
          }
          in_cell(t.to, t.write, li, stays + 1);
          break;
        case Move::Left:
          if (li < left_.size() && left_[li] == t.to) {
            if (li + 1 == left_.size()) {
              emit(Terminal::None, li + 1);
            } else {
              in_cell(left_[li + 1], t.write, li + 2, 0);
            }
          }
          break;
        case Move::Right:
          exit_right(t, li);
          break;
      }
    }
  }

  void exit_right(const Transition& t, std::size_t li) {
    if (right_) {
      if (r_.size() >= right_->size() || (*right_)[r_.size()] != t.to) return;
    } else if (r_.size() + 1 > cap_) {
      truncated_ = true;
      return;
    }
    r_.push_back(t.to);
    emit(Terminal::None, li);
    if (right_) {
      if (r_.size() < right_->size()) {
        const StateId back = (*right_)[r_.size()];
        r_.push_back(back);
        in_cell(back, t.write, li, 0);
        r_.pop_back();
      }
    } else if (!reentry_->empty()) {
      if (r_.size() + 1 > cap_) {
        truncated_ = true;
      } else {
        for (StateId back : *reentry_) {
          r_.push_back(back);
          in_cell(back, t.write, li, 0);
          r_.pop_back();
          if (found_) break;
        }
      }
    }
    r_.pop_back();
  }

  const MachineSpec& spec_;
  std::span<const StateId> left_;
  std::optional<std::span<const StateId>> right_;
  std::size_t cap_;
  std::size_t stay_cap_;
  const std::vector<StateId>* reentry_;
  StateSeq r_;
  std::set<LocalRunOutcome> outcomes_;
  bool truncated_ = false;
  bool pruned_ = false;
  std::optional<Terminal> stop_when_;
  bool found_ = false;
};

}  // namespace

LocalRuns local_runs(const MachineSpec& spec, std::span<const StateId> left, Symbol symbol,
                     std::size_t k_cap) {
  const auto reentry = left_move_targets(spec);
  LocalSearch search(spec, left, std::nullopt, k_cap, &reentry);
  search.run(symbol);
  return search.result();
}

bool compatible(const MachineSpec& spec, std::span<const StateId> left,
                std::span<const StateId> right, Symbol symbol, std::size_t k_cap,
                Terminal terminal) {
  if (left.size() > k_cap || right.size() > k_cap) return false;
  LocalSearch search(spec, left, right, k_cap, nullptr);
  search.stop_on(terminal);
  search.run(symbol);
  return search.found();
}

// ---------------------------------------------------------------------------

BlankAnalysis::BlankAnalysis(const MachineSpec& spec, std::size_t k) : spec_(spec), k_(k) {}

const BlankAnalysis::Node& BlankAnalysis::node(const StateSeq& c) {
  auto it = outcomes_.find(c);
  if (it != outcomes_.end()) return it->second;
  static thread_local std::vector<StateId> reentry;
  reentry = left_move_targets(spec_);
  LocalSearch search(spec_, c, std::nullopt, k_, &reentry);
  search.run(spec_.blank());
  Node n;
  for (const auto& o : search.result().outcomes) {
    if (o.left_consumed != c.size()) continue;
    if (o.terminal == Terminal::None) n.next.push_back(o.right_sequence);
    if (o.terminal == Terminal::AcceptedInSquare) n.accept_at.push_back(o.right_sequence);
  }
  return outcomes_.emplace(c, std::move(n)).first->second;
}

void BlankAnalysis::solve(const StateSeq& root) {
  std::vector<StateSeq> fresh;
  std::set<StateSeq> queued{root};
  std::deque<StateSeq> work{root};
  while (!work.empty()) {
    StateSeq c = work.front();
    work.pop_front();
    if (accepting_.count(c)) continue;
    fresh.push_back(c);
    const Node& n = node(c);
    for (const auto* list : {&n.next, &n.accept_at}) {
      for (const StateSeq& r : *list) {
        if (!accepting_.count(r) && queued.insert(r).second) work.push_back(r);
      }
    }
  }
  for (const auto& c : fresh) {
    returning_[c] = c.empty();
    accepting_[c] = false;
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& c : fresh) {
      if (returning_[c]) continue;
      for (const StateSeq& r : outcomes_.at(c).next) {
        if (returning_.at(r)) {
          returning_[c] = changed = true;
          break;
        }
      }
    }
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& c : fresh) {
      if (accepting_[c]) continue;
      const Node& n = outcomes_.at(c);
      bool hit = false;
      for (const StateSeq& r : n.accept_at) hit = hit || returning_.at(r);
      for (const StateSeq& r : n.next) hit = hit || accepting_.at(r);
      if (hit) accepting_[c] = changed = true;
    }
  }
}

bool BlankAnalysis::accepting(const StateSeq& c) {
  if (!accepting_.count(c)) solve(c);
  return accepting_.at(c);
}

bool BlankAnalysis::returning(const StateSeq& c) {
  if (!returning_.count(c)) solve(c);
  return returning_.at(c);
}

std::set<StateSeq> blank_accepting_set(const MachineSpec& spec, std::size_t k,
                                       std::size_t domain_cap) {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "blank_accepting_set needs k >= 1");
  const auto odd = right_move_targets(spec);
  const auto even = left_move_targets(spec);
  std::size_t domain = 0, layer = 1;
  for (std::size_t len = 1; len <= k; ++len) {
    layer *= (len % 2 == 1 ? odd.size() : even.size());
    domain += layer;
    if (domain > domain_cap || layer > domain_cap) {
      throw Error(ErrorCode::CapExceeded, "crossing-sequence domain exceeds " +
                                              std::to_string(domain_cap) + " sequences");
    }
  }
  BlankAnalysis blank(spec, k);
  std::set<StateSeq> out;
  StateSeq cur;
  std::function<void()> walk = [&] {
    if (!cur.empty() && blank.accepting(cur)) out.insert(cur);
    if (cur.size() == k) return;
    for (StateId q : (cur.size() % 2 == 0 ? odd : even)) {
      cur.push_back(q);
      walk();
      cur.pop_back();
    }
  };
  walk();
  return out;
}

// ---------------------------------------------------------------------------

std::optional<std::size_t> NfaSpec::sink() const {
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].halted && states[i].seq.empty()) return i;
  }
  return std::nullopt;
}

NfaSpec build_crossing_nfa(const MachineSpec& spec, std::size_t k, const NfaBuildOptions& options) {
  NfaSpec nfa;
  nfa.k = k;
  for (Symbol a : spec.input_alphabet()) nfa.alphabet.push_back(spec.symbol_name(a));
  for (StateId q = 0; q < spec.state_count(); ++q) nfa.state_names.push_back(spec.state_name(q));
  const std::size_t sigma = spec.input_alphabet().size();

  const NfaState init{{spec.initial_state()}, false};
  nfa.states.push_back(init);
  nfa.initial = 0;
  nfa.delta.emplace_back(sigma);
  if (k == 0) {
    BlankAnalysis blank(spec, 1);
    nfa.final.push_back(blank.accepting(init.seq) ? 1 : 0);
    return nfa;
  }

  std::map<NfaState, std::uint32_t> index{{init, 0}};
  const auto reentry = left_move_targets(spec);
  auto intern = [&](const NfaState& s) -> std::uint32_t {
    auto [it, added] = index.emplace(s, static_cast<std::uint32_t>(nfa.states.size()));
    if (added) {
      if (nfa.states.size() >= options.max_states) {
        throw Error(ErrorCode::CapExceeded,
                    "crossing NFA exceeds " + std::to_string(options.max_states) + " states");
      }
      nfa.states.push_back(s);
      nfa.delta.emplace_back(sigma);
    }
    return it->second;
  };

  for (std::size_t i = 0; i < nfa.states.size(); ++i) {
    for (std::size_t a = 0; a < sigma; ++a) {
      const NfaState from = nfa.states[i];
      LocalSearch search(spec, from.seq, std::nullopt, k, &reentry);
      search.run(spec.input_alphabet()[a]);
      LocalRuns runs = search.result();
      nfa.truncated = nfa.truncated || runs.truncated;
      std::vector<std::uint32_t> targets;
      for (const auto& o : runs.outcomes) {
        if (o.left_consumed != from.seq.size()) continue;
        if (o.terminal == Terminal::RejectedInSquare) continue;
        if (from.halted && o.terminal != Terminal::None) continue;
        const bool halted = from.halted || o.terminal == Terminal::AcceptedInSquare;
        targets.push_back(intern({o.right_sequence, halted}));
      }
      std::sort(targets.begin(), targets.end());
      targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
      nfa.delta[i][a] = std::move(targets);
    }
  }

  BlankAnalysis blank(spec, k);
  nfa.final.resize(nfa.states.size());
  for (std::size_t i = 0; i < nfa.states.size(); ++i) {
    const NfaState& s = nfa.states[i];
    nfa.final[i] = (s.halted ? blank.returning(s.seq) : blank.accepting(s.seq)) ? 1 : 0;
  }
  return nfa;
}

bool nfa_run(const NfaSpec& nfa, std::span<const std::uint32_t> word) {
  std::vector<std::uint8_t> cur(nfa.states.size(), 0), next(nfa.states.size(), 0);
  cur[nfa.initial] = 1;
  for (std::uint32_t a : word) {
    if (a >= nfa.alphabet.size()) throw Error(ErrorCode::InvalidInput, "symbol outside the NFA alphabet");
    std::fill(next.begin(), next.end(), 0);
    bool any = false;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      if (!cur[i]) continue;
      for (std::uint32_t j : nfa.delta[i][a]) next[j] = any = true;
    }
    if (!any) return false;
    cur.swap(next);
  }
  for (std::size_t i = 0; i < cur.size(); ++i) {
    if (cur[i] && nfa.final[i]) return true;
  }
  return false;
}

bool nfa_run_text(const NfaSpec& nfa, const std::string& word) {
  std::vector<std::uint32_t> w;
  for (char ch : word) {
    auto it = std::find(nfa.alphabet.begin(), nfa.alphabet.end(), std::string(1, ch));
    if (it == nfa.alphabet.end()) {
      throw Error(ErrorCode::InvalidInput, std::string("symbol '") + ch + "' not in the NFA alphabet");
    }
    w.push_back(static_cast<std::uint32_t>(it - nfa.alphabet.begin()));
  }
  return nfa_run(nfa, w);
}

namespace {

std::string seq_text(const NfaSpec& nfa, const NfaState& s) {
  std::string out = "\"(";
  for (std::size_t i = 0; i < s.seq.size(); ++i) {
    if (i) out += ',';
    out += nfa.state_names[s.seq[i]];
  }
  out += ')';
  if (s.halted) out += '*';
  return out + '"';
}

}  // namespace

std::string export_nfa_text(const NfaSpec& nfa) {
  std::ostringstream out;
  out << "nfa k=" << nfa.k << '\n';
  out << "alphabet:";
  for (const auto& a : nfa.alphabet) out << ' ' << a;
  out << '\n';
  for (std::size_t i = 0; i < nfa.states.size(); ++i) {
    out << "state " << i << ' ' << seq_text(nfa, nfa.states[i]);
    if (i == nfa.initial) out << " initial";
    if (nfa.final[i]) out << " final";
    out << '\n';
  }
  out << "transitions:\n";
  for (std::size_t i = 0; i < nfa.states.size(); ++i) {
    for (std::size_t a = 0; a < nfa.alphabet.size(); ++a) {
      for (std::uint32_t j : nfa.delta[i][a]) out << i << ' ' << nfa.alphabet[a] << ' ' << j << '\n';
    }
  }
  return out.str();
}

NfaSpec parse_nfa_text(const std::string& text) {
  NfaSpec nfa;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool in_transitions = false;
  bool have_initial = false;
  std::map<std::string, StateId> names;
  auto fail = [&](const std::string& msg) -> void {
    throw Error(ErrorCode::Parse, "line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "nfa") {
      std::string kv;
      ls >> kv;
      if (kv.rfind("k=", 0) != 0) fail("expected 'nfa k=<bound>'");
      nfa.k = std::stoul(kv.substr(2));
    } else if (head == "alphabet:") {
      for (std::string a; ls >> a;) nfa.alphabet.push_back(a);
    } else if (head == "state") {
      std::size_t id;
      std::string quoted;
      if (!(ls >> id >> quoted)) fail("expected 'state <id> \"(...)\"'");
      if (id != nfa.states.size()) fail("state ids must be consecutive from 0");
      if (quoted.size() < 4 || quoted.front() != '"' || quoted.back() != '"') fail("bad state tuple");
      std::string body = quoted.substr(1, quoted.size() - 2);
      NfaState s;
      if (!body.empty() && body.back() == '*') {
        s.halted = true;
        body.pop_back();
      }
      if (body.size() < 2 || body.front() != '(' || body.back() != ')') fail("bad state tuple");
      body = body.substr(1, body.size() - 2);
      std::istringstream items(body);
      for (std::string q; std::getline(items, q, ',');) {
        auto [it, added] = names.emplace(q, static_cast<StateId>(nfa.state_names.size()));
        if (added) nfa.state_names.push_back(q);
        s.seq.push_back(it->second);
      }
      nfa.states.push_back(s);
      nfa.delta.emplace_back(nfa.alphabet.size());
      nfa.final.push_back(0);
      for (std::string flag; ls >> flag;) {
        if (flag == "initial") {
          nfa.initial = id;
          have_initial = true;
        } else if (flag == "final") {
          nfa.final[id] = 1;
        } else {
          fail("unknown state flag '" + flag + "'");
        }
      }
    } else if (head == "transitions:") {
      in_transitions = true;
    } else if (in_transitions) {
      if (head.find_first_not_of("0123456789") != std::string::npos) fail("bad state id '" + head + "'");
      std::size_t from = std::stoul(head), to;
      std::string sym;
      if (!(ls >> sym >> to)) fail("expected '<from> <symbol> <to>'");
      auto it = std::find(nfa.alphabet.begin(), nfa.alphabet.end(), sym);
      if (it == nfa.alphabet.end()) fail("unknown symbol '" + sym + "'");
      if (from >= nfa.states.size() || to >= nfa.states.size()) fail("unknown state id");
      nfa.delta[from][static_cast<std::size_t>(it - nfa.alphabet.begin())].push_back(
          static_cast<std::uint32_t>(to));
    } else {
      fail("unexpected '" + head + "'");
    }
  }
  if (!have_initial) throw Error(ErrorCode::Parse, "NFA has no initial state");
  return nfa;
}

// ---------------------------------------------------------------------------

Decider exhaustive_decider(const MachineSpec& spec, std::uint64_t fuel, std::uint64_t max_branches) {
  return [&spec, fuel, max_branches](std::span<const Symbol> word) {
    ExploreOptions opt;
    opt.fuel = fuel;
    opt.max_branches = max_branches;
    bool accepted = false;
    ExploreStats stats = explore(spec, word, opt, [&](const LeafView& v) {
      accepted = v.outcome == Outcome::Accepted;
      return !accepted;
    });
    if (accepted) return Decision::Accept;
    return stats.exact() ? Decision::Reject : Decision::Inconclusive;
  };
}

Comparison compare_machine_nfa(const MachineSpec& spec, const NfaSpec& nfa, std::size_t max_len,
                               const Decider& decider) {
  const auto& sigma = spec.input_alphabet();
  std::vector<std::uint32_t> to_nfa;
  for (Symbol a : sigma) {
    auto it = std::find(nfa.alphabet.begin(), nfa.alphabet.end(), spec.symbol_name(a));
    if (it == nfa.alphabet.end()) {
      throw Error(ErrorCode::InvalidArgument, "NFA alphabet lacks input symbol " + spec.symbol_name(a));
    }
    to_nfa.push_back(static_cast<std::uint32_t>(it - nfa.alphabet.begin()));
  }
  Comparison out;
  for (std::size_t len = 0; len <= max_len; ++len) {
    std::vector<std::size_t> digits(len, 0);
    for (;;) {
      std::vector<Symbol> word(len);
      std::vector<std::uint32_t> nword(len);
      for (std::size_t i = 0; i < len; ++i) {
        word[i] = sigma[digits[i]];
        nword[i] = to_nfa[digits[i]];
      }
      ++out.words_checked;
      const Decision d = decider(word);
      if (d == Decision::Inconclusive) {
        out.inconclusive.push_back(word);
      } else if ((d == Decision::Accept) != nfa_run(nfa, nword)) {
        out.disagreement = word;
        out.machine_accepts = d == Decision::Accept;
        return out;
      }
      std::size_t i = len;
      while (i > 0 && ++digits[i - 1] == sigma.size()) digits[--i] = 0;
      if (i == 0) break;
    }
  }
  return out;
}

Comparison compare_machine_nfa(const MachineSpec& spec, const NfaSpec& nfa, std::size_t max_len,
                               std::uint64_t fuel) {
  return compare_machine_nfa(spec, nfa, max_len, exhaustive_decider(spec, fuel, 1u << 20));
}

// ---------------------------------------------------------------------------

namespace {

// Step index ranges of a trace split at every crossing of `boundary`; the
// crossing move closes its range. Range 0 lies left of the boundary, then
// sides alternate. Boundary 0 is crossed virtually before the first step.
std::vector<std::pair<std::size_t, std::size_t>> split_at(const MachineSpec& spec, const Trace& t,
                                                          std::size_t boundary) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t begin = 0;
  if (boundary == 0) out.push_back({0, 0});
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const Step& s = t.steps[i];
    const Move m = spec.transition(s.transition).move;
    const bool crosses = (m == Move::Right && s.head + 1 == boundary) ||
                         (m == Move::Left && s.head == boundary && boundary > 0);
    if (crosses) {
      out.push_back({begin, i + 1});
      begin = i + 1;
    }
  }
  out.push_back({begin, t.steps.size()});
  return out;
}

std::string seq_names(const MachineSpec& spec, const StateSeq& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + spec.state_name(s[i]);
  return out + ")";
}

}  // namespace

Splice cut_and_paste(const MachineSpec& spec, const Trace& first, std::size_t b1,
                     const Trace& second, std::size_t b2) {
  if (b1 > first.input.size() || b2 > second.input.size()) {
    throw Error(ErrorCode::InvalidArgument, "cut boundary lies beyond the input");
  }
  const StateSeq c1 = crossing_at(spec, extract_crossing_sequences(spec, first), b1);
  const StateSeq c2 = crossing_at(spec, extract_crossing_sequences(spec, second), b2);
  if (c1 != c2) {
    throw Error(ErrorCode::Splice, "crossing sequences differ: " + seq_names(spec, c1) + " at " +
                                       std::to_string(b1) + " vs " + seq_names(spec, c2) + " at " +
                                       std::to_string(b2));
  }
  const auto left_parts = split_at(spec, second, b2);   // even indices: left side
  const auto right_parts = split_at(spec, first, b1);   // odd indices: right side
  const std::size_t k = c1.size();

  std::vector<std::pair<const Trace*, std::pair<std::size_t, std::size_t>>> plan;
  for (std::size_t seg = 0; seg <= k; ++seg) {
    if (seg % 2 == 0) plan.push_back({&second, left_parts.at(seg)});
    else plan.push_back({&first, right_parts.at(seg)});
  }
  const Trace& last = k % 2 == 1 ? first : second;

  Splice out;
  out.shared = c1;
  out.odd = k % 2 == 1;
  Trace& t = out.trace;
  t.input.assign(second.input.begin(), second.input.begin() + static_cast<std::ptrdiff_t>(b2));
  t.input.insert(t.input.end(), first.input.begin() + static_cast<std::ptrdiff_t>(b1), first.input.end());

  Configuration c = initial_configuration(spec, t.input);
  for (const auto& [src, range] : plan) {
    for (std::size_t i = range.first; i < range.second; ++i) {
      const Step& s = src->steps[i];
      const Symbol read = c.read(spec.blank());
      if (s.state != c.state || s.read != read) {
        throw Error(ErrorCode::Splice, "internal: spliced segment does not line up");
      }
      t.steps.push_back({c.state, static_cast<std::uint32_t>(c.head), read, s.transition});
      auto next = successors(spec, c);
      auto it = std::find_if(next.begin(), next.end(),
                             [&](const Successor& x) { return x.transition == s.transition; });
      if (it == next.end()) throw Error(ErrorCode::Splice, "internal: spliced move not applicable");
      c = std::move(it->next);
    }
  }
  t.final_state = c.state;
  t.final_head = c.head;
  t.frontier = c.frontier;
  if (spec.is_halting(c.state)) {
    t.outcome = spec.is_accepting(c.state) ? Outcome::Accepted : Outcome::Rejected;
  } else if (last.hang_transition) {
    t.outcome = Outcome::Hung;
    t.hang_transition = last.hang_transition;
  } else if (spec.applicable(c.state, c.read(spec.blank())).empty()) {
    t.outcome = Outcome::Hung;
  } else {
    t.outcome = Outcome::FuelExhausted;
  }
  return out;
}

}  // namespace tmlab
