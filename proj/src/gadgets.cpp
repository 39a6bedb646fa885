#include "tmlab/gadgets.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "tmlab/oracles.hpp"

namespace tmlab {

namespace {

constexpr std::uint8_t kC = 1, kD = 2, kK = 4, kJ = 8, kS = 16;
constexpr const char* kColumns = "CDKJS";

const std::string kAccept = "accept";
const std::string kReject = "reject";
const std::string kFault = "horizon_fault";

bool halting_label(const std::string& s) { return s == kAccept || s == kReject || s == kFault; }

struct Cell {
  bool beyond = false;
  bool edge = false;
  std::uint8_t mark = 0;  // 0, X = 1, Y = 2
  bool marker = false;
  bool block = false;
  bool first = false;
  bool last = false;
  std::uint8_t bits = 0;
  bool fresh = false;  // the blank symbol itself

  bool bit(std::uint8_t col) const { return (bits & col) != 0; }

  std::uint32_t key() const {
    return static_cast<std::uint32_t>(beyond) | static_cast<std::uint32_t>(edge) << 1 |
           static_cast<std::uint32_t>(mark) << 2 | static_cast<std::uint32_t>(marker) << 4 |
           static_cast<std::uint32_t>(block) << 5 | static_cast<std::uint32_t>(first) << 6 |
           static_cast<std::uint32_t>(last) << 7 | static_cast<std::uint32_t>(bits) << 8;
  }

  std::string name() const {
    std::string s(1, beyond ? '.' : 'a');
    if (edge) s += 'e';
    if (mark == 1) s += 'x';
    if (mark == 2) s += 'y';
    if (marker) s += 'm';
    if (block) {
      s += '[';
      if (first) s += 'f';
      if (last) s += 'l';
      for (int i = 0; i < 5; ++i) {
        if (bits & (1u << i)) s += kColumns[i];
      }
      s += ']';
    }
    return s;
  }
};

Cell with_block(Cell c, bool first, bool last, std::uint8_t bits) {
  c.block = true;
  c.first = first;
  c.last = last;
  c.bits = bits;
  return c;
}

Cell cleared(Cell c) {
  c.block = c.first = c.last = false;
  c.bits = 0;
  return c;
}

std::uint8_t set_bit(std::uint8_t bits, std::uint8_t col, bool v) {
  return v ? static_cast<std::uint8_t>(bits | col) : static_cast<std::uint8_t>(bits & ~col);
}

struct Act {
  std::string to;
  Cell write;
  Move move;
};
using Acts = std::vector<Act>;
using Behavior = std::function<Acts(const Cell&)>;

// Control states as behaviours over decoded cells. Only states reachable
// from the initial one and symbols actually written are materialised.
class Assembler {
 public:
  void define(const std::string& name, Behavior b) {
    if (halting_label(name) || !behaviors_.emplace(name, std::move(b)).second) {
      throw Error(ErrorCode::Compile, "internal: state " + name + " defined twice");
    }
  }

  // Continue in `label` on the current cell without moving.
  Acts go(const std::string& label, const Cell& c) const {
    if (halting_label(label)) return {{label, c, Move::Stay}};
    auto it = behaviors_.find(label);
    if (it == behaviors_.end()) throw Error(ErrorCode::Compile, "internal: undefined state " + label);
    return it->second(c);
  }

  MachineSpec assemble(const std::string& initial) const {
    MachineBuilder b;
    std::unordered_map<std::string, StateId> ids;
    std::vector<std::pair<std::string, StateId>> live;
    auto state_id = [&](const std::string& name) {
      auto it = ids.find(name);
      if (it != ids.end()) return it->second;
      if (!halting_label(name) && !behaviors_.count(name)) {
        throw Error(ErrorCode::Compile, "internal: transition into undefined state " + name);
      }
      const StateId q = b.state(name);
      ids.emplace(name, q);
      if (name == kAccept) b.set_accepting(q);
      else if (halting_label(name)) b.set_rejecting(q);
      else live.push_back({name, q});
      return q;
    };
    state_id(initial);

    std::vector<Cell> cells;
    std::unordered_map<std::uint32_t, Symbol> by_key;
    Cell blank_cell;
    blank_cell.beyond = true;
    blank_cell.fresh = true;
    const Symbol blank = b.symbol("_");
    b.set_blank(blank);
    cells.push_back(blank_cell);
    const Cell input_cell;
    by_key.emplace(input_cell.key(), b.symbol(input_cell.name(), true));
    cells.push_back(input_cell);
    auto intern = [&](const Cell& c) {
      auto it = by_key.find(c.key());
      if (it != by_key.end()) return it->second;
      Cell stored = c;
      stored.fresh = false;
      const Symbol s = b.symbol(stored.name());
      by_key.emplace(c.key(), s);
      cells.push_back(stored);
      return s;
    };

    std::vector<std::size_t> upto;
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = 0; i < live.size(); ++i) {
        if (upto.size() <= i) upto.push_back(0);
        const Behavior& behave = behaviors_.at(live[i].first);
        for (std::size_t s = upto[i]; s < cells.size(); ++s) {
          for (const Act& act : behave(cells[s])) {
            const StateId to = state_id(act.to);
            b.add(live[i].second, static_cast<Symbol>(s), to, intern(act.write), act.move);
          }
          changed = true;
        }
        upto[i] = cells.size();
      }
    }
    return b.build();
  }

 private:
  std::unordered_map<std::string, Behavior> behaviors_;
};

std::uint32_t bit_length(std::uint32_t v) {
  std::uint32_t w = 0;
  while (v) {
    ++w;
    v >>= 1;
  }
  return w;
}

std::string flag(const char* tag, int v) { return std::string(tag) + std::to_string(v); }

// ---------------------------------------------------------------------------
// Chain checking

enum class Where : std::uint8_t { Start, Origin, End, Candidate, Unreachable };

struct Facts {
  Where where = Where::Start;
  bool modulus = false;  // K loaded
  bool second_modulus = false;
  bool marker = false;
  bool operator==(const Facts&) const = default;
};

const char* where_name(Where w) {
  switch (w) {
    case Where::Start: return "the start of the tape";
    case Where::Origin: return "a block at the origin";
    case Where::End: return "a block past the input";
    case Where::Candidate: return "a fresh candidate block";
    case Where::Unreachable: return "unreachable code";
  }
  return "?";
}

std::string phase_name(const Phase& p) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, InitBlock>) return "InitBlock";
        else if constexpr (std::is_same_v<T, GuessBinary>) return "GuessBinary";
        else if constexpr (std::is_same_v<T, CountFactor>) return "CountFactor";
        else if constexpr (std::is_same_v<T, Branch>) return x.accept ? "AcceptIf" : "RejectIf";
        else if constexpr (std::is_same_v<T, NextPrimeScan>) return "NextPrimeScan";
        else if constexpr (std::is_same_v<T, ShiftBack>) return "ShiftBack";
        else return "LoopWhile";
      },
      p);
}

struct Compiler {
  const TrackLayout& layout;
  Assembler as;
  std::uint8_t columns = kC;
  bool sieve_y = false;
  int counter = 0;

  std::string fresh_prefix() { return "p" + std::to_string(counter++) + ":"; }

  [[noreturn]] void chain_error(const std::string& prev, const std::string& cur, const std::string& why) {
    throw Error(ErrorCode::Compile, cur + " cannot follow " + prev + ": " + why);
  }

  void need_track(const std::string& phase, const std::string& track) {
    if (!layout.has(track)) {
      throw Error(ErrorCode::Compile, phase + " needs track " + track + " which the layout lacks");
    }
  }

  // -- sequencing ----------------------------------------------------------

  Facts sequence(const std::vector<Phase>& phases, const std::string& entry, const std::string& exit,
                 Facts facts, std::string prev) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < phases.size(); ++i) {
      labels.push_back(i == 0 ? entry : fresh_prefix() + "entry");
    }
    for (std::size_t i = 0; i < phases.size(); ++i) {
      const std::string next = i + 1 < phases.size() ? labels[i + 1] : exit;
      const std::string name = phase_name(phases[i]);
      facts = std::visit([&](const auto& p) { return emit(p, labels[i], next, facts, prev); }, phases[i]);
      prev = name;
    }
    return facts;
  }

  // -- predicates ------------------------------------------------------------

  void check_literals(const std::vector<Literal>& lits, const Facts& f, const std::string& prev,
                      const std::string& cur) {
    for (const Literal& l : lits) {
      switch (l.atom) {
        case Atom::InputEmpty:
          if (f.where != Where::Start) chain_error(prev, cur, "InputEmpty is only decidable at the start");
          if (lits.size() != 1) chain_error(prev, cur, "InputEmpty cannot be combined");
          break;
        case Atom::Always: break;
        case Atom::CounterZero:
          if (f.where == Where::Start) chain_error(prev, cur, "no counter block yet");
          break;
        case Atom::SecondZero:
          if (f.where == Where::Start) chain_error(prev, cur, "no counter block yet");
          need_track(cur, "D");
          break;
        case Atom::ModulusIsTwo:
        case Atom::ModulusPowerOfTwo:
          if (!f.modulus) chain_error(prev, cur, "no modulus loaded");
          break;
      }
    }
  }

  // Read-only sweep of the block from its first cell; jumps to on_true or
  // on_false with the head back on the first cell.
  void emit_test(const std::vector<Literal>& lits, const std::string& entry, const std::string& on_true,
                 const std::string& on_false, const Facts& f) {
    const std::string px = fresh_prefix();
    bool only_trivial = true;
    for (const Literal& l : lits) only_trivial = only_trivial && (l.atom == Atom::Always || l.atom == Atom::InputEmpty);
    if (f.where == Where::Start || only_trivial) {
      as.define(entry, [this, lits, on_true, on_false](const Cell& c) {
        bool v = true;
        for (const Literal& l : lits) {
          const bool a = l.atom == Atom::InputEmpty ? c.fresh : true;
          v = v && (a != l.negated);
        }
        return as.go(v ? on_true : on_false, c);
      });
      return;
    }
    auto state = [px](int cz, int dz, int kp, int kat, int idx) {
      return px + "T" + flag(".c", cz) + flag("d", dz) + flag("k", kp) + flag("@", kat) + flag("i", idx);
    };
    const std::string back_true = px + "R.t", back_false = px + "R.f";
    for (const auto& [name, target] : {std::pair{back_true, on_true}, std::pair{back_false, on_false}}) {
      as.define(name, [this, name, target](const Cell& c) -> Acts {
        if (c.first) return as.go(target, c);
        return {{name, c, Move::Left}};
      });
    }
    for (int cz = 0; cz < 2; ++cz)
      for (int dz = 0; dz < 2; ++dz)
        for (int kp = 0; kp < 3; ++kp)
          for (int kat = 0; kat < 3; ++kat)
            for (int idx = 0; idx < 3; ++idx) {
              const std::string name = state(cz, dz, kp, kat, idx);
              as.define(name, [=, this](const Cell& c) -> Acts {
                if (!c.block) return {};
                const int ncz = cz && !c.bit(kC);
                const int ndz = dz && !c.bit(kD);
                int nkp = kp, nkat = kat;
                if (c.bit(kK)) {
                  nkp = std::min(kp + 1, 2);
                  if (kp == 0) nkat = idx;
                }
                if (!c.last) return {{state(ncz, ndz, nkp, nkat, std::min(idx + 1, 2)), c, Move::Right}};
                bool v = true;
                for (const Literal& l : lits) {
                  bool a = true;
                  switch (l.atom) {
                    case Atom::CounterZero: a = ncz; break;
                    case Atom::SecondZero: a = ndz; break;
                    case Atom::ModulusIsTwo: a = nkp == 1 && nkat == 1; break;
                    case Atom::ModulusPowerOfTwo: a = nkp == 1 && nkat >= 1; break;
                    default: break;
                  }
                  v = v && (a != l.negated);
                }
                const std::string& target = v ? on_true : on_false;
                if (halting_label(target)) return {{target, c, Move::Stay}};
                if (c.first) return as.go(target, c);
                return {{v ? back_true : back_false, c, Move::Left}};
              });
            }
    const std::string start = state(1, 1, 0, 0, 0);
    as.define(entry, [this, start](const Cell& c) { return as.go(start, c); });
  }

  // -- phases ------------------------------------------------------------------

  Facts emit(const Branch& br, const std::string& entry, const std::string& next, Facts f,
             const std::string& prev) {
    const std::string cur = br.accept ? "AcceptIf" : "RejectIf";
    if (f.where == Where::Unreachable) return f;
    check_literals(br.when, f, prev, cur);
    emit_test(br.when, entry, br.accept ? kAccept : kReject, next, f);
    return f;
  }

  Facts emit(const InitBlock& ib, const std::string& entry, const std::string& next, Facts f,
             const std::string& prev) {
    if (f.where != Where::Start) chain_error(prev, "InitBlock", std::string("expects the start of the tape, found ") + where_name(f.where));
    if (ib.modulus && *ib.modulus < 2) throw Error(ErrorCode::Compile, "InitBlock modulus must be >= 2");
    if (ib.modulus) need_track("InitBlock", "K");
    if (ib.marker_at) need_track("InitBlock", "M");
    if (ib.prime_flag) need_track("InitBlock", "S");
    const std::string px = fresh_prefix();
    const std::uint32_t w = ib.modulus ? bit_length(*ib.modulus) : 1;
    const std::uint32_t top = std::max<std::uint32_t>(w - 1, ib.marker_at.value_or(0));
    const std::string back = px + "back";
    as.define(back, [this, back, next](const Cell& c) -> Acts {
      if (c.edge) return as.go(next, c);
      return {{back, c, Move::Left}};
    });
    for (std::uint32_t i = 0; i <= top; ++i) {
      const std::string name = i == 0 ? entry : px + "I" + std::to_string(i);
      const std::string after = px + "I" + std::to_string(i + 1);
      as.define(name, [=](const Cell& c) -> Acts {
        Cell out = c;
        if (i == 0) out.edge = true;
        if (i < w) {
          std::uint8_t bits = 0;
          if (ib.modulus && ((*ib.modulus >> i) & 1u)) bits |= kK;
          if (ib.prime_flag && i == 0) bits |= kS;
          out = with_block(out, i == 0, i == w - 1, bits);
        }
        if (ib.marker_at && i == *ib.marker_at) out.marker = true;
        if (i < top) return {{after, out, Move::Right}};
        if (i == 0) return {{next, out, Move::Stay}};
        return {{back, out, Move::Left}};
      });
    }
    return {Where::Origin, ib.modulus.has_value(), false, ib.marker_at.has_value()};
  }

  Facts emit(const GuessBinary&, const std::string& entry, const std::string& next, Facts f,
             const std::string& prev) {
    if (f.where != Where::Start) chain_error(prev, "GuessBinary", std::string("expects the start of the tape, found ") + where_name(f.where));
    need_track("GuessBinary", "K");
    need_track("GuessBinary", "J");
    const std::string px = fresh_prefix();
    const std::string g0 = px + "G0", g1 = px + "G1", back = px + "back";
    as.define(back, [this, back, next](const Cell& c) -> Acts {
      if (c.edge) return as.go(next, c);
      return {{back, c, Move::Left}};
    });
    auto guess = [=](bool start, bool seen_one) {
      return [=](const Cell& c) -> Acts {
        if (c.beyond) return {{kReject, c, Move::Stay}};
        Cell base = c;
        if (start) base.edge = true;
        Acts out;
        out.push_back({seen_one ? g1 : g0, with_block(base, start, false, 0), Move::Right});
        out.push_back({g1, with_block(base, start, false, kJ), Move::Right});
        if (seen_one) out.push_back({back, with_block(base, false, true, kJ | kK), Move::Left});
        return out;
      };
    };
    as.define(entry, guess(true, false));
    as.define(g0, guess(false, false));
    as.define(g1, guess(false, true));
    return {Where::Origin, true, true, f.marker};
  }

  Facts emit(const CountFactor& cf, const std::string& entry, const std::string& next, Facts f,
             const std::string& prev) {
    if (f.where != Where::Origin) chain_error(prev, "CountFactor", std::string("expects a block at the origin, found ") + where_name(f.where));
    if (cf.reset && !f.modulus) chain_error(prev, "CountFactor", "reset needs a loaded modulus");
    if (cf.second == SecondCounter::OnWrap && !cf.reset) chain_error(prev, "CountFactor", "the second counter counts wraps of a reset counter");
    if (cf.second == SecondCounter::EveryStep && !f.second_modulus) chain_error(prev, "CountFactor", "no second modulus loaded");
    if (cf.second != SecondCounter::None) need_track("CountFactor", "D");
    if (cf.sieve != Sieve::None) {
      need_track("CountFactor", "P");
      if (!cf.reset) chain_error(prev, "CountFactor", "the sieve marks wraps of a reset counter");
    }
    if (cf.sieve == Sieve::XY) need_track("CountFactor", "S");

    const std::string px = fresh_prefix();
    const bool reset = cf.reset;
    const SecondCounter second = cf.second;
    const Sieve sieve = cf.sieve;
    const std::uint8_t dmod = second == SecondCounter::EveryStep ? kJ : kK;
    auto a_state = [px](int cc, int ec, int cd, int ed) {
      return px + "A" + flag(".c", cc) + flag("e", ec) + flag("d", cd) + flag("f", ed);
    };
    auto ret_state = [px](int cw, int dw) { return px + "Ret" + flag(".w", cw) + flag("v", dw); };
    auto b0_state = [px](int cw, int dw) { return px + "B0" + flag(".w", cw) + flag("v", dw); };
    auto b_state = [px](int cw, int dw, int cc, int cd, int pf, int pl, int pb) {
      return px + "B" + flag(".w", cw) + flag("v", dw) + flag("c", cc) + flag("d", cd) +
             flag("f", pf) + flag("l", pl) + flag("b", pb);
    };
    const std::string ext = px + "Ext", ret2 = px + "Ret2";
    const bool sweep_a = reset || second != SecondCounter::None;

    // Incremented bits of one cell; carries in and out. A wrap (cw, dw)
    // clears the counter instead.
    auto bump = [second](const Cell& c, int cw, int dw, int& cc, int& cd) {
      std::uint8_t bits = c.bits;
      const bool cbit = c.bit(kC);
      bits = set_bit(bits, kC, !cw && (cbit != static_cast<bool>(cc)));
      cc = !cw && cbit && cc;
      if (second != SecondCounter::None) {
        const bool dbit = c.bit(kD);
        bits = set_bit(bits, kD, !dw && (dbit != static_cast<bool>(cd)));
        cd = !dw && dbit && cd;
      }
      return bits;
    };

    as.define(entry, [=, this](const Cell& c) -> Acts {
      if (c.beyond) return as.go(next, c);
      if (!sweep_a) return as.go(b0_state(0, 0), c);
      return as.go(a_state(1, 1, 1, 1), c);
    });
    for (int cc = 0; cc < 2; ++cc)
      for (int ec = 0; ec < 2; ++ec)
        for (int cd = 0; cd < 2; ++cd)
          for (int ed = 0; ed < 2; ++ed) {
            as.define(a_state(cc, ec, cd, ed), [=, this](const Cell& c) -> Acts {
              if (!c.block) return {};
              const bool sc = c.bit(kC) != static_cast<bool>(cc);
              const int ncc = c.bit(kC) && cc;
              const int nec = ec && (sc == c.bit(kK));
              const bool sd = c.bit(kD) != static_cast<bool>(cd);
              const int ncd = c.bit(kD) && cd;
              const int ned = ed && (sd == c.bit(dmod));
              if (!c.last) return {{a_state(ncc, nec, ncd, ned), c, Move::Right}};
              const int cw = reset && nec && !ncc;
              int dw = 0;
              if (second == SecondCounter::OnWrap) dw = cw && ned && !ncd;
              if (second == SecondCounter::EveryStep) dw = ned && !ncd;
              if (c.first) return as.go(b0_state(cw, dw), c);
              return {{ret_state(cw, dw), c, Move::Left}};
            });
          }
    for (int cw = 0; cw < 2; ++cw)
      for (int dw = 0; dw < 2; ++dw) {
        as.define(ret_state(cw, dw), [=, this](const Cell& c) -> Acts {
          if (c.first) return as.go(b0_state(cw, dw), c);
          return {{ret_state(cw, dw), c, Move::Left}};
        });
        const bool event_always = second == SecondCounter::EveryStep;
        const bool event = event_always || (second == SecondCounter::OnWrap && cw);
        as.define(b0_state(cw, dw), [=](const Cell& c) -> Acts {
          if (!c.block || !c.first) return {};
          int cc = 1, cd = event ? 1 : 0;
          const std::uint8_t bits = bump(c, cw, event ? dw : 0, cc, cd);
          return {{b_state(cw, event ? dw : 0, cc, cd, 1, c.last, bits), cleared(c), Move::Right}};
        });
      }
    for (int cw = 0; cw < 2; ++cw)
      for (int dw = 0; dw < 2; ++dw)
        for (int cc = 0; cc < 2; ++cc)
          for (int cd = 0; cd < 2; ++cd)
            for (int pf = 0; pf < 2; ++pf)
              for (int pl = 0; pl < 2; ++pl)
                for (int pb = 0; pb < 32; ++pb) {
                  as.define(b_state(cw, dw, cc, cd, pf, pl, pb), [=](const Cell& c) -> Acts {
                    Cell out = with_block(c, pf, pl, static_cast<std::uint8_t>(pb));
                    if (pf && cw && !c.marker) {
                      if (sieve == Sieve::X && out.mark == 0) out.mark = 1;
                      if (sieve == Sieve::XY && (pb & kS)) out.mark = std::min<std::uint8_t>(out.mark + 1, 2);
                    }
                    if (pl) {
                      if (cc) {
                        out.last = false;
                        return {{ext, out, Move::Right}};
                      }
                      return {{ret2, out, pf ? Move::Stay : Move::Left}};
                    }
                    if (!c.block) return {};
                    int ncc = cc, ncd = cd;
                    const std::uint8_t bits = bump(c, cw, dw, ncc, ncd);
                    return {{b_state(cw, dw, ncc, ncd, 0, c.last, bits), out, Move::Right}};
                  });
                }
    as.define(ext, [ret2](const Cell& c) -> Acts {
      return {{ret2, with_block(c, false, true, kC), Move::Left}};
    });
    as.define(ret2, [=, this](const Cell& c) -> Acts {
      if (c.first) return as.go(entry, c);
      return {{ret2, c, Move::Left}};
    });
    return {Where::End, f.modulus, f.second_modulus, f.marker};
  }

  Facts emit(const NextPrimeScan& ns, const std::string& entry, const std::string& next, Facts f,
             const std::string& prev) {
    if (f.where != Where::End) chain_error(prev, "NextPrimeScan", std::string("expects a block past the input, found ") + where_name(f.where));
    if (!f.marker) chain_error(prev, "NextPrimeScan", "no prime marker on the tape");
    need_track("NextPrimeScan", "P");
    const std::string px = fresh_prefix();
    const std::string left = px + "left", find = px + "find";
    auto scan = [px](int k) { return px + "scan" + std::to_string(k); };
    const bool s_flag = layout.has("S");
    as.define(entry, [=](const Cell& c) -> Acts {
      if (!c.block) return {};
      return {{c.last ? left : entry, cleared(c), c.last ? Move::Left : Move::Right}};
    });
    as.define(left, [=, this](const Cell& c) -> Acts {
      if (c.edge) return as.go(find, c);
      return {{left, c, Move::Left}};
    });
    as.define(find, [=](const Cell& c) -> Acts {
      if (c.fresh) return {{kFault, c, Move::Stay}};
      if (!c.marker) return {{find, c, Move::Right}};
      Cell out = c;
      out.marker = false;
      return {{scan(0), out, Move::Right}};
    });
    for (int k = 0; k < 3; ++k) {
      as.define(scan(k), [=](const Cell& c) -> Acts {
        const int seen = k + (c.beyond ? 1 : 0);
        if (seen >= 3) return {{kFault, c, Move::Stay}};
        const bool candidate = c.mark == 0 || (ns.accept_x && c.mark == 1);
        if (!candidate) return {{scan(seen), c, Move::Right}};
        Cell out = with_block(c, true, true, (s_flag && c.mark == 0) ? kS : 0);
        out.marker = true;
        return {{next, out, Move::Stay}};
      });
    }
    return {Where::Candidate, false, false, true};
  }

  Facts emit(const ShiftBack&, const std::string& entry, const std::string& next, Facts f,
             const std::string& prev) {
    if (f.where != Where::Candidate) chain_error(prev, "ShiftBack", std::string("expects a fresh candidate block, found ") + where_name(f.where));
    need_track("ShiftBack", "K");
    const std::string px = fresh_prefix();
    const std::string inc0 = px + "Inc1", inc1 = px + "Inc0", ext = px + "Ext", sls = px + "SLs",
                      cv = px + "CV", back = px + "back";
    auto sl = [px](int pf, int pl, int pb) { return px + "SL" + flag(".f", pf) + flag("l", pl) + flag("b", pb); };
    as.define(entry, [=, this](const Cell& c) -> Acts {
      if (!c.block || !c.first) return {};
      if (c.edge) return as.go(cv, c);
      return as.go(inc0, c);
    });
    for (int car = 0; car < 2; ++car) {
      const std::string name = car ? inc0 : inc1;
      as.define(name, [=](const Cell& c) -> Acts {
        if (!c.block) return {};
        const bool cbit = c.bit(kC);
        Cell out = c;
        out.bits = set_bit(out.bits, kC, cbit != static_cast<bool>(car));
        const int ncar = cbit && car;
        if (!c.last) return {{ncar ? inc0 : inc1, out, Move::Right}};
        if (ncar) {
          out.last = false;
          return {{ext, out, Move::Right}};
        }
        return {{sls, out, Move::Stay}};
      });
    }
    as.define(ext, [=](const Cell& c) -> Acts {
      return {{sls, with_block(c, false, true, kC), Move::Stay}};
    });
    as.define(sls, [=](const Cell& c) -> Acts {
      if (!c.block || !c.last) return {};
      return {{sl(c.first, 1, c.bits), cleared(c), Move::Left}};
    });
    for (int pf = 0; pf < 2; ++pf)
      for (int pl = 0; pl < 2; ++pl)
        for (int pb = 0; pb < 32; ++pb) {
          as.define(sl(pf, pl, pb), [=](const Cell& c) -> Acts {
            Cell out = with_block(c, pf, pl, static_cast<std::uint8_t>(pb));
            if (pf) return {{entry, out, Move::Stay}};
            if (!c.block) return {};
            return {{sl(c.first, 0, c.bits), out, Move::Left}};
          });
        }
    as.define(back, [=, this](const Cell& c) -> Acts {
      if (c.first) return as.go(next, c);
      return {{back, c, Move::Left}};
    });
    as.define(cv, [=](const Cell& c) -> Acts {
      if (!c.block) return {};
      Cell out = c;
      std::uint8_t bits = set_bit(c.bits, kK, c.bit(kC));
      bits = set_bit(bits, kC, false);
      bits = set_bit(bits, kD, false);
      out.bits = bits;
      if (!c.last) return {{cv, out, Move::Right}};
      return {{back, out, c.first ? Move::Stay : Move::Left}};
    });
    return {Where::Origin, true, false, true};
  }

  Facts emit(const LoopWhile& loop, const std::string& entry, const std::string& next, Facts f,
             const std::string& prev) {
    if (loop.body.empty()) throw Error(ErrorCode::Compile, "LoopWhile with an empty body");
    if (f.where == Where::Unreachable) return f;
    std::string body_entry = entry;
    if (!loop.condition.empty()) {
      check_literals(loop.condition, f, prev, "LoopWhile");
      body_entry = fresh_prefix() + "body";
      emit_test(loop.condition, entry, body_entry, next, f);
    }
    const Facts after = sequence(loop.body, body_entry, entry, f, loop.condition.empty() ? prev : "LoopWhile");
    if (!(after == f) && after.where != Where::Unreachable) {
      throw Error(ErrorCode::Compile, std::string("LoopWhile body ends with ") + where_name(after.where) +
                                          " but starts with " + where_name(f.where));
    }
    if (loop.condition.empty()) return {Where::Unreachable, false, false, false};
    return f;
  }
};

void collect_tracks(const std::vector<Phase>& phases, std::set<std::string>& out) {
  for (const Phase& p : phases) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, InitBlock>) {
            if (x.modulus) out.insert("K");
            if (x.marker_at) out.insert("M");
            if (x.prime_flag) out.insert("S");
          } else if constexpr (std::is_same_v<T, GuessBinary>) {
            out.insert("K");
            out.insert("J");
          } else if constexpr (std::is_same_v<T, CountFactor>) {
            if (x.reset) out.insert("K");
            if (x.second != SecondCounter::None) out.insert("D");
            if (x.sieve != Sieve::None) out.insert("P");
            if (x.sieve == Sieve::XY) {
              out.insert("S");
              out.insert("PY");
            }
          } else if constexpr (std::is_same_v<T, Branch>) {
            for (const Literal& l : x.when) {
              if (l.atom == Atom::SecondZero) out.insert("D");
            }
          } else if constexpr (std::is_same_v<T, NextPrimeScan>) {
            out.insert("P");
            out.insert("M");
          } else if constexpr (std::is_same_v<T, ShiftBack>) {
            out.insert("K");
          } else {
            for (const Literal& l : x.condition) {
              if (l.atom == Atom::SecondZero) out.insert("D");
            }
            collect_tracks(x.body, out);
          }
        },
        p);
  }
}

}  // namespace

bool TrackLayout::has(const std::string& name) const {
  return std::any_of(tracks.begin(), tracks.end(), [&](const Track& t) { return t.name == name; });
}

TrackLayout layout_for(const GadgetProgram& program) {
  std::set<std::string> used;
  collect_tracks(program.phases, used);
  TrackLayout l;
  l.tracks.push_back({"input", {"a", "."}});
  l.tracks.push_back({"edge", {"0", "1"}});
  if (used.count("P")) {
    if (used.count("PY")) l.tracks.push_back({"P", {"-", "X", "Y"}});
    else l.tracks.push_back({"P", {"-", "X"}});
  }
  if (used.count("M")) l.tracks.push_back({"M", {"0", "1"}});
  l.tracks.push_back({"block", {"none", "inner", "first", "last", "first+last"}});
  l.tracks.push_back({"C", {"0", "1"}});
  for (const char* col : {"D", "K", "J", "S"}) {
    if (used.count(col)) l.tracks.push_back({col, {"0", "1"}});
  }
  return l;
}

MachineSpec compile(const GadgetProgram& program, const TrackLayout& layout) {
  Compiler c{layout, {}, kC, false, 0};
  const std::string entry = program.phases.empty() ? kReject : "start";
  if (!program.phases.empty()) c.sequence(program.phases, entry, kReject, Facts{}, "the program start");
  MachineSpec spec = c.as.assemble(entry);
  auto violations = validate_machine(spec);
  if (!violations.empty()) {
    throw Error(ErrorCode::Compile, "internal: compiled machine is invalid: " + violations.front().message);
  }
  return spec;
}

MachineSpec compile(const GadgetProgram& program) { return compile(program, layout_for(program)); }

GadgetProgram program_L0() {
  GadgetProgram p;
  p.name = "L0";
  p.phases.push_back(reject_if({{Atom::InputEmpty}}));
  p.phases.push_back(InitBlock{2, 2, false});
  LoopWhile loop;
  loop.body.push_back(CountFactor{true, SecondCounter::OnWrap, Sieve::X});
  loop.body.push_back(accept_if({{Atom::CounterZero, true}, {Atom::ModulusIsTwo, true}}));
  loop.body.push_back(reject_if({{Atom::CounterZero, true}}));
  loop.body.push_back(reject_if({{Atom::SecondZero}}));
  loop.body.push_back(NextPrimeScan{false});
  loop.body.push_back(ShiftBack{});
  p.phases.push_back(std::move(loop));
  return p;
}

GadgetProgram program_LAM() {
  GadgetProgram p;
  p.name = "LAM";
  p.phases.push_back(reject_if({{Atom::InputEmpty}}));
  p.phases.push_back(InitBlock{2, 2, true});
  LoopWhile loop;
  loop.body.push_back(CountFactor{true, SecondCounter::None, Sieve::XY});
  loop.body.push_back(accept_if({{Atom::CounterZero, true}, {Atom::ModulusPowerOfTwo}}));
  loop.body.push_back(reject_if({{Atom::CounterZero, true}}));
  loop.body.push_back(NextPrimeScan{true});
  loop.body.push_back(ShiftBack{});
  p.phases.push_back(std::move(loop));
  return p;
}

GadgetProgram program_coLAM() {
  GadgetProgram p;
  p.name = "coLAM";
  p.phases.push_back(reject_if({{Atom::InputEmpty}}));
  p.phases.push_back(GuessBinary{});
  p.phases.push_back(CountFactor{true, SecondCounter::EveryStep, Sieve::None});
  p.phases.push_back(accept_if({{Atom::CounterZero}, {Atom::SecondZero, true}}));
  return p;
}

GadgetProgram program_counter() {
  GadgetProgram p;
  p.name = "counter";
  p.phases.push_back(InitBlock{});
  p.phases.push_back(CountFactor{false, SecondCounter::None, Sieve::None});
  p.phases.push_back(accept_if({{Atom::Always}}));
  return p;
}

namespace {

// Field letters in a compiled symbol name, e.g. "ae[fK]" or ".x[lCD]".
bool symbol_field(const std::string& name, char column, bool* in_block, bool* first) {
  const auto open = name.find('[');
  if (open == std::string::npos) {
    *in_block = false;
    return false;
  }
  *in_block = true;
  const std::string body = name.substr(open + 1, name.size() - open - 2);
  *first = body.find('f') != std::string::npos;
  return body.find(column) != std::string::npos;
}

}  // namespace

std::optional<std::size_t> block_start(const MachineSpec& spec, const std::vector<Symbol>& tape) {
  for (std::size_t i = 0; i < tape.size(); ++i) {
    bool in = false, first = false;
    symbol_field(spec.symbol_name(tape[i]), 'C', &in, &first);
    if (in && first) return i;
  }
  return std::nullopt;
}

std::uint64_t block_value(const MachineSpec& spec, const std::vector<Symbol>& tape,
                          std::size_t first, char column) {
  std::uint64_t v = 0;
  for (std::size_t i = first, bit = 0; i < tape.size() && bit < 64; ++i, ++bit) {
    bool in = false, f = false;
    const bool set = symbol_field(spec.symbol_name(tape[i]), column, &in, &f);
    if (!in || (i > first && f)) break;
    if (set) v |= std::uint64_t{1} << bit;
    const std::string& name = spec.symbol_name(tape[i]);
    if (name.find('l', name.find('[')) != std::string::npos) break;
  }
  return v;
}

GuessScript guess_script_coLAM(std::uint64_t n) {
  if (n == 0) throw Error(ErrorCode::NoWitness, "a^0 is outside the complement language");
  const std::uint64_t q = smallest_nondivisor(n);
  if (is_power_of_two(q)) {
    throw Error(ErrorCode::NoWitness, "q(" + std::to_string(n) + ") = " + std::to_string(q) +
                                          " is a power of 2: no accepting computation");
  }
  unsigned s = 0;
  while ((std::uint64_t{2} << s) <= q) ++s;
  GuessScript g;
  for (unsigned i = 0; i < s; ++i) g.choices.push_back(static_cast<std::uint32_t>((q >> i) & 1u));
  g.choices.push_back(2);
  return g;
}

namespace {

MachineSpec simple_machine(const std::string& name) {
  MachineBuilder b;
  auto st = [&](const char* s) { return b.state(s); };
  const StateId q0 = st("q0");
  const Symbol a = b.symbol("a", true);
  const Symbol blank = b.symbol("_");
  b.set_blank(blank);
  const Symbol hash = b.symbol("x");
  const StateId acc = st("acc"), rej = st("rej");
  b.set_accepting(acc);
  b.set_rejecting(rej);
  if (name == "sweeper") {
    b.add(q0, a, q0, a, Move::Right);
    b.add(q0, blank, acc, hash, Move::Right);
  } else if (name == "mod2" || name == "mod3") {
    const int m = name == "mod2" ? 2 : 3;
    std::vector<StateId> r{q0};
    for (int i = 1; i < m; ++i) r.push_back(st(("r" + std::to_string(i)).c_str()));
    for (int i = 0; i < m; ++i) {
      b.add(r[i], a, r[(i + 1) % m], a, Move::Right);
      b.add(r[i], blank, i == 0 ? acc : rej, hash, Move::Right);
    }
  } else if (name == "bounce") {
    // Even length: sweep right keeping parity, come back to the marked
    // first cell and decide there.
    const Symbol first = b.symbol("A");
    const StateId e = st("e"), o = st("o"), be = st("be"), bo = st("bo");
    b.add(q0, a, o, first, Move::Right);
    b.add(q0, blank, acc, hash, Move::Stay);
    b.add(e, a, o, a, Move::Right);
    b.add(o, a, e, a, Move::Right);
    b.add(e, blank, be, hash, Move::Left);
    b.add(o, blank, bo, hash, Move::Left);
    b.add(be, a, be, a, Move::Left);
    b.add(bo, a, bo, a, Move::Left);
    b.add(be, first, acc, first, Move::Stay);
    b.add(bo, first, rej, first, Move::Stay);
  } else if (name == "zigzag") {
    // Length divisible by 3, decided on a second left-to-right pass.
    const Symbol first = b.symbol("A");
    const StateId r1 = st("r1"), l1 = st("l1");
    const StateId c[3] = {st("c0"), st("c1"), st("c2")};
    b.add(q0, a, r1, first, Move::Right);
    b.add(q0, blank, acc, hash, Move::Stay);
    b.add(r1, a, r1, a, Move::Right);
    b.add(r1, blank, l1, hash, Move::Left);
    b.add(l1, a, l1, a, Move::Left);
    b.add(l1, first, c[1], first, Move::Right);
    for (int i = 0; i < 3; ++i) {
      b.add(c[i], a, c[(i + 1) % 3], a, Move::Right);
      b.add(c[i], hash, i == 0 ? acc : rej, hash, Move::Stay);
    }
  }
  return b.build();
}

MachineCatalogEntry make_simple(const std::string& name, std::function<bool(std::uint64_t)> oracle,
                                const std::string& crossing) {
  MachineCatalogEntry e;
  e.name = name;
  e.spec = std::make_shared<const MachineSpec>(simple_machine(name));
  e.oracle = std::move(oracle);
  e.time_bound = "O(n)";
  e.crossing_bound = crossing;
  return e;
}

Decision colam_decide(const MachineSpec& spec, std::span<const Symbol> word) {
  const std::uint64_t n = word.size();
  if (!member_coLAM(n)) return Decision::Reject;
  const Trace t = run_scripted(spec, word, guess_script_coLAM(n), std::uint64_t{1} << 40);
  return t.outcome == Outcome::Accepted ? Decision::Accept : Decision::Inconclusive;
}

std::map<std::string, MachineCatalogEntry> build_catalog() {
  std::map<std::string, MachineCatalogEntry> cat;
  {
    MachineCatalogEntry e;
    e.name = "L0";
    e.spec = std::make_shared<const MachineSpec>(compile(program_L0()));
    e.oracle = member_L0;
    e.time_bound = "O(n log n)";
    e.crossing_bound = "O(log n)";
    cat.emplace(e.name, e);
  }
  {
    MachineCatalogEntry e;
    e.name = "LAM";
    e.spec = std::make_shared<const MachineSpec>(compile(program_LAM()));
    e.oracle = member_LAM;
    e.time_bound = "O(n log n)";
    e.crossing_bound = "O(log n)";
    cat.emplace(e.name, e);
  }
  {
    MachineCatalogEntry e;
    e.name = "coLAM";
    e.spec = std::make_shared<const MachineSpec>(compile(program_coLAM()));
    e.oracle = member_coLAM;
    e.deterministic = false;
    e.measure = MeasureKind::Weak;
    e.time_bound = "O(n log log n)";
    e.crossing_bound = "O(log log n)";
    e.scripts = [](std::uint64_t n) -> std::optional<GuessScript> {
      if (!member_coLAM(n)) return std::nullopt;
      return guess_script_coLAM(n);
    };
    auto spec = e.spec;
    e.decider = [spec](std::span<const Symbol> w) { return colam_decide(*spec, w); };
    cat.emplace(e.name, e);
  }
  {
    MachineCatalogEntry e;
    e.name = "counter";
    e.spec = std::make_shared<const MachineSpec>(compile(program_counter()));
    e.oracle = [](std::uint64_t) { return true; };
    e.time_bound = "O(n log n)";
    e.crossing_bound = "O(log n)";
    cat.emplace(e.name, e);
  }
  cat.emplace("sweeper", make_simple("sweeper", [](std::uint64_t) { return true; }, "1"));
  cat.emplace("mod2", make_simple("mod2", [](std::uint64_t n) { return n % 2 == 0; }, "1"));
  cat.emplace("mod3", make_simple("mod3", [](std::uint64_t n) { return n % 3 == 0; }, "1"));
  cat.emplace("bounce", make_simple("bounce", [](std::uint64_t n) { return n % 2 == 0; }, "2"));
  cat.emplace("zigzag", make_simple("zigzag", [](std::uint64_t n) { return n % 3 == 0; }, "3"));
  for (auto& [name, e] : cat) {
    if (!e.decider && e.deterministic) {
      auto spec = e.spec;
      e.decider = [spec](std::span<const Symbol> w) {
        const Trace t = run_deterministic(*spec, w, std::uint64_t{1} << 40);
        return t.outcome == Outcome::Accepted ? Decision::Accept : Decision::Reject;
      };
    }
  }
  return cat;
}

const std::map<std::string, MachineCatalogEntry>& catalog() {
  static const std::map<std::string, MachineCatalogEntry> cat = build_catalog();
  return cat;
}

}  // namespace

const MachineCatalogEntry& machine_L0() { return catalog_entry("L0"); }
const MachineCatalogEntry& machine_LAM() { return catalog_entry("LAM"); }
const MachineCatalogEntry& machine_coLAM() { return catalog_entry("coLAM"); }

std::vector<std::string> catalog_names() {
  return {"L0", "LAM", "coLAM", "counter", "sweeper", "mod2", "mod3", "bounce", "zigzag"};
}

const MachineCatalogEntry& catalog_entry(const std::string& name) {
  const auto& cat = catalog();
  auto it = cat.find(name);
  if (it == cat.end()) throw Error(ErrorCode::InvalidArgument, "unknown catalog machine '" + name + "'");
  return it->second;
}

}  // namespace tmlab
