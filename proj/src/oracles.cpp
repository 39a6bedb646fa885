#include "tmlab/oracles.hpp"

#include <algorithm>
#include <map>

namespace tmlab {

std::uint64_t smallest_nondivisor(std::uint64_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "q(0) is undefined: every integer divides 0");
  std::uint64_t k = 2;
  while (n % k == 0) ++k;
  return k;
}

bool is_power_of_two(std::uint64_t k) {
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "is_power_of_two is defined for k >= 2");
  return (k & (k - 1)) == 0;
}

bool is_prime_power(std::uint64_t k) {
  if (k < 2) return false;
  std::uint64_t p = 2;
  while (p * p <= k && k % p != 0) ++p;
  if (k % p != 0) return true;  // k itself is prime
  while (k % p == 0) k /= p;
  return k == 1;
}

std::vector<std::uint64_t> primes_upto(std::uint64_t m) {
  std::vector<std::uint64_t> out;
  if (m < 2) return out;
  std::vector<bool> composite(m + 1, false);
  for (std::uint64_t i = 2; i <= m; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= m; j += i) composite[j] = true;
  }
  return out;
}

bool member_L0(std::uint64_t n) {
  if (n == 0) return false;
  // The loop of the recognition algorithm, over increasing primes.
  std::uint64_t p = 2;
  auto next_prime = [](std::uint64_t x) {
    for (++x;; ++x) {
      bool prime = true;
      for (std::uint64_t d = 2; d * d <= x && prime; ++d) prime = x % d != 0;
      if (prime) return x;
    }
  };
  std::size_t t = 0;
  while (n % p == 0 && n % (p * p) != 0) {
    ++t;
    p = next_prime(p);
  }
  return t >= 1 && n % p != 0;
}

bool member_LAM(std::uint64_t n) {
  if (n == 0) return false;
  return is_power_of_two(smallest_nondivisor(n));
}

bool member_coLAM(std::uint64_t n) {
  if (n == 0) return false;
  return !member_LAM(n);
}

std::optional<std::pair<unsigned, std::uint64_t>> colam_witness(std::uint64_t n) {
  if (n == 0) return std::nullopt;
  for (unsigned s = 1; (std::uint64_t{1} << s) <= n; ++s) {
    const std::uint64_t lo = std::uint64_t{1} << s;
    if (n % lo != 0) break;
    for (std::uint64_t t = lo + 1; t < 2 * lo; ++t) {
      if (n % t != 0) return std::make_pair(s, t);
    }
  }
  return std::nullopt;
}

std::optional<UnaryLanguage> parse_language(const std::string& name) {
  if (name == "L0") return UnaryLanguage::L0;
  if (name == "LAM") return UnaryLanguage::LAM;
  if (name == "coLAM") return UnaryLanguage::coLAM;
  return std::nullopt;
}

const char* language_name(UnaryLanguage l) {
  switch (l) {
    case UnaryLanguage::L0: return "L0";
    case UnaryLanguage::LAM: return "LAM";
    case UnaryLanguage::coLAM: return "coLAM";
  }
  return "?";
}

bool member(UnaryLanguage l, std::uint64_t n) {
  switch (l) {
    case UnaryLanguage::L0: return member_L0(n);
    case UnaryLanguage::LAM: return member_LAM(n);
    case UnaryLanguage::coLAM: return member_coLAM(n);
  }
  return false;
}

UnaryBits language_bits(UnaryLanguage l, std::size_t n_max) {
  UnaryBits b;
  b.n_max = n_max;
  b.bits.resize(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) b.bits[n] = member(l, n) ? 1 : 0;
  return b;
}

std::size_t min_consistent_unary_dfa(const UnaryBits& bits) {
  const std::size_t len = bits.bits.size();
  if (len == 0) return 1;
  std::size_t best = len + 1;
  for (std::size_t p = 1; p <= len; ++p) {
    // The tail must cover every i with bits[i] != bits[i + p].
    std::size_t t = 0;
    for (std::size_t i = 0; i + p < len; ++i) {
      if (bits.bits[i] != bits.bits[i + p]) t = i + 1;
    }
    best = std::min(best, t + p);
  }
  return best;
}

std::uint64_t karp_bound(std::uint64_t n) { return (n + 4) / 2; }

namespace {

struct BruteConfig {
  StateId state;
  std::size_t head;
  std::vector<Symbol> tape;
  std::map<std::size_t, std::uint64_t> crossings;
  std::uint64_t time;
};

struct BruteState {
  const MachineSpec& spec;
  Resource resource;
  std::uint64_t fuel;
  std::uint64_t cap;
  BruteMeasure out;
  std::uint64_t strong = 0;
  std::optional<std::uint64_t> accept_max, weak;

  void leaf(const BruteConfig& c, Outcome o) {
    if (++out.computations > cap) {
      throw Error(ErrorCode::CapExceeded, "brute-force enumeration exceeds " + std::to_string(cap) +
                                              " computations");
    }
    std::uint64_t v = c.time;
    if (resource == Resource::Crossing) {
      v = 0;
      for (const auto& [b, count] : c.crossings) v = std::max(v, count);
    }
    strong = std::max(strong, v);
    if (o == Outcome::FuelExhausted) out.exact = false;
    if (o == Outcome::Accepted) {
      out.accepted = true;
      accept_max = std::max(accept_max.value_or(0), v);
      weak = std::min(weak.value_or(v), v);
    }
  }

  void visit(const BruteConfig& c) {
    if (spec.is_accepting(c.state)) return leaf(c, Outcome::Accepted);
    if (spec.is_rejecting(c.state)) return leaf(c, Outcome::Rejected);
    const Symbol read = c.head < c.tape.size() ? c.tape[c.head] : spec.blank();
    std::vector<Transition> moves;
    for (const Transition& t : spec.transitions()) {
      if (t.from == c.state && t.read == read) moves.push_back(t);
    }
    if (moves.empty()) return leaf(c, Outcome::Hung);
    if (c.time >= fuel) return leaf(c, Outcome::FuelExhausted);
    for (const Transition& t : moves) {
      if (t.move == Move::Left && c.head == 0) {
        leaf(c, Outcome::Hung);
        continue;
      }
      BruteConfig next = c;
      if (next.head >= next.tape.size()) next.tape.resize(next.head + 1, spec.blank());
      next.tape[next.head] = t.write;
      next.state = t.to;
      next.time = c.time + 1;
      if (t.move == Move::Right) {
        ++next.crossings[next.head + 1];
        ++next.head;
      } else if (t.move == Move::Left) {
        ++next.crossings[next.head];
        --next.head;
      }
      visit(next);
    }
  }
};

}  // namespace

BruteMeasure brute_force_measure(const MachineSpec& spec, std::span<const Symbol> input,
                                 Resource resource, MeasureKind kind, std::uint64_t fuel,
                                 std::uint64_t max_computations) {
  BruteState st{spec, resource, fuel, max_computations, {}, 0, std::nullopt, std::nullopt};
  st.visit({spec.initial_state(), 0, {input.begin(), input.end()}, {}, 0});
  BruteMeasure out = st.out;
  switch (kind) {
    case MeasureKind::Strong: out.value = st.strong; break;
    case MeasureKind::Accept: out.value = st.accept_max.value_or(0); break;
    case MeasureKind::Weak: out.value = st.weak.value_or(0); break;
  }
  return out;
}

}  // namespace tmlab
