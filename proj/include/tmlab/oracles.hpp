// Reference implementations used to check the machines: number theory for
// the unary languages, a naive measure evaluator and the unary DFA bound.

#ifndef TMLAB_ORACLES_HPP_
#define TMLAB_ORACLES_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tmlab/machine.hpp"
#include "tmlab/metering.hpp"

namespace tmlab {

// q(n): least k >= 2 not dividing n. Throws InvalidArgument for n = 0.
std::uint64_t smallest_nondivisor(std::uint64_t n);

// Defined for k >= 2 only.
bool is_power_of_two(std::uint64_t k);
bool is_prime_power(std::uint64_t k);

std::vector<std::uint64_t> primes_upto(std::uint64_t m);

// n = 0 is outside all three languages.
bool member_L0(std::uint64_t n);
bool member_LAM(std::uint64_t n);
bool member_coLAM(std::uint64_t n);

// Some (s, t) with 2^s < t < 2^(s+1), 2^s | n and t not dividing n, found
// by exhaustive search; nullopt if none exists.
std::optional<std::pair<unsigned, std::uint64_t>> colam_witness(std::uint64_t n);

enum class UnaryLanguage : std::uint8_t { L0, LAM, coLAM };
std::optional<UnaryLanguage> parse_language(const std::string& name);
const char* language_name(UnaryLanguage l);
bool member(UnaryLanguage l, std::uint64_t n);

struct UnaryBits {
  std::size_t n_max = 0;
  std::vector<std::uint8_t> bits;  // size n_max + 1
};

UnaryBits language_bits(UnaryLanguage l, std::size_t n_max);

// Fewest states t + p of a tail/cycle unary DFA agreeing with `bits` on
// lengths 0..n_max.
std::size_t min_consistent_unary_dfa(const UnaryBits& bits);

// ceil((n + 3) / 2)
std::uint64_t karp_bound(std::uint64_t n);

struct BruteMeasure {
  std::uint64_t value = 0;
  bool exact = true;     // no computation was cut off by fuel
  bool accepted = false;
  std::uint64_t computations = 0;
};

// Naive recursive evaluation of a measure, copying configurations and
// scanning the transition list at every step. Throws CapExceeded beyond
// `max_computations` leaves.
BruteMeasure brute_force_measure(const MachineSpec& spec, std::span<const Symbol> input,
                                 Resource resource, MeasureKind kind, std::uint64_t fuel,
                                 std::uint64_t max_computations = 1u << 20);

}  // namespace tmlab

#endif  // TMLAB_ORACLES_HPP_
