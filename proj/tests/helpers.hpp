// Small machines shared by the unit tests.

#ifndef TMLAB_TESTS_HELPERS_HPP_
#define TMLAB_TESTS_HELPERS_HPP_

#include <string>
#include <vector>

#include "tmlab/machine.hpp"

namespace tmtest {

// Two states: sweep right over a's, accept on the first blank.
inline const char* kSweeper = R"(
states: q0 acc
input: a
tape: x
blank: _
initial: q0
accept: acc
transitions:
(q0, a) -> (q0, a, R)
(q0, _) -> (acc, x, R)
)";

// Branches once on the first cell: one branch accepts after 3 moves, the
// other after 5.
inline const char* kTwoBranch = R"(
states: q0 r1 r2 s1 s2 s3 s4 acc
input: a
tape: x
blank: _
accept: acc
transitions:
(q0, a) -> (r1, x, R)
(q0, a) -> (s1, x, R)
(r1, _) -> (r2, x, R)
(r2, _) -> (acc, x, S)
(s1, _) -> (s2, x, R)
(s2, _) -> (s3, x, L)
(s3, x) -> (s4, x, R)
(s4, x) -> (acc, x, S)
)";

// Loops forever in place.
inline const char* kLooper = R"(
states: q0
input: a
tape: b
blank: _
transitions:
(q0, a) -> (q0, b, S)
(q0, b) -> (q0, a, S)
(q0, _) -> (q0, a, S)
)";

// Right, then left across boundary 1, then accept.
inline const char* kBackAndForth = R"(
states: q0 q1 q2 acc
input: a
tape: b
blank: _
accept: acc
transitions:
(q0, a) -> (q1, b, R)
(q1, a) -> (q2, b, L)
(q2, b) -> (acc, b, S)
)";

inline tmlab::MachineSpec machine(const char* text) { return tmlab::parse_machine_text(text); }

inline std::vector<tmlab::Symbol> word(const tmlab::MachineSpec& spec, const std::string& text) {
  return spec.parse_input(text);
}

}  // namespace tmtest

#endif  // TMLAB_TESTS_HELPERS_HPP_
