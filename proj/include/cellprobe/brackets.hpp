#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "cellprobe/bitvector.hpp"
#include "cellprobe/rational.hpp"

namespace cellprobe {

// Bracket strings share BitVector semantics: 1 = open '(', 0 = closed ')'.

// Accepts either "(()())" or "110100".
BitVector parse_brackets(std::string_view text);
std::string to_brackets(const BitVector& x);

// True iff every prefix has #open >= #closed and the totals agree.
// The empty string is balanced.
bool is_balanced(const BitVector& x);

// Stack-scan pairing of an arbitrary (possibly unbalanced) string: entry k
// holds the 1-indexed partner of position k+1, or 0 when unmatched.
std::vector<std::size_t> match_partners(const BitVector& x);

// Match(i) for balanced x, 1 <= i <= n.
std::size_t match_index(const BitVector& x, std::size_t i);

// |Bal(n)| = C(n, n/2) / (n/2 + 1).
BigInt catalan_count(std::size_t n);

inline constexpr std::size_t kMaxEnumeratedBracketLength = 28;

// Bal(n) in lexicographic order of the bit strings.
std::vector<BitVector> enumerate_bal(std::size_t n);
void for_each_bal(std::size_t n, const std::function<void(const BitVector&)>& visit);

inline constexpr std::size_t kMaxWalkLength = 26;

// Pr over uniform x in {0,1}^d that x_1 is open and not matched by x_2..x_d.
Rational unmatched_open_prob(std::size_t d);
// Pr over uniform x in {0,1}^d that x_d is closed and not matched by x_1..x_{d-1}.
Rational unmatched_close_prob(std::size_t d);

}  // namespace cellprobe
