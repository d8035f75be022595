#pragma once

// From a block of nearly full conditional entropy, find the threshold t and
// evaluate the three probabilities
//   P_upper = Pr[sum_{k<=j} X_k >= t + l/2 + d/2 + c^{1/3} sqrt(d)]
//   P_lower = Pr[sum_{k<=i} X_k <  t + l/2]
//   P_joint = Pr[both]
// exactly, with l = i - p and d = j - i. Real-valued right-hand sides are
// compared against integer sums without rounding.

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include "cellprobe/bitvector.hpp"
#include "cellprobe/distribution.hpp"
#include "cellprobe/rational.hpp"

namespace cellprobe {

// The uniform distribution on {0,1}^n, handled with binomial arithmetic so
// that n may be in the hundreds.
struct UniformBits {
    std::size_t n = 0;
};

// Either an explicit distribution over bit strings or UniformBits.
using BitSource = std::variant<Distribution, UniformBits>;

std::size_t source_length(const BitSource& source);

// Pr[Bin(trials, 1/2) >= threshold].
Rational binomial_tail(std::uint64_t trials, std::int64_t threshold);
// Pr[Bin(trials, 1/2) = k].
Rational binomial_point(std::uint64_t trials, std::int64_t k);

// Smallest integer K with K >= base + c^{1/3} sqrt(d), decided exactly.
std::int64_t ceil_shifted(const Rational& base, const Rational& c, std::uint64_t d);

struct CentralBinomial {
    std::uint64_t m = 0;
    bool lower_holds = false;  // Pr[Bin(m) = floor(m/2)] >= 1 / (2 sqrt m)
    bool upper_holds = false;  // Pr[Bin(m) = floor(m/2)] <= 1 / sqrt m
};
CentralBinomial central_binomial_bounds(std::uint64_t m);

struct GoodPrefixSet {
    std::size_t p = 0;
    std::size_t j = 0;
    double c = 0;
    bool all_prefixes = false;        // A = {0,1}^p (uniform source)
    std::vector<BitVector> members;   // A when not all_prefixes, lexicographic
    Rational probability;             // Pr[Y in A]
    double measured_entropy = 0;      // H(X_{p+1..j} | X_{1..p})
    double required_entropy = 0;      // (j - p) - 1/c
    bool hypothesis_holds = false;
};

// A = {y in {0,1}^p : Pr[Y = y] > 0, H(X_{p+1..j} | Y = y) >= (j - p) - 2/c}.
// Throws HypothesisError when H(X_{p+1..j} | X_{1..p}) < (j - p) - 1/c.
GoodPrefixSet good_prefix_set(const BitSource& source, std::size_t p, std::size_t j, double c);
// Same set, with the hypothesis only recorded.
GoodPrefixSet good_prefix_set_unchecked(const BitSource& source, std::size_t p, std::size_t j,
                                        double c);

struct Threshold {
    std::int64_t t = 0;
    Rational at_t;          // Pr[Y in A and sum Y >= t]      (>= 1/4)
    Rational at_t_plus_1;   // Pr[Y in A and sum Y >= t + 1]  (< 1/4)
    Rational at_most_t;     // Pr[Y in A and sum Y <= t]      (>= 1/4)
};

// Largest t with Pr[Y in A and sum Y >= t] >= 1/4. Throws DomainError when
// no such t exists (Pr[Y in A] < 1/4).
Threshold find_threshold(const BitSource& source, const GoodPrefixSet& a);

struct EntropySumWitness {
    std::size_t p = 0, i = 0, j = 0;
    std::size_t ell = 0;  // i - p
    std::size_t d = 0;    // j - i
    double c = 0;
    GoodPrefixSet prefix_set;
    Threshold threshold;
    bool spacing_holds = false;       // l >= c d
    Rational upper_base;              // t + l/2 + d/2
    std::int64_t upper_cutoff = 0;    // smallest integer >= upper_base + c^{1/3} sqrt(d)
    Rational lower_cut;               // t + l/2
    Rational p_upper;
    Rational p_lower;                 // strict: sum < t + l/2
    Rational p_lower_nonstrict;       // sum <= t + l/2
    bool lower_forms_differ = false;
    Rational p_joint;
    bool upper_ok = false;            // P_upper >= 1/10
    bool lower_ok = false;            // P_lower >= 1/10
    bool joint_ok = false;            // P_joint <= 1/1000
    bool holds = false;
    // P_joint <= Pr[Bin(d) >= d/2 + c^{1/3} sqrt d] + TV(X_{i+1..j}, uniform).
    Rational tail_bound;
    Rational block_tv;
    bool joint_chain_holds = false;
};

// Throws ParameterError unless 0 <= p < i < j <= n and c > 0. Spacing and
// the entropy hypothesis are recorded in the witness, not enforced.
EntropySumWitness entropy_sum_analysis(const BitSource& source, std::size_t p, std::size_t i,
                                       std::size_t j, double c);

}  // namespace cellprobe
