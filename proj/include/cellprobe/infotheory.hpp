#pragma once

// Exact entropy and statistical-distance computations over explicit
// distributions, and the two good-set constructions: blocks that keep
// near-full conditional entropy, and cells whose q-wise marginals stay
// close to uniform.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cellprobe/distribution.hpp"
#include "cellprobe/rational.hpp"

namespace cellprobe {

// Shannon entropy in bits (0 lg 1/0 = 0).
double entropy(const Distribution& dist);
// Entropy of the marginal on `coords`.
double entropy(const Distribution& dist, std::span<const std::size_t> coords);
// H(target | given) = E_g H(target | given = g), computed by grouping the
// support on the `given` coordinates. An empty `given` is unconditional.
double conditional_entropy(const Distribution& dist, std::span<const std::size_t> target,
                           std::span<const std::size_t> given);

// Half the L1 distance. Throws DomainError when the alphabets differ.
Rational tv_distance(const Distribution& a, const Distribution& b);
// Distance to the uniform distribution on the whole product space.
Rational tv_to_uniform(const Distribution& dist);
// Distance of the marginal on `coords` to uniform on its product space.
Rational marginal_tv_to_uniform(const Distribution& dist, std::span<const std::size_t> coords);

struct HighEntropyCheck {
    double entropy = 0;
    double lg_size = 0;          // lg |S|
    double alpha = 0;
    bool precondition_holds = false;  // H >= lg|S| - alpha (1e-9 slack)
    Rational distance;           // TV to uniform; meaningful only if the precondition holds
    double bound = 0;            // 4 sqrt(alpha)
    bool holds = false;          // distance <= 4 sqrt(alpha), exactly
};

// High entropy implies close to uniform, on S = the product space.
HighEntropyCheck check_high_entropy_uniform(const Distribution& dist, double alpha);

inline constexpr double kEntropyTolerance = 1e-9;

struct GoodBlocksReport {
    std::vector<std::size_t> good;          // G, 1-based block indices
    std::vector<std::size_t> block_sizes;   // s_1..s_k
    std::vector<double> conditional_entropy;  // H(Z_i | Z_1..Z_{i-1})
    std::vector<double> deficiency;         // s_i - H(Z_i | Z_<i)
    double a = 0;                           // n - H(X)
    double deficiency_sum = 0;
    double epsilon = 0;
    double size_bound = 0;                  // k - a / epsilon
    bool size_bound_satisfied = false;
    // TV(Z_i, uniform) for i in G, aligned with `good`.
    std::vector<Rational> tv_to_uniform;
    bool tv_clause_holds = false;           // all of them <= 4 sqrt(epsilon)
};

// X is a distribution over {0,1}^n (in the intended use, uniform over a
// subset); blocks Z_i are consecutive runs of s_i coordinates. Membership
// in G uses the kEntropyTolerance slack.
GoodBlocksReport good_blocks(const Distribution& x, const std::vector<std::size_t>& block_sizes,
                             double epsilon);

struct GoodCellsOptions {
    // Upper bound on (subsets examined) x (support size), per pass.
    std::uint64_t max_work = 400'000'000;
};

struct GoodCellsReport {
    std::vector<std::size_t> good;   // G, 0-based coordinates
    std::vector<double> score;       // lg m_k - H(Y_k), per coordinate
    std::vector<std::size_t> removed;  // in removal order
    double a = 0;                    // lg |space| - H(Y)
    double eta = 0;
    std::size_t q = 0;
    std::size_t subset_size = 0;     // min(q, |G|) used in the final check
    std::uint64_t subsets_checked = 0;  // in the final exhaustive check
    bool verified = false;           // every subset_size-subset of G is eta-close
    Rational max_tv;                 // over the final check
    double size_bound = 0;           // u' - 16 q a / eta^2
    bool size_bound_satisfied = false;
};

// Greedy construction: for s = 1..q scan the s-subsets of the current G in
// lexicographic order; whenever one is farther than eta from uniform, drop
// its member with the largest score (ties: smallest index). Afterwards
// every q-subset of G is re-checked exhaustively. Throws SizeError (with the
// subset count) when a pass would exceed the work budget.
GoodCellsReport good_cells(const Distribution& y, std::size_t q, double eta,
                           const GoodCellsOptions& options = {});

// Upper bound on the number of subsets good_cells examines per pass.
std::uint64_t good_cells_subset_count(std::size_t coords, std::size_t q);

}  // namespace cellprobe
