#pragma once

// Staged greedy separators: remove a small blocker set B of cells so that
// many of the sets Q(1) \ B, ..., Q(n) \ B become pairwise disjoint.
// Query indices are 1-indexed throughout.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cellprobe/scheme.hpp"

namespace cellprobe {

// Indices (1-based, ascending) of the subfamily chosen by scanning the sets
// in index order and keeping each set disjoint from those kept so far.
// The result is maximal: every omitted set meets a kept one. Elements of
// `removed` are ignored, so empty remainders are always kept.
std::vector<std::size_t> greedy_disjoint(const std::vector<ProbeSet>& family,
                                         const ProbeSet& removed = {});

// True iff the sets Q(v) \ B, v in `chosen`, are pairwise disjoint.
bool pairwise_disjoint_after_removal(const std::vector<ProbeSet>& family,
                                     const std::vector<std::size_t>& chosen,
                                     const ProbeSet& removed);

struct SeparatorStage {
    std::size_t stage = 0;
    std::size_t blocker_size = 0;    // |B| at the start of the stage
    double blocker_bound = 0;        // k0 g^{i-1} q^i (stage >= 1), 0 at stage 0
    bool blocker_bound_holds = true;
    std::size_t disjoint_found = 0;  // greedy count on Q(.) \ B
    double threshold = 0;            // k0 (g q)^i
    bool succeeded = false;
};

struct SeparatorResult {
    ProbeSet blocker;               // B
    std::vector<std::size_t> kept;  // V, 1-based query indices
    std::size_t w = 0;              // |V|
    double k0 = 0;                  // n / (g q)^q
    double gap = 0;
    std::size_t q = 0;
    std::size_t stages_run = 0;
    std::vector<SeparatorStage> log;
};

// Stages i = 0..q: succeed once the greedy subfamily has >= k0 (g q)^i sets,
// otherwise add every element of the greedy subfamily to B. Guarantees
// w >= n/(g q)^q, |B| <= w/g and termination within q + 1 stages.
// `q` defaults to the largest set size; g must be >= 2.
SeparatorResult find_separator(const ProbeFamily& family, double gap);
SeparatorResult find_separator(const ProbeFamily& family, double gap, std::size_t q);

struct BracketSeparatorStage {
    std::size_t stage = 0;
    std::size_t blocker_size = 0;
    double blocker_bound = 0;  // n / L^{c d^{q-i}} (stage >= 1), 0 at stage 0
    bool blocker_bound_holds = true;
    std::size_t disjoint_found = 0;
    double threshold = 0;      // n / L^{d^{q-i}}
    bool succeeded = false;
};

struct BracketSeparatorResult {
    ProbeSet blocker;
    std::vector<std::size_t> kept;
    std::uint64_t a = 0;
    std::uint64_t b = 0;
    unsigned c = 0;
    std::size_t q = 0;
    double lg_n = 0;
    std::size_t stages_run = 0;
    std::vector<BracketSeparatorStage> log;

    // The lemma's conclusions, evaluated on this instance.
    bool exponent_relation = false;  // c a <= b <= c (2c)^a
    bool blocker_small = false;      // |B| <= n / lg^b n
    bool kept_large = false;         // |V| >= n / lg^a n
    bool nontrivial_scale = false;   // n / lg^b n >= 1
    // Preconditions: c >= 4 and q <= lg lg n / c.
    bool preconditions_hold = false;
};

// The staged procedure with d := 2c, L := lg n: stage i succeeds once the
// greedy subfamily reaches n / L^{d^{q-i}} sets, giving a = d^{q-i},
// b = c d^{q-i}. Throws ParameterError unless c >= 4, n >= 2 and
// q <= lg lg n / c.
BracketSeparatorResult find_separator_brackets(const ProbeFamily& family, unsigned c);

// Same procedure without the precondition checks; the outcome of each
// check is reported in the result instead.
BracketSeparatorResult run_bracket_separator_stages(const ProbeFamily& family, unsigned c);

}  // namespace cellprobe
