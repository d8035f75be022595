#pragma once

// The adversary argument run stage by stage against a concrete scheme at
// finite n: separator, cell fixing, good cells, stretcher (or close pairs
// for brackets), entropy blocks, the entropy-sum witness and the final
// chain of inequalities. Every guarantee is measured and recorded; no
// contradiction is asserted.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cellprobe/entropy_sum.hpp"
#include "cellprobe/rational.hpp"
#include "cellprobe/report.hpp"
#include "cellprobe/scheme.hpp"

namespace cellprobe {

// Scale-independent checks hold for every input by construction of the
// lemmas; scale-dependent ones need n (or c) large enough.
enum class CheckScale { independent, dependent };

struct StageCheck {
    std::string stage;
    std::string name;
    bool holds = false;
    CheckScale scale = CheckScale::independent;
};

struct SeparatorStageRecord {
    double gap = 0;          // g (prefix pipeline)
    double k0 = 0;
    ProbeSet blocker;        // B
    std::vector<std::size_t> kept;  // V
    std::size_t w = 0;
    std::size_t stages_run = 0;
    std::uint64_t a = 0, b = 0;  // bracket pipeline
    double d = 0;                // 16 lg^a n (bracket pipeline)
};

struct FixingStageRecord {
    CellValues z;
    std::size_t surviving = 0;  // |X|
    BigInt domain_size;
    double lg_domain = 0;
    double lg_surviving = 0;
    double lg_pigeonhole = 0;   // lg(|domain| / m^|B|)
    std::size_t u_prime = 0;
    std::size_t reduced_coords = 0;  // cells of Y examined by the good-cells stage
};

struct GoodCellsStageRecord {
    double eta = 0;
    std::size_t requested_subset = 0;  // 2q
    std::size_t subset_size = 0;       // actually used
    bool feasible = false;
    std::string infeasible_reason;
    std::vector<std::size_t> good;     // G, original cell indices
    double a = 0;
    double size_bound = 0;
    bool verified = false;
    std::vector<std::size_t> v2;       // V_2
    std::uint64_t pairs_checked = 0;
    Rational max_pair_tv;
    bool used_fallback = false;        // later stages run on V instead of V_2
};

struct SelectionStageRecord {
    // Prefix pipeline: stretcher output; bracket pipeline: close pairs.
    std::vector<std::size_t> input;    // V_2 or its fallback
    std::vector<std::uint64_t> v3;
    std::size_t window = 0;            // stretcher t
    std::size_t guaranteed = 0;        // stretcher 2 floor(w/(c lg n))
    bool stuck = false;
    std::size_t stuck_window = 0;
    std::size_t pairs_total = 0;       // close pairs: consecutive pairs formed
    std::size_t pairs_far = 0;         // close pairs: thrown away (distance >= d)
};

struct BlocksStageRecord {
    double epsilon = 0;
    std::vector<std::size_t> starts;   // 1-based first position of each Z_k
    std::vector<std::size_t> sizes;
    std::vector<double> deficiency;
    double a = 0;
    double deficiency_sum = 0;
    std::vector<std::size_t> good;     // 1-based block numbers
    double size_bound = 0;
    std::size_t chosen = 0;            // 1-based block number
    bool chosen_fallback = false;
    std::size_t p = 0, i = 0, j = 0;
};

struct ChainLine {
    std::string expression;
    std::string justification;
    double value = 0;
    std::optional<Rational> exact;
    // Relation to the next line ("=", ">=", ">"); empty on the last line.
    std::string relation;
    double slack = 0;                  // value - next value
    bool holds = true;
    CheckScale scale = CheckScale::dependent;
};

struct ChainStageRecord {
    double closeness = 0;              // 1/c or 1/(c d)
    std::vector<ChainLine> lines;
    bool probes_disjoint = false;
    std::uint64_t undefined_tuples = 0;  // decoder tuples with no defined answer under U'
    double bound = 0;                  // lower bound the chain ends with
    bool contradiction = false;        // left side below the bound
};

struct PipelineReport {
    std::string kind;  // "prefix" or "brackets"
    std::size_t n = 0, u = 0, q = 0;
    std::uint32_t cell_alphabet = 0;
    double c = 0;
    double redundancy = 0;

    std::optional<SeparatorStageRecord> separator;
    std::optional<FixingStageRecord> fixing;
    std::optional<GoodCellsStageRecord> good_cells;
    std::optional<SelectionStageRecord> selection;
    std::optional<BlocksStageRecord> blocks;
    std::optional<EntropySumWitness> witness;
    // s = t + (l + d)/2 + c^{1/3} sqrt(d), s' = t + l/2 (prefix pipeline).
    std::optional<double> s, s_prime;
    std::optional<ChainStageRecord> chain;

    std::vector<StageCheck> checks;
    std::vector<std::string> notes;
    bool truncated = false;
    std::string truncated_stage;
    std::string truncated_reason;

    bool scale_independent_ok() const;
    bool all_checks_hold() const;
};

struct PipelineOptions {
    std::uint64_t good_cells_budget = 50'000'000;
    // Largest enumerated product space for U' probabilities.
    std::uint64_t max_uniform_tuples = 1ULL << 22;
    // Empirical alpha for the bracket chain's Omega(1/sqrt d) terms.
    double bracket_alpha = 0.375;
};

// Needs an all_bitstrings scheme with n <= 20 and c > 1.
PipelineReport run_prefix_pipeline(const Scheme& scheme, double c, const PipelineOptions& options = {});
// Needs a balanced_brackets scheme with even n <= 20 and integral c >= 4.
PipelineReport run_bracket_pipeline(const Scheme& scheme, unsigned c,
                                    const PipelineOptions& options = {});

struct ChainEvaluation {
    Rational bound;          // (P1 - k)(P2 - k) - k
    bool contradiction = false;  // P_joint < bound
    Rational slack;          // P_joint - bound
};

ChainEvaluation contradiction_chain(const Rational& p_joint, const Rational& p1, const Rational& p2,
                                    const Rational& closeness);

Report pipeline_report(const PipelineReport& report);

}  // namespace cellprobe
