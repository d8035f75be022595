#include "cellprobe/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cellprobe/brackets.hpp"
#include "cellprobe/distribution.hpp"
#include "cellprobe/entropy_sum.hpp"
#include "cellprobe/errors.hpp"
#include "cellprobe/infotheory.hpp"
#include "cellprobe/pipeline.hpp"
#include "cellprobe/reference_schemes.hpp"
#include "cellprobe/report.hpp"
#include "cellprobe/scheme_io.hpp"
#include "cellprobe/separator.hpp"
#include "cellprobe/stretcher.hpp"

namespace cellprobe {

namespace {

namespace fs = std::filesystem;

constexpr const char* kOutputDirEnv = "CELLPROBE_OUTPUT_DIR";

// Relative paths land in $CELLPROBE_OUTPUT_DIR when it is set.
fs::path output_path(const std::string& path) {
    fs::path p(path);
    const char* dir = std::getenv(kOutputDirEnv);
    if (p.is_relative() && dir && *dir) return fs::path(dir) / p;
    return p;
}

struct Outcome {
    Report report;
    bool guarantee_ok = true;
};

std::vector<std::size_t> parse_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::string s = text;
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) {
        std::size_t pos = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(tok, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != tok.size() || tok.front() == '-') {
            throw ParameterError("expected a non-negative integer, got '" + tok + "'");
        }
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

std::vector<std::uint64_t> read_indices(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot read index file " + path);
    std::string all, line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        all += line + ' ';
    }
    const auto v = parse_list(all);
    return std::vector<std::uint64_t>(v.begin(), v.end());
}

void add_verification(Report& r, const VerificationReport& v) {
    r.add("status", v.pass ? "pass" : "fail");
    r.add_count("checked", v.checked);
    if (v.counterexample) {
        const auto& c = *v.counterexample;
        r.add("counterexample.x", c.x.str());
        r.add_count("counterexample.i", c.i);
        r.add_int("counterexample.expected", c.expected);
        r.add("counterexample.got", c.got ? std::to_string(*c.got) : std::string("undefined"));
    } else {
        r.add("counterexample", "none");
    }
}

Outcome cmd_verify(const std::string& scheme_path, std::optional<std::size_t> sample,
                   std::uint64_t seed) {
    const Scheme s = read_scheme_file(scheme_path);
    VerifyOptions opt;
    opt.sample_size = sample;
    opt.seed = seed;
    const auto v = verify_scheme(s, default_oracle(s), opt);
    Outcome o;
    o.report.section("verify");
    add_verification(o.report, v);
    o.guarantee_ok = v.pass;
    return o;
}

Outcome cmd_redundancy(const std::string& scheme_path) {
    const Scheme s = read_scheme_file(scheme_path);
    Outcome o;
    auto& r = o.report;
    r.section("redundancy");
    r.add_count("n", s.n());
    r.add_count("u", s.u());
    r.add_count("cell_alphabet", s.cell_alphabet());
    r.add("domain", std::string(to_string(s.domain())));
    const BigInt size = domain_size(s.domain(), s.n());
    r.add("domain_size", size);
    r.add("lg_domain_size", lg(size));
    r.add("redundancy_bits", redundancy(s));
    return o;
}

Outcome cmd_separator(const std::string& scheme_path, std::optional<double> gap,
                      std::optional<std::size_t> q, bool bracket, std::optional<unsigned> c,
                      bool force) {
    const Scheme s = read_scheme_file(scheme_path);
    Outcome o;
    auto& r = o.report;
    if (!bracket) {
        if (!gap) throw ParameterError("separator needs --gap (or --bracket --c)");
        const auto res = q ? find_separator(s.probes(), *gap, *q) : find_separator(s.probes(), *gap);
        r.section("separator");
        r.add("gap", res.gap);
        r.add_count("q", res.q);
        r.add("k0", res.k0);
        r.add_list("B", res.blocker);
        r.add_list("V", res.kept);
        r.add_count("w", res.w);
        r.add_count("stages_run", res.stages_run);
        for (const auto& st : res.log) {
            r.section("stage " + std::to_string(st.stage));
            r.add_count("blocker_size", st.blocker_size);
            if (st.stage > 0) {
                r.add("blocker_bound", st.blocker_bound);
                r.add("blocker_bound_holds", st.blocker_bound_holds);
            }
            r.add_count("disjoint_found", st.disjoint_found);
            r.add("threshold", st.threshold);
            r.add("succeeded", st.succeeded);
        }
        const long double gq = static_cast<long double>(res.gap) * res.q;
        const long double lower = res.q == 0 ? s.n() : s.n() / std::pow(gq, static_cast<long double>(res.q));
        const bool w_ok = static_cast<long double>(res.w) >= lower;
        const bool b_ok = static_cast<long double>(res.blocker.size()) * res.gap <=
                          static_cast<long double>(res.w);
        const bool disjoint =
            pairwise_disjoint_after_removal(s.probes().sets(), res.kept, res.blocker);
        r.section("guarantees");
        r.add("w >= n/(g q)^q", w_ok);
        r.add("|B| <= w/g", b_ok);
        r.add("pairwise disjoint", disjoint);
        o.guarantee_ok = w_ok && b_ok && disjoint;
        return o;
    }
    if (!c) throw ParameterError("separator --bracket needs --c");
    const auto res = force ? run_bracket_separator_stages(s.probes(), *c)
                           : find_separator_brackets(s.probes(), *c);
    r.section("separator");
    r.add("mode", "bracket");
    r.add_count("c", res.c);
    r.add_count("q", res.q);
    r.add("lg_n", res.lg_n);
    r.add_count("a", res.a);
    r.add_count("b", res.b);
    r.add_list("B", res.blocker);
    r.add_list("V", res.kept);
    r.add_count("w", res.kept.size());
    r.add_count("stages_run", res.stages_run);
    for (const auto& st : res.log) {
        r.section("stage " + std::to_string(st.stage));
        r.add_count("blocker_size", st.blocker_size);
        if (st.stage > 0) {
            r.add("blocker_bound", st.blocker_bound);
            r.add("blocker_bound_holds", st.blocker_bound_holds);
        }
        r.add_count("disjoint_found", st.disjoint_found);
        r.add("threshold", st.threshold);
        r.add("succeeded", st.succeeded);
    }
    const bool disjoint = pairwise_disjoint_after_removal(s.probes().sets(), res.kept, res.blocker);
    r.section("guarantees");
    r.add("preconditions", res.preconditions_hold);
    r.add("c a <= b <= c (2c)^a", res.exponent_relation);
    r.add("|B| <= n/lg^b n", res.blocker_small);
    r.add("|V| >= n/lg^a n", res.kept_large);
    r.add("n/lg^b n >= 1", res.nontrivial_scale);
    r.add("pairwise disjoint", disjoint);
    o.guarantee_ok = res.exponent_relation && res.kept_large && disjoint &&
                     (!res.preconditions_hold || res.blocker_small);
    return o;
}

void add_stretcher(Report& r, const StretcherResult& res) {
    r.add_count("window_t", res.window);
    r.add_list("V_prime", res.v_prime);
    r.add_count("w_prime", res.w_prime);
    r.add_count("guaranteed_size", res.guaranteed_size);
    for (std::size_t k = 0; k < res.pairs.size(); ++k) {
        const auto& p = res.pairs[k];
        r.add("pair" + std::to_string(k), std::to_string(p.first) + " " + std::to_string(p.second) +
                                              " lead " + std::to_string(p.lead) + " gap " +
                                              std::to_string(p.gap));
    }
}

Outcome cmd_stretcher(const std::string& indices_path, std::uint64_t n, double c) {
    const auto idx = read_indices(indices_path);
    Outcome o;
    auto& r = o.report;
    r.section("stretcher");
    r.add_count("n", n);
    r.add("c", c);
    r.add_count("w", idx.size());
    try {
        const auto res = find_stretcher(idx, n, c);
        add_stretcher(r, res);
        r.add("stuck", false);
        o.guarantee_ok = res.w_prime >= res.guaranteed_size;
    } catch (const StretcherStuck& e) {
        add_stretcher(r, e.partial());
        r.add("stuck", true);
        r.add_count("stuck_window_s", e.window_start());
        r.add("diagnostic", e.what());
        o.guarantee_ok = false;
    }
    return o;
}

Outcome cmd_entropy(const std::string& dist_path, const std::string& coords) {
    const Distribution d = read_distribution_file(dist_path);
    Outcome o;
    auto& r = o.report;
    r.section("entropy");
    r.add_count("arity", d.arity());
    r.add_count("support_size", d.support_size());
    r.add("space_size", d.space_size());
    r.add("lg_space_size", lg(d.space_size()));
    r.add("entropy", entropy(d));
    r.add("deficiency", lg(d.space_size()) - entropy(d));
    r.add("tv_to_uniform", tv_to_uniform(d));
    if (!coords.empty()) {
        const auto cs = parse_list(coords);
        for (auto k : cs) {
            if (k >= d.arity()) throw RangeError("coordinate " + std::to_string(k) + " out of range");
        }
        r.add_list("coords", cs);
        r.add("marginal_entropy", entropy(d, cs));
        r.add("marginal_tv_to_uniform", marginal_tv_to_uniform(d, cs));
    }
    return o;
}

Outcome cmd_goodset(const std::string& mode, const std::string& dist_path, const std::string& sizes,
                    std::optional<double> epsilon, std::optional<std::size_t> q,
                    std::optional<double> eta) {
    const Distribution d = read_distribution_file(dist_path);
    Outcome o;
    auto& r = o.report;
    if (mode == "blocks") {
        if (!epsilon) throw ParameterError("goodset --mode blocks needs --epsilon");
        const auto bs = parse_list(sizes);
        if (bs.empty()) throw ParameterError("goodset --mode blocks needs --sizes");
        const auto g = good_blocks(d, bs, *epsilon);
        r.section("good-blocks");
        r.add_list("block_sizes", g.block_sizes);
        r.add("epsilon", g.epsilon);
        r.add("a", g.a);
        for (std::size_t k = 0; k < g.deficiency.size(); ++k) {
            r.add("block" + std::to_string(k + 1) + ".conditional_entropy", g.conditional_entropy[k]);
            r.add("block" + std::to_string(k + 1) + ".deficiency", g.deficiency[k]);
        }
        r.add("deficiency_sum", g.deficiency_sum);
        r.add_list("G", g.good);
        r.add("size_bound", g.size_bound);
        r.add("size_bound_satisfied", g.size_bound_satisfied);
        for (std::size_t k = 0; k < g.good.size(); ++k) {
            r.add("tv_block" + std::to_string(g.good[k]), g.tv_to_uniform[k]);
        }
        r.add("tv_clause_holds", g.tv_clause_holds);
        o.guarantee_ok = g.size_bound_satisfied && g.tv_clause_holds &&
                         std::fabs(g.deficiency_sum - g.a) <= kEntropyTolerance;
        return o;
    }
    if (mode == "cells") {
        if (!q || !eta) throw ParameterError("goodset --mode cells needs --q and --eta");
        const auto g = good_cells(d, *q, *eta);
        r.section("good-cells");
        r.add_count("q", g.q);
        r.add("eta", g.eta);
        r.add("a", g.a);
        r.add_list("G", g.good);
        r.add_list("removed", g.removed);
        r.add_count("subset_size", g.subset_size);
        r.add_count("subsets_checked", g.subsets_checked);
        r.add("max_tv", g.max_tv);
        r.add("verified", g.verified);
        r.add("size_bound", g.size_bound);
        r.add("size_bound_satisfied", g.size_bound_satisfied);
        o.guarantee_ok = g.verified;
        return o;
    }
    throw ParameterError("goodset --mode must be blocks or cells");
}

Outcome cmd_entropy_sum(const std::string& dist_path, std::optional<std::size_t> uniform_bits,
                        std::size_t p, std::size_t i, std::size_t j, double c) {
    BitSource src = UniformBits{};
    if (uniform_bits) {
        if (!dist_path.empty()) throw ParameterError("give either --dist or --uniform-bits");
        src = UniformBits{*uniform_bits};
    } else {
        if (dist_path.empty()) throw ParameterError("entropy-sum needs --dist or --uniform-bits");
        src = read_distribution_file(dist_path);
    }
    const auto w = entropy_sum_analysis(src, p, i, j, c);
    Outcome o;
    auto& r = o.report;
    r.section("entropy-sum");
    r.add_count("p", w.p);
    r.add_count("i", w.i);
    r.add_count("j", w.j);
    r.add_count("ell", w.ell);
    r.add_count("d", w.d);
    r.add("c", w.c);
    r.add("spacing_holds", w.spacing_holds);
    r.section("hypothesis");
    r.add("measured_entropy", w.prefix_set.measured_entropy);
    r.add("required_entropy", w.prefix_set.required_entropy);
    r.add("holds", w.prefix_set.hypothesis_holds);
    r.add("all_prefixes", w.prefix_set.all_prefixes);
    if (!w.prefix_set.all_prefixes) r.add_count("A_size", w.prefix_set.members.size());
    r.add("Pr_A", w.prefix_set.probability);
    r.section("threshold");
    r.add_int("t", w.threshold.t);
    r.add("Pr_at_t", w.threshold.at_t);
    r.add("Pr_at_t_plus_1", w.threshold.at_t_plus_1);
    r.add("Pr_at_most_t", w.threshold.at_most_t);
    r.section("conclusions");
    r.add("upper_base", w.upper_base);
    r.add_int("upper_cutoff", w.upper_cutoff);
    r.add("lower_cut", w.lower_cut);
    r.add("P_upper", w.p_upper);
    r.add("P_lower", w.p_lower);
    r.add("P_lower_nonstrict", w.p_lower_nonstrict);
    r.add("lower_forms_differ", w.lower_forms_differ);
    r.add("P_joint", w.p_joint);
    r.add("upper_ok", w.upper_ok);
    r.add("lower_ok", w.lower_ok);
    r.add("joint_ok", w.joint_ok);
    r.add("holds", w.holds);
    r.add("tail_bound", w.tail_bound);
    r.add("block_tv", w.block_tv);
    r.add("joint_chain_holds", w.joint_chain_holds);
    const Rational quarter(1, 4);
    const bool maximal = w.threshold.at_t >= quarter && w.threshold.at_t_plus_1 < quarter;
    r.add("threshold_maximal", maximal);
    o.guarantee_ok = maximal && w.joint_chain_holds;
    return o;
}

Outcome cmd_brackets(const std::string& action, std::optional<std::size_t> n,
                     std::optional<std::size_t> d, const std::string& x, std::optional<std::size_t> i) {
    Outcome o;
    auto& r = o.report;
    r.section("brackets");
    if (action == "count") {
        if (!n) throw ParameterError("brackets count needs --n");
        r.add_count("n", *n);
        r.add("count", catalan_count(*n));
    } else if (action == "walk") {
        if (!d) throw ParameterError("brackets walk needs --d");
        const Rational open = unmatched_open_prob(*d), close = unmatched_close_prob(*d);
        r.add_count("d", *d);
        r.add("unmatched_open", open);
        r.add("unmatched_close", close);
        r.add("equal", open == close);
        r.add("sqrt_d_times_open", std::sqrt(static_cast<double>(*d)) * to_double(open));
    } else if (action == "match") {
        if (x.empty() || !i) throw ParameterError("brackets match needs --x and --i");
        const BitVector bits = parse_brackets(x);
        r.add("x", to_brackets(bits));
        r.add_count("i", *i);
        r.add_count("match", match_index(bits, *i));
    } else {
        throw ParameterError("brackets action must be count, walk or match");
    }
    return o;
}

Outcome cmd_pipeline(const std::string& kind, const std::string& scheme_path, double c,
                     std::uint64_t budget) {
    const Scheme s = read_scheme_file(scheme_path);
    PipelineOptions opt;
    opt.good_cells_budget = budget;
    PipelineReport p;
    if (kind == "prefix") {
        p = run_prefix_pipeline(s, c, opt);
    } else if (kind == "brackets") {
        if (c < 1 || c != std::floor(c)) throw ParameterError("pipeline brackets needs an integer c");
        p = run_bracket_pipeline(s, static_cast<unsigned>(c), opt);
    } else {
        throw ParameterError("pipeline kind must be prefix or brackets");
    }
    return {pipeline_report(p), p.scale_independent_ok()};
}

Outcome cmd_build_scheme(const std::string& variant, std::size_t n, std::uint32_t m,
                         std::size_t block, std::size_t superblock, bool tables,
                         const std::string& out_path) {
    SchemeSpecParams params;
    params.variant = parse_variant(variant);
    params.n = n;
    params.cell_alphabet = m;
    params.block = block;
    params.superblock = superblock;
    Scheme s = build_reference(params);
    if (tables) s = materialize(s);
    fs::path target;
    if (!out_path.empty()) {
        target = output_path(out_path);
    } else if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) {
        target = fs::path(dir) / (variant + "_n" + std::to_string(n) + ".scm");
    }
    Outcome o;
    auto& r = o.report;
    if (target.empty()) {
        // Scheme text itself is the output.
        std::ostringstream text;
        write_scheme(text, s);
        r.section("");
        r.add("scheme", text.str());
        return o;
    }
    write_scheme_file(target, s);
    r.section("build-scheme");
    r.add("variant", variant);
    r.add_count("n", s.n());
    r.add_count("u", s.u());
    r.add_count("q", s.q());
    r.add_count("cell_alphabet", s.cell_alphabet());
    r.add("tables", tables);
    r.add("path", target.string());
    return o;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Non-adaptive cell-probe scheme analysis", "cellprobe"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string format = "text";
    std::string output;
    app.add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "machine"}));
    app.add_option("--output", output, "Write the report to this file");

    std::string scheme, dist, indices, mode, sizes, x, variant, out_path, action, kind;
    std::optional<double> gap, epsilon, eta;
    std::optional<std::size_t> q, sample, uniform_bits, bn, bd, bi;
    std::optional<unsigned> bc;
    std::uint64_t seed = 0, n64 = 0;
    double c = 0;
    std::size_t p = 0, i = 0, j = 0, n = 0, block = 0, superblock = 0;
    std::uint32_t m = 0;
    bool bracket = false, force = false, tables = false;
    std::uint64_t budget = PipelineOptions{}.good_cells_budget;
    std::string coords;

    auto* verify = app.add_subcommand("verify", "Check a scheme against its query oracle");
    verify->add_option("--scheme", scheme, "Scheme file")->required();
    verify->add_option("--sample", sample, "Check a uniform sample of this size");
    verify->add_option("--seed", seed, "Sampling seed");

    auto* red = app.add_subcommand("redundancy", "Stored bits minus lg |domain|");
    red->add_option("--scheme", scheme, "Scheme file")->required();

    auto* sep = app.add_subcommand("separator", "Blocker set making probe sets disjoint");
    sep->add_option("--scheme", scheme, "Scheme file")->required();
    sep->add_option("--gap", gap, "Gap g >= 2");
    sep->add_option("--q", q, "Probe bound (default: largest probe set)");
    sep->add_flag("--bracket", bracket, "Use the polylogarithmic bracket thresholds");
    sep->add_option("--c", bc, "Constant c for --bracket");
    sep->add_flag("--force", force, "Run --bracket even when its preconditions fail");

    auto* str = app.add_subcommand("stretcher", "Select pairs with shrinking gaps");
    str->add_option("--indices", indices, "File of ascending indices")->required();
    str->add_option("--n", n64, "Universe size")->required();
    str->add_option("--c", c, "Ratio c > 1")->required();

    auto* ent = app.add_subcommand("entropy", "Entropy and distance to uniform");
    ent->add_option("--dist", dist, "Distribution file")->required();
    ent->add_option("--coords", coords, "Marginal coordinates (0-based, comma separated)");

    auto* gs = app.add_subcommand("goodset", "Good blocks or good cells of a distribution");
    gs->add_option("--mode", mode, "blocks or cells")->required()->check(CLI::IsMember({"blocks", "cells"}));
    gs->add_option("--dist", dist, "Distribution file")->required();
    gs->add_option("--sizes", sizes, "Block sizes (blocks mode)");
    gs->add_option("--epsilon", epsilon, "Epsilon (blocks mode)");
    gs->add_option("--q", q, "Subset size (cells mode)");
    gs->add_option("--eta", eta, "Closeness eta (cells mode)");

    auto* es = app.add_subcommand("entropy-sum", "Threshold witness for prefix sums");
    es->add_option("--dist", dist, "Distribution file over bit strings");
    es->add_option("--uniform-bits", uniform_bits, "Uniform over {0,1}^n instead of --dist");
    es->add_option("--p", p, "p")->required();
    es->add_option("--i", i, "i")->required();
    es->add_option("--j", j, "j")->required();
    es->add_option("--c", c, "c > 0")->required();

    auto* br = app.add_subcommand("brackets", "Balanced bracket utilities");
    br->add_option("action", action, "count, walk or match")->required()
        ->check(CLI::IsMember({"count", "walk", "match"}));
    br->add_option("--n", bn, "Length (count)");
    br->add_option("--d", bd, "Walk length (walk)");
    br->add_option("--x", x, "Bracket string (match)");
    br->add_option("--i", bi, "Position, 1-based (match)");

    auto* pl = app.add_subcommand("pipeline", "Run the full restriction pipeline");
    pl->add_option("kind", kind, "prefix or brackets")->required()
        ->check(CLI::IsMember({"prefix", "brackets"}));
    pl->add_option("--scheme", scheme, "Scheme file")->required();
    pl->add_option("--c", c, "Constant c")->required();
    pl->add_option("--budget", budget, "Work budget for the good-cells search");

    auto* bs = app.add_subcommand("build-scheme", "Write a reference scheme");
    bs->add_option("--variant", variant, "precomputed_sums, two_level_rank, raw_identity, bracket_table")
        ->required();
    bs->add_option("--n", n, "Input length")->required();
    bs->add_option("--m", m, "Cell alphabet")->required();
    bs->add_option("--block", block, "Block size (two_level_rank)");
    bs->add_option("--superblock", superblock, "Superblock size (two_level_rank)");
    bs->add_flag("--tables", tables, "Write explicit encoder and decoder tables");
    bs->add_option("--out", out_path, "Scheme file to write (default: stdout)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        Outcome o;
        if (verify->parsed()) {
            o = cmd_verify(scheme, sample, seed);
        } else if (red->parsed()) {
            o = cmd_redundancy(scheme);
        } else if (sep->parsed()) {
            o = cmd_separator(scheme, gap, q, bracket, bc, force);
        } else if (str->parsed()) {
            o = cmd_stretcher(indices, n64, c);
        } else if (ent->parsed()) {
            o = cmd_entropy(dist, coords);
        } else if (gs->parsed()) {
            o = cmd_goodset(mode, dist, sizes, epsilon, q, eta);
        } else if (es->parsed()) {
            o = cmd_entropy_sum(dist, uniform_bits, p, i, j, c);
        } else if (br->parsed()) {
            o = cmd_brackets(action, bn, bd, x, bi);
        } else if (pl->parsed()) {
            o = cmd_pipeline(kind, scheme, c, budget);
        } else {
            o = cmd_build_scheme(variant, n, m, block, superblock, tables, out_path);
        }

        const ReportFormat fmt = parse_report_format(format);
        std::string text;
        if (bs->parsed() && o.report.entries().size() == 1 && o.report.entries()[0].key == "scheme") {
            text = o.report.entries()[0].value;
        } else {
            text = o.report.str(fmt);
        }
        if (output.empty()) {
            out << text;
        } else {
            const fs::path path = output_path(output);
            std::ofstream f(path);
            if (!f) throw FormatError("cannot write report to " + path.string());
            f << text;
        }
        return o.guarantee_ok ? kExitOk : kExitGuarantee;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args;
    for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
    return run_cli(args, std::cout, std::cerr);
}

}  // namespace cellprobe
