#include "cellprobe/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "cellprobe/brackets.hpp"
#include "cellprobe/errors.hpp"
#include "cellprobe/infotheory.hpp"
#include "cellprobe/separator.hpp"
#include "cellprobe/stretcher.hpp"

namespace cellprobe {

bool PipelineReport::scale_independent_ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const StageCheck& c) {
        return c.scale == CheckScale::dependent || c.holds;
    });
}

bool PipelineReport::all_checks_hold() const {
    return std::all_of(checks.begin(), checks.end(), [](const StageCheck& c) { return c.holds; });
}

ChainEvaluation contradiction_chain(const Rational& p_joint, const Rational& p1, const Rational& p2,
                                    const Rational& closeness) {
    ChainEvaluation e;
    e.bound = (p1 - closeness) * (p2 - closeness) - closeness;
    e.slack = p_joint - e.bound;
    e.contradiction = p_joint < e.bound;
    return e;
}

namespace {

constexpr std::size_t kMaxPipelineN = 20;

void check(PipelineReport& r, const char* stage, std::string name, bool holds, CheckScale scale) {
    r.checks.push_back({stage, std::move(name), holds, scale});
}

void truncate(PipelineReport& r, std::string stage, std::string reason) {
    r.truncated = true;
    r.truncated_stage = std::move(stage);
    r.truncated_reason = std::move(reason);
}

// Cell fixing plus the checks every pipeline shares.
struct Fixed {
    CellFixing fixing;
    RestrictedScheme restricted;
    Distribution x;  // uniform over X
};

Fixed run_fixing(PipelineReport& r, const Scheme& scheme, const ProbeSet& blocker) {
    CellFixing fixing = most_likely_cell_values(scheme, blocker);
    RestrictedScheme restricted = restrict_scheme(scheme, fixing);
    FixingStageRecord rec;
    rec.z = fixing.fixed_values;
    rec.surviving = fixing.inputs.size();
    rec.domain_size = fixing.domain_size;
    rec.lg_domain = lg(fixing.domain_size);
    rec.lg_surviving = std::log2(static_cast<double>(rec.surviving));
    rec.lg_pigeonhole =
        rec.lg_domain - static_cast<double>(blocker.size()) * std::log2(scheme.cell_alphabet());
    rec.u_prime = restricted.reduced_cell_count();

    // |X| >= |domain| / m^|B|, exactly.
    const bool pigeonhole =
        big(rec.surviving) * ipow(scheme.cell_alphabet(), blocker.size()) >= fixing.domain_size;
    check(r, "fixing", "pigeonhole |X| >= |domain| / m^|B|", pigeonhole, CheckScale::independent);

    bool preserved = true;
    for (const auto& x : fixing.inputs) {
        for (std::size_t i = 1; i <= scheme.n() && preserved; ++i) {
            preserved = restricted.answer(x, i) == answer_query(scheme, x, i);
        }
        if (!preserved) break;
    }
    check(r, "fixing", "restricted answers equal base answers on X", preserved,
          CheckScale::independent);

    bool transfer = true;
    const auto& kept = r.separator->kept;
    for (std::size_t a = 0; a < kept.size() && transfer; ++a) {
        for (std::size_t b = a + 1; b < kept.size() && transfer; ++b) {
            const auto& qa = restricted.reduced_probes().query(kept[a]);
            const auto& qb = restricted.reduced_probes().query(kept[b]);
            ProbeSet both;
            std::set_intersection(qa.begin(), qa.end(), qb.begin(), qb.end(),
                                  std::back_inserter(both));
            transfer = both.empty();
        }
    }
    check(r, "fixing", "Q'(i) and Q'(j) disjoint for i, j in V", transfer, CheckScale::independent);

    Distribution x = Distribution::uniform_bits(fixing.inputs);
    r.fixing = rec;
    return {std::move(fixing), std::move(restricted), std::move(x)};
}

// Y restricted to the cells covered by Q'(v), v in V; coordinate k of the
// result is cell coords[k].
Distribution covered_cells(const RestrictedScheme& rs, const std::vector<std::size_t>& v,
                           std::vector<std::uint32_t>& coords) {
    std::set<std::uint32_t> cells;
    for (auto i : v) {
        for (auto cell : rs.reduced_probes().query(i)) cells.insert(cell);
    }
    coords.assign(cells.begin(), cells.end());
    std::map<std::uint32_t, std::size_t> position;
    for (std::size_t k = 0; k < rs.kept_cells().size(); ++k) position[rs.kept_cells()[k]] = k;
    std::vector<std::pair<Tuple, std::uint64_t>> weighted;
    weighted.reserve(rs.surviving_inputs().size());
    for (const auto& x : rs.surviving_inputs()) {
        const auto enc = rs.reduced_encode(x);
        Tuple t;
        t.reserve(coords.size());
        for (auto cell : coords) t.push_back(enc[position.at(cell)]);
        weighted.emplace_back(std::move(t), 1);
    }
    std::vector<std::uint32_t> alph(coords.size(), rs.base().cell_alphabet());
    return Distribution(std::move(alph), std::move(weighted));
}

// Good cells over the cells covered by V, V_2 = {v : Q'(v) in G}, and the
// exact pairwise closeness check on V_2.
void run_good_cells(PipelineReport& r, const Fixed& fx, double eta, const char* size_label,
                    const PipelineOptions& options) {
    GoodCellsStageRecord rec;
    rec.eta = eta;
    rec.requested_subset = 2 * r.q;
    const auto& kept = r.separator->kept;
    std::vector<std::uint32_t> coords;
    const Distribution y = covered_cells(fx.restricted, kept, coords);
    r.fixing->reduced_coords = coords.size();

    std::optional<GoodCellsReport> gc;
    if (coords.empty()) {
        rec.feasible = true;
        rec.verified = true;
    } else {
        for (std::size_t s = rec.requested_subset; s >= 1; --s) {
            try {
                gc = good_cells(y, s, eta, GoodCellsOptions{options.good_cells_budget});
                rec.subset_size = s;
                rec.feasible = s == rec.requested_subset;
                break;
            } catch (const SizeError& e) {
                if (rec.infeasible_reason.empty()) rec.infeasible_reason = e.what();
            }
        }
    }
    std::set<std::uint32_t> good_cells_set;
    if (gc) {
        for (auto k : gc->good) {
            rec.good.push_back(coords[k]);
            good_cells_set.insert(coords[k]);
        }
        rec.a = gc->a;
        rec.size_bound = static_cast<double>(coords.size()) -
                         16.0 * static_cast<double>(rec.requested_subset) * gc->a / (eta * eta);
        rec.verified = gc->verified;
    }
    if (!coords.empty() && !gc) r.notes.push_back("good cells: no feasible subset size; G is empty");
    check(r, "good-cells", "every checked subset of G is eta-close to uniform", rec.verified,
          CheckScale::independent);
    check(r, "good-cells", std::string("exhaustive check over ") + size_label + "-subsets feasible",
          rec.feasible, CheckScale::dependent);
    check(r, "good-cells", "|G| >= u' - 16 (2q) a / eta^2",
          static_cast<double>(rec.good.size()) >= rec.size_bound - kEntropyTolerance,
          CheckScale::dependent);

    for (auto v : kept) {
        const auto& qv = fx.restricted.reduced_probes().query(v);
        if (std::all_of(qv.begin(), qv.end(),
                        [&](std::uint32_t cell) { return good_cells_set.count(cell) > 0; })) {
            rec.v2.push_back(v);
        }
    }

    // Pairwise closeness on V_2, exactly.
    std::map<std::uint32_t, std::size_t> coord_of;
    for (std::size_t k = 0; k < coords.size(); ++k) coord_of[coords[k]] = k;
    const Rational eta_q = exact_rational(eta);
    bool pairs_ok = true;
    rec.max_pair_tv = 0;
    for (std::size_t a = 0; a < rec.v2.size(); ++a) {
        for (std::size_t b = a + 1; b < rec.v2.size(); ++b) {
            std::vector<std::size_t> cs;
            for (auto cell : fx.restricted.reduced_probes().query(rec.v2[a])) cs.push_back(coord_of.at(cell));
            for (auto cell : fx.restricted.reduced_probes().query(rec.v2[b])) cs.push_back(coord_of.at(cell));
            const Rational tv = marginal_tv_to_uniform(y, cs);
            ++rec.pairs_checked;
            if (tv > rec.max_pair_tv) rec.max_pair_tv = tv;
            if (tv > eta_q) pairs_ok = false;
        }
    }
    check(r, "good-cells", "V_2 is a subset of V", std::includes(kept.begin(), kept.end(),
                                                                 rec.v2.begin(), rec.v2.end()),
          CheckScale::independent);
    check(r, "good-cells", "(y|Q'(i), y|Q'(j)) eta-close to uniform for i, j in V_2", pairs_ok,
          CheckScale::independent);
    r.good_cells = rec;
}

std::vector<std::uint64_t> as_u64(const std::vector<std::size_t>& v) {
    return std::vector<std::uint64_t>(v.begin(), v.end());
}

// Blocks Z_k = x_{start_k} .. x_{end_k} tiling x; ends[k] is the last
// position of block k before padding.
void run_blocks(PipelineReport& r, const Fixed& fx, const std::vector<std::size_t>& ends,
                double epsilon) {
    BlocksStageRecord rec;
    rec.epsilon = epsilon;
    std::size_t start = 1;
    for (std::size_t k = 0; k < ends.size(); ++k) {
        const std::size_t end = k + 1 == ends.size() ? r.n : ends[k];
        rec.starts.push_back(start);
        rec.sizes.push_back(end - start + 1);
        start = end + 1;
    }
    std::size_t total = 0;
    for (auto s : rec.sizes) total += s;
    check(r, "blocks", "blocks tile x (sizes sum to n)", total == r.n && start == r.n + 1,
          CheckScale::independent);

    const GoodBlocksReport gb = good_blocks(fx.x, rec.sizes, epsilon);
    rec.deficiency = gb.deficiency;
    rec.a = gb.a;
    rec.deficiency_sum = gb.deficiency_sum;
    rec.good = gb.good;
    rec.size_bound = gb.size_bound;
    check(r, "blocks", "deficiencies sum to a",
          std::fabs(gb.deficiency_sum - gb.a) <= kEntropyTolerance, CheckScale::independent);
    check(r, "blocks", "|G| >= k - a/epsilon", gb.size_bound_satisfied, CheckScale::independent);
    check(r, "blocks", "TV(Z_k, uniform) <= 4 sqrt(epsilon) for k in G", gb.tv_clause_holds,
          CheckScale::independent);
    check(r, "blocks", "some block keeps conditional entropy >= s_k - epsilon", !gb.good.empty(),
          CheckScale::dependent);
    if (!gb.good.empty()) {
        rec.chosen = gb.good.front();
    } else {
        rec.chosen_fallback = true;
        rec.chosen = 1;
        for (std::size_t k = 1; k < rec.deficiency.size(); ++k) {
            if (rec.deficiency[k] < rec.deficiency[rec.chosen - 1]) rec.chosen = k + 1;
        }
        r.notes.push_back("blocks: no block met its bound; continuing with the least deficient one");
    }
    r.blocks = rec;
}

// Probability under U' that d'_i satisfies `pred`, over [m]^{|Q'(i)|}.
using AnswerPred = std::function<bool(std::int64_t)>;

struct UniformEvents {
    Rational p_i, p_j, joint;
    bool joint_enumerated = false;
    std::uint64_t undefined = 0;
};

void for_each_tuple(std::size_t len, std::uint32_t m, const std::function<void(const CellValues&)>& f) {
    CellValues t(len, 0);
    while (true) {
        f(t);
        std::size_t pos = len;
        while (pos > 0) {
            if (++t[pos - 1] < m) break;
            t[pos - 1] = 0;
            --pos;
        }
        if (pos == 0) return;
    }
}

Rational uniform_event(const RestrictedScheme& rs, std::size_t i, const AnswerPred& pred,
                       std::uint64_t max_tuples, std::uint64_t& undefined) {
    const std::uint32_t m = rs.base().cell_alphabet();
    const std::size_t len = rs.reduced_probes().query(i).size();
    const BigInt space = ipow(m, len);
    if (space > big(max_tuples)) {
        throw SizeError("U' event over " + space.get_str() + " tuples exceeds the limit",
                        space.fits_ulong_p() ? space.get_ui() : SIZE_MAX);
    }
    std::uint64_t hits = 0;
    for_each_tuple(len, m, [&](const CellValues& t) {
        const auto ans = rs.reduced_decode(i, t);
        if (!ans) {
            ++undefined;
            return;
        }
        if (pred(*ans)) ++hits;
    });
    return make_rational(big(hits), space);
}

UniformEvents uniform_events(const RestrictedScheme& rs, std::size_t i, const AnswerPred& pi,
                             std::size_t j, const AnswerPred& pj, bool disjoint,
                             std::uint64_t max_tuples) {
    UniformEvents e;
    e.p_i = uniform_event(rs, i, pi, max_tuples, e.undefined);
    e.p_j = uniform_event(rs, j, pj, max_tuples, e.undefined);
    const auto& qi = rs.reduced_probes().query(i);
    const auto& qj = rs.reduced_probes().query(j);
    std::vector<std::uint32_t> cells(qi.begin(), qi.end());
    cells.insert(cells.end(), qj.begin(), qj.end());
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    const std::uint32_t m = rs.base().cell_alphabet();
    const BigInt space = ipow(m, cells.size());
    if (space <= big(max_tuples)) {
        auto pos = [&](std::uint32_t cell) {
            return static_cast<std::size_t>(std::lower_bound(cells.begin(), cells.end(), cell) - cells.begin());
        };
        std::uint64_t hits = 0;
        CellValues vi(qi.size()), vj(qj.size());
        for_each_tuple(cells.size(), m, [&](const CellValues& t) {
            for (std::size_t k = 0; k < qi.size(); ++k) vi[k] = t[pos(qi[k])];
            for (std::size_t k = 0; k < qj.size(); ++k) vj[k] = t[pos(qj[k])];
            const auto ai = rs.reduced_decode(i, vi);
            const auto aj = rs.reduced_decode(j, vj);
            if (ai && aj && pi(*ai) && pj(*aj)) ++hits;
        });
        e.joint = make_rational(big(hits), space);
        e.joint_enumerated = true;
    } else if (disjoint) {
        // Independent coordinates under U'.
        e.joint = e.p_i * e.p_j;
    } else {
        throw SizeError("joint U' event over " + space.get_str() + " tuples exceeds the limit",
                        space.fits_ulong_p() ? space.get_ui() : SIZE_MAX);
    }
    return e;
}

// Pr over y in Y (equivalently x in X) of events on d'_i and d'_j.
struct ReducedEvents {
    Rational p_i, p_j, joint;
};

ReducedEvents reduced_events(const RestrictedScheme& rs, std::size_t i, const AnswerPred& pi,
                             std::size_t j, const AnswerPred& pj) {
    std::uint64_t hi = 0, hj = 0, both = 0;
    const auto& ri = rs.renamed_probe(i);
    const auto& rj = rs.renamed_probe(j);
    CellValues vi(ri.size()), vj(rj.size());
    for (const auto& x : rs.surviving_inputs()) {
        const auto enc = rs.reduced_encode(x);
        for (std::size_t k = 0; k < ri.size(); ++k) vi[k] = enc[ri[k]];
        for (std::size_t k = 0; k < rj.size(); ++k) vj[k] = enc[rj[k]];
        const auto ai = rs.reduced_decode(i, vi);
        const auto aj = rs.reduced_decode(j, vj);
        const bool ei = ai && pi(*ai);
        const bool ej = aj && pj(*aj);
        hi += ei;
        hj += ej;
        both += ei && ej;
    }
    const BigInt total = big(rs.surviving_inputs().size());
    return {make_rational(big(hi), total), make_rational(big(hj), total),
            make_rational(big(both), total)};
}

ChainLine line(std::string expr, std::string why, const Rational& v) {
    ChainLine l;
    l.expression = std::move(expr);
    l.justification = std::move(why);
    l.value = to_double(v);
    l.exact = v;
    return l;
}

ChainLine line(std::string expr, std::string why, double v) {
    ChainLine l;
    l.expression = std::move(expr);
    l.justification = std::move(why);
    l.value = v;
    return l;
}

// Fills relation, slack and holds between consecutive lines; records one
// check per relation.
void link_chain(PipelineReport& r, std::vector<ChainLine>& lines,
                const std::vector<std::pair<std::string, CheckScale>>& relations) {
    for (std::size_t k = 0; k + 1 < lines.size(); ++k) {
        auto& a = lines[k];
        const auto& b = lines[k + 1];
        a.relation = relations[k].first;
        a.scale = relations[k].second;
        a.slack = a.value - b.value;
        if (a.exact && b.exact) {
            const Rational diff = *a.exact - *b.exact;
            a.holds = a.relation == "=" ? diff == 0 : a.relation == ">" ? diff > 0 : diff >= 0;
        } else {
            const double tol = kEntropyTolerance;
            a.holds = a.relation == "=" ? std::fabs(a.slack) <= tol
                      : a.relation == ">" ? a.slack > 0
                                          : a.slack >= -tol;
        }
        check(r, "chain", "line " + std::to_string(k) + " " + a.relation + " line " +
                              std::to_string(k + 1),
              a.holds, a.scale);
    }
}

}  // namespace

PipelineReport run_prefix_pipeline(const Scheme& scheme, double c, const PipelineOptions& options) {
    if (scheme.domain() != Domain::all_bitstrings) {
        throw ParameterError("the prefix pipeline needs a scheme over all bit strings");
    }
    if (!(c > 1)) throw ParameterError("the prefix pipeline needs c > 1");
    if (scheme.n() > kMaxPipelineN) {
        throw SizeError("the prefix pipeline enumerates {0,1}^n; n = " + std::to_string(scheme.n()) +
                            " is too large",
                        scheme.n());
    }
    PipelineReport r;
    r.kind = "prefix";
    r.n = scheme.n();
    r.u = scheme.u();
    r.q = scheme.probes().q();
    r.cell_alphabet = scheme.cell_alphabet();
    r.c = c;
    r.redundancy = redundancy(scheme);
    const double lg_n = std::log2(static_cast<double>(r.n));

    // Separator with g = lg^c n.
    SeparatorStageRecord sep;
    sep.gap = std::pow(lg_n, c);
    if (!(sep.gap >= 2)) {
        r.separator = sep;
        truncate(r, "separator", "gap g = lg^c n = " + format_real(sep.gap) + " is below 2");
        return r;
    }
    const SeparatorResult sr = find_separator(scheme.probes(), sep.gap);
    sep.k0 = sr.k0;
    sep.blocker = sr.blocker;
    sep.kept = sr.kept;
    sep.w = sr.w;
    sep.stages_run = sr.stages_run;
    r.separator = sep;
    {
        const long double gq = static_cast<long double>(sep.gap) * r.q;
        const long double lower = r.q == 0 ? r.n : r.n / std::pow(gq, static_cast<long double>(r.q));
        check(r, "separator", "w >= n / (g q)^q", static_cast<long double>(sr.w) >= lower,
              CheckScale::independent);
        check(r, "separator", "|B| <= w / g",
              static_cast<long double>(sr.blocker.size()) * sep.gap <= static_cast<long double>(sr.w),
              CheckScale::independent);
        check(r, "separator", "Q(v) \\ B pairwise disjoint over V",
              pairwise_disjoint_after_removal(scheme.probes().sets(), sr.kept, sr.blocker),
              CheckScale::independent);
        check(r, "separator", "at most q + 1 stages", sr.stages_run <= r.q + 1,
              CheckScale::independent);
    }

    Fixed fx = run_fixing(r, scheme, sr.blocker);

    // Good cells with eta = 1/c on 2q-subsets.
    run_good_cells(r, fx, 1.0 / c, "2q", options);
    auto& gc = *r.good_cells;
    const bool eq9 = 2 * gc.v2.size() >= sr.w;
    check(r, "good-cells", "|V_2| >= w / 2", eq9, CheckScale::dependent);
    std::vector<std::size_t> next = gc.v2;
    if (!eq9) {
        gc.used_fallback = true;
        next = sr.kept;
        r.notes.push_back("good cells: |V_2| < w/2; the stretcher runs on V instead");
    }

    // Stretcher.
    SelectionStageRecord sel;
    sel.input = next;
    StretcherResult st;
    try {
        st = find_stretcher(as_u64(next), r.n, c);
    } catch (const StretcherStuck& e) {
        st = e.partial();
        sel.stuck = true;
        sel.stuck_window = e.window_start();
        r.notes.push_back(std::string("stretcher: ") + e.what());
    }
    sel.v3 = st.v_prime;
    sel.window = st.window;
    sel.guaranteed = st.guaranteed_size;
    r.selection = sel;
    {
        bool gaps = true;
        std::uint64_t prev = 0;
        for (std::size_t k = 0; k + 1 < st.v_prime.size(); k += 2) {
            const std::uint64_t a = st.v_prime[k], b = st.v_prime[k + 1];
            gaps = gaps && a > prev && b > a &&
                   static_cast<long double>(a - prev) >= static_cast<long double>(c) * (b - a);
            prev = b;
        }
        check(r, "stretcher", "v'_{2k+1} - v'_{2k} >= c (v'_{2k+2} - v'_{2k+1})", gaps,
              CheckScale::independent);
        check(r, "stretcher", "V_3 is a subsequence of its input",
              std::includes(next.begin(), next.end(), st.v_prime.begin(), st.v_prime.end()),
              CheckScale::independent);
        check(r, "stretcher", "sweep completed without a stuck window", !sel.stuck,
              CheckScale::dependent);
        check(r, "stretcher", "w' >= 2 floor(|input| / (c lg n))",
              st.v_prime.size() >= st.guaranteed_size,
              sel.stuck ? CheckScale::dependent : CheckScale::independent);
    }
    if (st.v_prime.size() < 2) {
        truncate(r, "stretcher", "fewer than two indices survive the stretcher (w' = " +
                                     std::to_string(st.v_prime.size()) + ")");
        return r;
    }

    // Entropy blocks: Z_k ends at v'_{2k+2}, the last block padded to n.
    std::vector<std::size_t> ends;
    for (std::size_t k = 1; k < st.v_prime.size(); k += 2) ends.push_back(st.v_prime[k]);
    run_blocks(r, fx, ends, 1.0 / c);
    auto& bl = *r.blocks;
    {
        const std::size_t k = bl.chosen - 1;
        bl.p = k == 0 ? 0 : st.v_prime[2 * k - 1];
        bl.i = st.v_prime[2 * k];
        bl.j = st.v_prime[2 * k + 1];
    }

    // Entropy sum.
    try {
        r.witness = entropy_sum_analysis(fx.x, bl.p, bl.i, bl.j, c);
    } catch (const DomainError& e) {
        truncate(r, "entropy-sum", e.what());
        return r;
    }
    const auto& w = *r.witness;
    const double t = static_cast<double>(w.threshold.t);
    r.s = t + (static_cast<double>(w.ell) + static_cast<double>(w.d)) / 2 +
          std::cbrt(c) * std::sqrt(static_cast<double>(w.d));
    r.s_prime = t + static_cast<double>(w.ell) / 2;
    {
        const Rational quarter(1, 4);
        check(r, "entropy-sum", "Pr[Y in A and sum >= t] >= 1/4", w.threshold.at_t >= quarter,
              CheckScale::independent);
        check(r, "entropy-sum", "Pr[Y in A and sum >= t+1] < 1/4", w.threshold.at_t_plus_1 < quarter,
              CheckScale::independent);
        check(r, "entropy-sum", "Pr[Y in A and sum <= t] >= 1/4", w.threshold.at_most_t >= quarter,
              CheckScale::dependent);
        check(r, "entropy-sum", "hypothesis H(x_{p+1..j} | x_{1..p}) >= l + d - 1/c",
              w.prefix_set.hypothesis_holds, CheckScale::dependent);
        check(r, "entropy-sum", "Pr[Y in A] >= 1/2", w.prefix_set.probability >= Rational(1, 2),
              CheckScale::dependent);
        check(r, "entropy-sum", "spacing l >= c d", w.spacing_holds, CheckScale::dependent);
        check(r, "entropy-sum", "P_upper >= 1/10", w.upper_ok, CheckScale::dependent);
        check(r, "entropy-sum", "P_lower >= 1/10", w.lower_ok, CheckScale::dependent);
        check(r, "entropy-sum", "P_joint <= 1/1000", w.joint_ok, CheckScale::dependent);
        check(r, "entropy-sum", "P_joint <= tail bound + TV of the block", w.joint_chain_holds,
              CheckScale::independent);
        // s and s' against the exact quantities the witness used.
        const bool s_match = std::fabs(*r.s - (to_double(w.upper_base) + std::cbrt(c) * std::sqrt(static_cast<double>(w.d)))) <= 1e-9 &&
                             std::fabs(*r.s_prime - to_double(w.lower_cut)) <= 1e-9 &&
                             static_cast<double>(w.upper_cutoff) >= *r.s - 1e-9 &&
                             static_cast<double>(w.upper_cutoff) - 1 < *r.s + 1e-9;
        check(r, "entropy-sum", "s = t + (l+d)/2 + c^{1/3} sqrt(d) and s' = t + l/2", s_match,
              CheckScale::independent);
    }

    // Final chain.
    ChainStageRecord ch;
    const Rational eta = Rational(1) / exact_rational(c);
    ch.closeness = to_double(eta);
    const std::size_t i = bl.i, j = bl.j;
    const std::int64_t cutoff = w.upper_cutoff;
    const Rational cut = w.lower_cut;
    const AnswerPred ej = [cutoff](std::int64_t a) { return a >= cutoff; };
    const AnswerPred ei = [cut](std::int64_t a) { return Rational(a) < cut; };
    {
        const auto& qi = fx.restricted.reduced_probes().query(i);
        const auto& qj = fx.restricted.reduced_probes().query(j);
        ProbeSet both;
        std::set_intersection(qi.begin(), qi.end(), qj.begin(), qj.end(), std::back_inserter(both));
        ch.probes_disjoint = both.empty();
    }
    ReducedEvents ry;
    UniformEvents uu;
    try {
        ry = reduced_events(fx.restricted, i, ei, j, ej);
        uu = uniform_events(fx.restricted, i, ei, j, ej, ch.probes_disjoint,
                            options.max_uniform_tuples);
    } catch (const SizeError& e) {
        truncate(r, "chain", e.what());
        return r;
    }
    ch.undefined_tuples = uu.undefined;
    auto& L = ch.lines;
    L.push_back(line("Pr_X[sum_{k<=j} x_k >= s and sum_{k<=i} x_k < s']", "", w.p_joint));
    L.push_back(line("Pr_Y[d'_j >= s and d'_i < s']", "answer preservation on X", ry.joint));
    L.push_back(line("Pr_U'[d'_j >= s and d'_i < s'] - 1/c", "pair closeness", uu.joint - eta));
    L.push_back(line("Pr_U'[d'_j >= s] Pr_U'[d'_i < s'] - 1/c", "Q'(i) and Q'(j) disjoint",
                     uu.p_j * uu.p_i - eta));
    L.push_back(line("(Pr_Y[d'_j >= s] - 1/c)(Pr_Y[d'_i < s'] - 1/c) - 1/c", "pair closeness again",
                     (ry.p_j - eta) * (ry.p_i - eta) - eta));
    L.push_back(line("(P_upper - 1/c)(P_lower - 1/c) - 1/c", "answer preservation again",
                     (w.p_upper - eta) * (w.p_lower - eta) - eta));
    L.push_back(line("(1/10 - 1/c)(1/10 - 1/c) - 1/c", "entropy-sum conclusions",
                     (Rational(1, 10) - eta) * (Rational(1, 10) - eta) - eta));
    L.push_back(line("1/200", "large enough c", Rational(1, 200)));
    link_chain(r, L,
               {{"=", CheckScale::independent},
                {">=", CheckScale::dependent},
                {"=", ch.probes_disjoint ? CheckScale::independent : CheckScale::dependent},
                {">=", CheckScale::dependent},
                {"=", CheckScale::independent},
                {">=", CheckScale::dependent},
                {">", CheckScale::dependent}});
    const auto eval = contradiction_chain(w.p_joint, w.p_upper, w.p_lower, eta);
    ch.bound = to_double(eval.bound);
    ch.contradiction = eval.contradiction;
    r.chain = ch;
    return r;
}

PipelineReport run_bracket_pipeline(const Scheme& scheme, unsigned c, const PipelineOptions& options) {
    if (scheme.domain() != Domain::balanced_brackets) {
        throw ParameterError("the bracket pipeline needs a scheme over balanced brackets");
    }
    if (scheme.n() % 2 != 0) throw ParameterError("the bracket pipeline needs even n");
    if (c < 4) throw ParameterError("the bracket pipeline needs c >= 4");
    if (scheme.n() > kMaxPipelineN) {
        throw SizeError("the bracket pipeline enumerates Bal(n); n = " + std::to_string(scheme.n()) +
                            " is too large",
                        scheme.n());
    }
    PipelineReport r;
    r.kind = "brackets";
    r.n = scheme.n();
    r.u = scheme.u();
    r.q = scheme.probes().q();
    r.cell_alphabet = scheme.cell_alphabet();
    r.c = c;
    r.redundancy = redundancy(scheme);
    const double lg_n = std::log2(static_cast<double>(r.n));

    const BracketSeparatorResult br = run_bracket_separator_stages(scheme.probes(), c);
    SeparatorStageRecord sep;
    sep.blocker = br.blocker;
    sep.kept = br.kept;
    sep.w = br.kept.size();
    sep.stages_run = br.stages_run;
    sep.a = br.a;
    sep.b = br.b;
    sep.d = 16.0 * std::pow(lg_n, static_cast<double>(br.a));
    r.separator = sep;
    check(r, "separator", "c a <= b <= c (2c)^a", br.exponent_relation, CheckScale::independent);
    check(r, "separator", "|V| >= n / lg^a n", br.kept_large, CheckScale::independent);
    check(r, "separator", "|B| <= n / lg^b n", br.blocker_small, CheckScale::dependent);
    check(r, "separator", "n / lg^b n >= 1", br.nontrivial_scale, CheckScale::dependent);
    check(r, "separator", "c >= 4 and q <= lg lg n / c", br.preconditions_hold, CheckScale::dependent);
    check(r, "separator", "Q(v) \\ B pairwise disjoint over V",
          pairwise_disjoint_after_removal(scheme.probes().sets(), br.kept, br.blocker),
          CheckScale::independent);

    Fixed fx = run_fixing(r, scheme, br.blocker);
    const double d = sep.d;

    run_good_cells(r, fx, 1.0 / (c * d), "2q", options);
    auto& gc = *r.good_cells;
    const bool eq21 = 2 * gc.v2.size() >= sep.w;
    check(r, "good-cells", "|V_2| >= |V| / 2", eq21, CheckScale::dependent);
    std::vector<std::size_t> next = gc.v2;
    if (!eq21) {
        gc.used_fallback = true;
        next = sep.kept;
        r.notes.push_back("good cells: |V_2| < |V|/2; close pairs are taken from V instead");
    }

    // Close pairs: consecutive pairs of V_2 at distance < d.
    SelectionStageRecord sel;
    sel.input = next;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t k = 0; k + 1 < next.size(); k += 2) {
        ++sel.pairs_total;
        if (static_cast<double>(next[k + 1] - next[k]) < d) {
            pairs.emplace_back(next[k], next[k + 1]);
            sel.v3.push_back(next[k]);
            sel.v3.push_back(next[k + 1]);
        } else {
            ++sel.pairs_far;
        }
    }
    r.selection = sel;
    check(r, "close-pairs", "at most n/d pairs thrown away",
          static_cast<double>(sel.pairs_far) <= static_cast<double>(r.n) / d, CheckScale::independent);
    if (pairs.empty()) {
        truncate(r, "close-pairs", "no pair of V_2 lies at distance < d");
        return r;
    }

    // Entropy blocks, each holding exactly one pair.
    std::vector<std::size_t> ends;
    for (const auto& [a, b] : pairs) ends.push_back(b);
    run_blocks(r, fx, ends, 1.0 / (16.0 * c * c * d));
    auto& bl = *r.blocks;
    {
        bool one_pair = true;
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            const std::size_t lo = bl.starts[k], hi = lo + bl.sizes[k] - 1;
            std::size_t inside = 0;
            for (const auto& [a, b] : pairs) inside += (a >= lo && b <= hi);
            one_pair = one_pair && inside == 1;
        }
        check(r, "blocks", "each block holds exactly one pair", one_pair, CheckScale::independent);
        bl.i = pairs[bl.chosen - 1].first;
        bl.j = pairs[bl.chosen - 1].second;
        bl.p = bl.starts[bl.chosen - 1] - 1;
    }

    // Final chain.
    ChainStageRecord ch;
    const double kappa = 1.0 / (c * d);
    ch.closeness = kappa;
    const std::size_t i = bl.i, j = bl.j;
    const AnswerPred ei = [j](std::int64_t a) { return a > static_cast<std::int64_t>(j); };
    const AnswerPred ej = [i](std::int64_t a) { return a < static_cast<std::int64_t>(i); };
    {
        const auto& qi = fx.restricted.reduced_probes().query(i);
        const auto& qj = fx.restricted.reduced_probes().query(j);
        ProbeSet both;
        std::set_intersection(qi.begin(), qi.end(), qj.begin(), qj.end(), std::back_inserter(both));
        ch.probes_disjoint = both.empty();
    }
    // Over X directly from the match oracle.
    std::uint64_t mi = 0, mj = 0, mboth = 0;
    for (const auto& x : fx.fixing.inputs) {
        const bool a = match_index(x, i) > j;
        const bool b = match_index(x, j) < i;
        mi += a;
        mj += b;
        mboth += a && b;
    }
    const BigInt total = big(fx.fixing.inputs.size());
    const Rational px_i = make_rational(big(mi), total), px_j = make_rational(big(mj), total);
    const Rational px_joint = make_rational(big(mboth), total);
    ReducedEvents ry;
    UniformEvents uu;
    try {
        ry = reduced_events(fx.restricted, i, ei, j, ej);
        uu = uniform_events(fx.restricted, i, ei, j, ej, ch.probes_disjoint,
                            options.max_uniform_tuples);
    } catch (const SizeError& e) {
        truncate(r, "chain", e.what());
        return r;
    }
    ch.undefined_tuples = uu.undefined;
    const std::size_t span = j - i + 1;
    const double open = to_double(unmatched_open_prob(span));
    const double close = to_double(unmatched_close_prob(span));
    const double shift = 2.0 / (c * std::sqrt(d));
    const double omega = options.bracket_alpha / std::sqrt(static_cast<double>(span));
    const double k = kappa;
    auto& L = ch.lines;
    L.push_back(line("Pr_X[Match(i) > j and Match(j) < i]", "i < j", px_joint));
    L.push_back(line("Pr_Y[d'_i > j and d'_j < i]", "answer preservation on X", ry.joint));
    L.push_back(line("Pr_U'[d'_i > j and d'_j < i] - 1/(c d)", "pair closeness", to_double(uu.joint) - k));
    L.push_back(line("Pr_U'[d'_i > j] Pr_U'[d'_j < i] - 1/(c d)", "Q'(i) and Q'(j) disjoint",
                     to_double(uu.p_i * uu.p_j) - k));
    L.push_back(line("(Pr_Y[d'_i > j] - 1/(c d))(Pr_Y[d'_j < i] - 1/(c d)) - 1/(c d)",
                     "pair closeness again", (to_double(ry.p_i) - k) * (to_double(ry.p_j) - k) - k));
    L.push_back(line("(Pr_X[Match(i) > j] - 1/(c d))(Pr_X[Match(j) < i] - 1/(c d)) - 1/(c d)",
                     "answer preservation again", (to_double(px_i) - k) * (to_double(px_j) - k) - k));
    L.push_back(line("(Pr[Match(i) > j] - 2/(c sqrt d))(Pr[Match(j) < i] - 2/(c sqrt d)) - 1/(c d)",
                     "block close to uniform", (open - shift) * (close - shift) - k));
    L.push_back(line("(alpha/sqrt(j-i+1) - 2/(c sqrt d))^2 - 1/(c d)", "ballot walk",
                     (omega - shift) * (omega - shift) - k));
    L.push_back(line("0", "large enough c", 0.0));
    link_chain(r, L,
               {{"=", CheckScale::independent},
                {">=", CheckScale::dependent},
                {"=", ch.probes_disjoint ? CheckScale::independent : CheckScale::dependent},
                {">=", CheckScale::dependent},
                {"=", CheckScale::independent},
                {">=", CheckScale::dependent},
                {">=", CheckScale::dependent},
                {">", CheckScale::dependent}});
    check(r, "chain", "left side is exactly 0", px_joint == 0, CheckScale::independent);
    ch.bound = (open - shift) * (close - shift) - k;
    ch.contradiction = L.front().value < ch.bound;
    r.chain = ch;
    return r;
}

namespace {

std::string scale_name(CheckScale s) {
    return s == CheckScale::independent ? "scale-independent" : "scale-dependent";
}

}  // namespace

Report pipeline_report(const PipelineReport& p) {
    Report out;
    out.section("pipeline");
    out.add("kind", p.kind);
    out.add_count("n", p.n);
    out.add_count("u", p.u);
    out.add_count("q", p.q);
    out.add_count("cell_alphabet", p.cell_alphabet);
    out.add("c", p.c);
    out.add("redundancy_bits", p.redundancy);
    if (p.separator) {
        const auto& s = *p.separator;
        out.section("separator");
        if (p.kind == "prefix") {
            out.add("gap", s.gap);
            out.add("k0", s.k0);
        } else {
            out.add_count("a", s.a);
            out.add_count("b", s.b);
            out.add("d", s.d);
        }
        out.add_list("B", s.blocker);
        out.add_list("V", s.kept);
        out.add_count("w", s.w);
        out.add_count("stages_run", s.stages_run);
    }
    if (p.fixing) {
        const auto& f = *p.fixing;
        out.section("fixing");
        out.add_list("z", f.z);
        out.add_count("X_size", f.surviving);
        out.add("domain_size", f.domain_size);
        out.add("lg_X", f.lg_surviving);
        out.add("lg_pigeonhole_bound", f.lg_pigeonhole);
        out.add("deficiency_bits", f.lg_domain - f.lg_surviving);
        out.add_count("u_prime", f.u_prime);
        out.add_count("cells_examined", f.reduced_coords);
    }
    if (p.good_cells) {
        const auto& g = *p.good_cells;
        out.section("good-cells");
        out.add("eta", g.eta);
        out.add_count("subset_size_requested", g.requested_subset);
        out.add_count("subset_size_used", g.subset_size);
        out.add("feasible", g.feasible);
        if (!g.infeasible_reason.empty()) out.add("infeasible_reason", g.infeasible_reason);
        out.add_list("G", g.good);
        out.add("a", g.a);
        out.add("size_bound", g.size_bound);
        out.add("verified", g.verified);
        out.add_list("V2", g.v2);
        out.add_count("pairs_checked", g.pairs_checked);
        out.add("max_pair_tv", g.max_pair_tv);
        out.add("fallback_to_V", g.used_fallback);
    }
    if (p.selection) {
        const auto& s = *p.selection;
        out.section(p.kind == "prefix" ? "stretcher" : "close-pairs");
        out.add_list("input", s.input);
        out.add_list("V3", s.v3);
        if (p.kind == "prefix") {
            out.add_count("window_t", s.window);
            out.add_count("guaranteed_size", s.guaranteed);
            out.add("stuck", s.stuck);
            if (s.stuck) out.add_count("stuck_window_s", s.stuck_window);
        } else {
            out.add_count("pairs_formed", s.pairs_total);
            out.add_count("pairs_thrown_away", s.pairs_far);
        }
    }
    if (p.blocks) {
        const auto& b = *p.blocks;
        out.section("blocks");
        out.add("epsilon", b.epsilon);
        out.add_list("starts", b.starts);
        out.add_list("sizes", b.sizes);
        std::string defs;
        for (auto v : b.deficiency) defs += (defs.empty() ? "" : " ") + format_real(v);
        out.add("deficiencies", defs);
        out.add("a", b.a);
        out.add("deficiency_sum", b.deficiency_sum);
        out.add_list("G", b.good);
        out.add("size_bound", b.size_bound);
        out.add_count("chosen_block", b.chosen);
        out.add("chosen_by_fallback", b.chosen_fallback);
        out.add_count("p", b.p);
        out.add_count("i", b.i);
        out.add_count("j", b.j);
    }
    if (p.witness) {
        const auto& w = *p.witness;
        out.section("entropy-sum");
        out.add_count("ell", w.ell);
        out.add_count("d", w.d);
        out.add_int("t", w.threshold.t);
        out.add("Pr_A", w.prefix_set.probability);
        out.add("measured_entropy", w.prefix_set.measured_entropy);
        out.add("required_entropy", w.prefix_set.required_entropy);
        out.add("s", *p.s);
        out.add("s_prime", *p.s_prime);
        out.add_int("upper_cutoff", w.upper_cutoff);
        out.add("P_upper", w.p_upper);
        out.add("P_lower", w.p_lower);
        out.add("P_lower_nonstrict", w.p_lower_nonstrict);
        out.add("lower_forms_differ", w.lower_forms_differ);
        out.add("P_joint", w.p_joint);
        out.add("tail_bound", w.tail_bound);
        out.add("block_tv", w.block_tv);
    }
    if (p.chain) {
        const auto& ch = *p.chain;
        out.section("chain");
        out.add("closeness", ch.closeness);
        out.add("probes_disjoint", ch.probes_disjoint);
        out.add_count("undefined_tuples", ch.undefined_tuples);
        for (std::size_t k = 0; k < ch.lines.size(); ++k) {
            const auto& l = ch.lines[k];
            const std::string key = "line" + std::to_string(k);
            out.add(key, l.expression);
            out.add(key + ".value", l.exact ? format_rational(*l.exact) : format_real(l.value));
            if (!l.justification.empty()) out.add(key + ".by", l.justification);
            if (!l.relation.empty()) {
                out.add(key + ".relation", l.relation + " next");
                out.add(key + ".slack", l.slack);
                out.add(key + ".holds", l.holds);
            }
        }
        out.add("bound", ch.bound);
        out.add("contradiction", ch.contradiction);
    }
    out.section("checks");
    for (const auto& c : p.checks) {
        out.add(c.stage + ": " + c.name, std::string(c.holds ? "pass" : "FAIL") + " (" +
                                             scale_name(c.scale) + ")");
    }
    out.section("verdict");
    for (const auto& note : p.notes) out.add("note", note);
    out.add("truncated", p.truncated);
    if (p.truncated) {
        out.add("truncated_at", p.truncated_stage);
        out.add("truncation_reason", p.truncated_reason);
    }
    out.add("scale_independent_checks", p.scale_independent_ok() ? "pass" : "FAIL");
    out.add("all_checks", p.all_checks_hold() ? "pass" : "some fail");
    return out;
}

}  // namespace cellprobe
