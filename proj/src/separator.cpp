#include "cellprobe/separator.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "cellprobe/errors.hpp"

namespace cellprobe {

namespace {

bool removed_contains(const ProbeSet& removed, std::uint32_t c) {
    return std::binary_search(removed.begin(), removed.end(), c);
}

// Union of the chosen sets minus B.
ProbeSet covering_of(const std::vector<ProbeSet>& family, const std::vector<std::size_t>& chosen,
                     const ProbeSet& removed) {
    ProbeSet cover;
    for (auto v : chosen) {
        for (auto c : family[v - 1]) {
            if (!removed_contains(removed, c)) cover.push_back(c);
        }
    }
    std::sort(cover.begin(), cover.end());
    cover.erase(std::unique(cover.begin(), cover.end()), cover.end());
    return cover;
}

ProbeSet merge(const ProbeSet& a, const ProbeSet& b) {
    ProbeSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace

std::vector<std::size_t> greedy_disjoint(const std::vector<ProbeSet>& family,
                                         const ProbeSet& removed) {
    std::unordered_set<std::uint32_t> used;
    std::vector<std::size_t> chosen;
    for (std::size_t k = 0; k < family.size(); ++k) {
        bool clash = false;
        for (auto c : family[k]) {
            if (!removed_contains(removed, c) && used.count(c)) {
                clash = true;
                break;
            }
        }
        if (clash) continue;
        for (auto c : family[k]) {
            if (!removed_contains(removed, c)) used.insert(c);
        }
        chosen.push_back(k + 1);
    }
    return chosen;
}

bool pairwise_disjoint_after_removal(const std::vector<ProbeSet>& family,
                                     const std::vector<std::size_t>& chosen,
                                     const ProbeSet& removed) {
    std::unordered_set<std::uint32_t> seen;
    for (auto v : chosen) {
        if (v < 1 || v > family.size()) return false;
        for (auto c : family[v - 1]) {
            if (removed_contains(removed, c)) continue;
            if (!seen.insert(c).second) return false;
        }
    }
    return true;
}

SeparatorResult find_separator(const ProbeFamily& family, double gap) {
    return find_separator(family, gap, family.q());
}

SeparatorResult find_separator(const ProbeFamily& family, double gap, std::size_t q) {
    if (!(gap >= 2)) throw ParameterError("separator gap g must be >= 2");
    if (family.q() > q) {
        throw ParameterError("family has a set of size " + std::to_string(family.q()) +
                             " > q = " + std::to_string(q));
    }
    const auto& sets = family.sets();
    const long double n = static_cast<long double>(sets.size());
    const long double gq = static_cast<long double>(gap) * static_cast<long double>(q);
    // (g q)^q with 0^0 = 1.
    const long double scale = q == 0 ? 1.0L : std::pow(gq, static_cast<long double>(q));

    SeparatorResult r;
    r.gap = gap;
    r.q = q;
    r.k0 = static_cast<double>(n / scale);

    for (std::size_t i = 0; i <= q; ++i) {
        SeparatorStage st;
        st.stage = i;
        st.blocker_size = r.blocker.size();
        if (i >= 1) {
            const long double bound = (n / scale) *
                                      std::pow(static_cast<long double>(gap), i - 1.0L) *
                                      std::pow(static_cast<long double>(q), static_cast<long double>(i));
            st.blocker_bound = static_cast<double>(bound);
            st.blocker_bound_holds = static_cast<long double>(st.blocker_size) <= bound;
        }
        auto chosen = greedy_disjoint(sets, r.blocker);
        st.disjoint_found = chosen.size();
        // k0 (g q)^i = n (g q)^{i - q}; compare without dividing.
        const long double threshold =
            q == 0 ? n : n * std::pow(gq, static_cast<long double>(i) - static_cast<long double>(q));
        st.threshold = static_cast<double>(threshold);
        const long double lhs =
            static_cast<long double>(chosen.size()) *
            (q == 0 ? 1.0L : std::pow(gq, static_cast<long double>(q) - static_cast<long double>(i)));
        st.succeeded = lhs >= n;
        r.log.push_back(st);
        r.stages_run = i + 1;
        if (st.succeeded) {
            r.kept = std::move(chosen);
            r.w = r.kept.size();
            return r;
        }
        r.blocker = merge(r.blocker, covering_of(sets, chosen, r.blocker));
    }
    // Unreachable for well-formed input: at stage q every remainder is empty.
    throw Error("separator failed to terminate within q + 1 stages");
}

BracketSeparatorResult run_bracket_separator_stages(const ProbeFamily& family, unsigned c) {
    if (c < 1) throw ParameterError("bracket separator constant c must be >= 1");
    const auto& sets = family.sets();
    const std::size_t n = sets.size();
    if (n < 2) throw ParameterError("bracket separator needs n >= 2");
    const std::size_t q = family.q();
    const long double L = std::log2(static_cast<long double>(n));
    const std::uint64_t d = 2ULL * c;

    BracketSeparatorResult r;
    r.c = c;
    r.q = q;
    r.lg_n = static_cast<double>(L);
    r.preconditions_hold =
        c >= 4 && static_cast<long double>(q) <= std::log2(L) / static_cast<long double>(c);

    auto d_pow = [&](std::size_t e) {
        std::uint64_t v = 1;
        for (std::size_t k = 0; k < e; ++k) {
            if (v > UINT64_MAX / d) throw SizeError("exponent d^(q-i) overflows", e);
            v *= d;
        }
        return v;
    };
    auto n_over_L_pow = [&](long double e) {
        return static_cast<long double>(n) / std::pow(L, e);
    };

    for (std::size_t i = 0; i <= q; ++i) {
        BracketSeparatorStage st;
        st.stage = i;
        st.blocker_size = r.blocker.size();
        const std::uint64_t a = d_pow(q - i);
        const std::uint64_t b = c * a;
        if (i >= 1) {
            st.blocker_bound = static_cast<double>(n_over_L_pow(static_cast<long double>(b)));
            st.blocker_bound_holds = static_cast<long double>(st.blocker_size) <=
                                     n_over_L_pow(static_cast<long double>(b));
        }
        auto chosen = greedy_disjoint(sets, r.blocker);
        st.disjoint_found = chosen.size();
        const long double threshold = n_over_L_pow(static_cast<long double>(a));
        st.threshold = static_cast<double>(threshold);
        st.succeeded = static_cast<long double>(chosen.size()) >= threshold;
        r.log.push_back(st);
        r.stages_run = i + 1;
        if (st.succeeded) {
            r.kept = std::move(chosen);
            r.a = a;
            r.b = b;
            const long double ca = static_cast<long double>(c) * a;
            const long double upper =
                static_cast<long double>(c) * std::pow(2.0L * c, static_cast<long double>(a));
            r.exponent_relation = ca <= static_cast<long double>(b) &&
                                  static_cast<long double>(b) <= upper;
            r.blocker_small = static_cast<long double>(r.blocker.size()) <=
                              n_over_L_pow(static_cast<long double>(b));
            r.kept_large = static_cast<long double>(r.kept.size()) >=
                           n_over_L_pow(static_cast<long double>(a));
            r.nontrivial_scale = n_over_L_pow(static_cast<long double>(b)) >= 1.0L;
            return r;
        }
        r.blocker = merge(r.blocker, covering_of(sets, chosen, r.blocker));
    }
    throw Error("bracket separator failed to terminate within q + 1 stages");
}

BracketSeparatorResult find_separator_brackets(const ProbeFamily& family, unsigned c) {
    if (c < 4) throw ParameterError("bracket separator requires c >= 4");
    const std::size_t n = family.size();
    if (n < 2) throw ParameterError("bracket separator needs n >= 2");
    const long double L = std::log2(static_cast<long double>(n));
    if (static_cast<long double>(family.q()) > std::log2(L) / static_cast<long double>(c)) {
        throw ParameterError("bracket separator requires q <= lg lg n / c (q = " +
                             std::to_string(family.q()) + ", lg lg n / c = " +
                             std::to_string(static_cast<double>(std::log2(L) / c)) + ")");
    }
    return run_bracket_separator_stages(family, c);
}

}  // namespace cellprobe
