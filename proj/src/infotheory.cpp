#include "cellprobe/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "cellprobe/errors.hpp"

namespace cellprobe {

namespace {

__extension__ typedef unsigned __int128 u128;

long double wlgw(long double w) { return w > 0 ? w * std::log2(w) : 0.0L; }

// One uint64 key per support element for the given coordinates: a mixed-radix
// packing when the sub-space fits in 64 bits, dense ids otherwise.
std::vector<std::uint64_t> column_keys(const Distribution& d, std::span<const std::size_t> coords) {
    const auto& alph = d.alphabets();
    for (auto c : coords) {
        if (c >= d.arity()) throw RangeError("coordinate " + std::to_string(c) + " out of range");
    }
    std::vector<std::uint64_t> keys(d.support_size(), 0);
    u128 prod = 1;
    bool packable = true;
    for (auto c : coords) {
        prod *= alph[c];
        if (prod > UINT64_MAX) {
            packable = false;
            break;
        }
    }
    if (packable) {
        for (std::size_t k = 0; k < keys.size(); ++k) {
            std::uint64_t key = 0;
            for (auto c : coords) key = key * alph[c] + d.tuples()[k][c];
            keys[k] = key;
        }
        return keys;
    }
    std::map<Tuple, std::uint64_t> ids;
    Tuple t(coords.size());
    for (std::size_t k = 0; k < keys.size(); ++k) {
        for (std::size_t j = 0; j < coords.size(); ++j) t[j] = d.tuples()[k][coords[j]];
        keys[k] = ids.emplace(t, ids.size()).first->second;
    }
    return keys;
}

BigInt to_big(u128 v) {
    BigInt r;
    const std::uint64_t parts[2] = {static_cast<std::uint64_t>(v), static_cast<std::uint64_t>(v >> 64)};
    mpz_import(r.get_mpz_t(), 2, -1, sizeof(std::uint64_t), 0, 0, parts);
    return r;
}

std::vector<std::size_t> iota_coords(std::size_t from, std::size_t count) {
    std::vector<std::size_t> v(count);
    std::iota(v.begin(), v.end(), from);
    return v;
}

}  // namespace

double entropy(const Distribution& dist) {
    const long double total = static_cast<long double>(dist.total());
    long double s = 0;
    for (auto w : dist.weights()) s += wlgw(static_cast<long double>(w));
    return static_cast<double>(std::log2(total) - s / total);
}

double entropy(const Distribution& dist, std::span<const std::size_t> coords) {
    return conditional_entropy(dist, coords, {});
}

double conditional_entropy(const Distribution& dist, std::span<const std::size_t> target,
                           std::span<const std::size_t> given) {
    const auto tk = column_keys(dist, target);
    const auto gk = column_keys(dist, given);
    std::vector<std::size_t> order(dist.support_size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return gk[a] != gk[b] ? gk[a] < gk[b] : tk[a] < tk[b];
    });
    const auto& w = dist.weights();
    long double acc = 0;
    std::size_t k = 0;
    while (k < order.size()) {
        // One conditioning value g: H(target | given = g) weighted by Pr[g].
        long double group_weight = 0, inner = 0;
        while (true) {
            long double cell = 0;
            const std::size_t first = k;
            while (k < order.size() && gk[order[k]] == gk[order[first]] &&
                   tk[order[k]] == tk[order[first]]) {
                cell += static_cast<long double>(w[order[k]]);
                ++k;
            }
            group_weight += cell;
            inner += wlgw(cell);
            if (k == order.size() || gk[order[k]] != gk[order[first]]) break;
        }
        acc += wlgw(group_weight) - inner;
    }
    const double h = static_cast<double>(acc / static_cast<long double>(dist.total()));
    return h < 0 ? 0.0 : h;
}

Rational tv_distance(const Distribution& a, const Distribution& b) {
    if (a.alphabets() != b.alphabets()) {
        throw DomainError("total variation distance needs distributions over the same space");
    }
    const BigInt ta = big(a.total()), tb = big(b.total());
    BigInt num = 0;
    std::size_t i = 0, j = 0;
    while (i < a.support_size() || j < b.support_size()) {
        const bool take_a = j == b.support_size() ||
                            (i < a.support_size() && a.tuples()[i] <= b.tuples()[j]);
        const bool take_b = i == a.support_size() ||
                            (j < b.support_size() && b.tuples()[j] <= a.tuples()[i]);
        const BigInt wa = take_a ? big(a.weights()[i]) : BigInt(0);
        const BigInt wb = take_b ? big(b.weights()[j]) : BigInt(0);
        BigInt diff = wa * tb - wb * ta;
        num += abs(diff);
        if (take_a) ++i;
        if (take_b) ++j;
    }
    return make_rational(num, 2 * ta * tb);
}

Rational tv_to_uniform(const Distribution& dist) {
    const BigInt n = dist.space_size();
    const BigInt t = big(dist.total());
    BigInt num = (n - big(dist.support_size())) * t;
    for (auto w : dist.weights()) {
        BigInt diff = big(w) * n - t;
        num += abs(diff);
    }
    return make_rational(num, 2 * t * n);
}

HighEntropyCheck check_high_entropy_uniform(const Distribution& dist, double alpha) {
    if (!(alpha >= 0)) throw ParameterError("alpha must be >= 0");
    HighEntropyCheck r;
    r.alpha = alpha;
    r.entropy = entropy(dist);
    r.lg_size = lg(dist.space_size());
    r.precondition_holds = r.entropy >= r.lg_size - alpha - kEntropyTolerance;
    r.bound = 4 * std::sqrt(alpha);
    if (r.precondition_holds) {
        r.distance = tv_to_uniform(dist);
        // distance <= 4 sqrt(alpha)  <=>  distance^2 <= 16 alpha
        r.holds = r.distance * r.distance <= 16 * exact_rational(alpha);
    }
    return r;
}

GoodBlocksReport good_blocks(const Distribution& x, const std::vector<std::size_t>& block_sizes,
                             double epsilon) {
    if (!(epsilon > 0)) throw ParameterError("epsilon must be > 0");
    for (auto m : x.alphabets()) {
        if (m != 2) throw DomainError("good_blocks needs a distribution over bit strings");
    }
    std::size_t n = 0;
    for (auto s : block_sizes) {
        if (s < 1) throw ParameterError("block sizes must be >= 1");
        n += s;
    }
    if (n != x.arity()) {
        throw ParameterError("block sizes sum to " + std::to_string(n) + ", not n = " +
                             std::to_string(x.arity()));
    }
    GoodBlocksReport r;
    r.block_sizes = block_sizes;
    r.epsilon = epsilon;
    r.a = static_cast<double>(n) - entropy(x);
    std::size_t start = 0;
    bool tv_ok = true;
    for (std::size_t i = 0; i < block_sizes.size(); ++i) {
        const auto block = iota_coords(start, block_sizes[i]);
        const auto prefix = iota_coords(0, start);
        const double h = conditional_entropy(x, block, prefix);
        r.conditional_entropy.push_back(h);
        r.deficiency.push_back(static_cast<double>(block_sizes[i]) - h);
        r.deficiency_sum += r.deficiency.back();
        if (h >= static_cast<double>(block_sizes[i]) - epsilon - kEntropyTolerance) {
            r.good.push_back(i + 1);
            r.tv_to_uniform.push_back(tv_to_uniform(x.marginal(block)));
            const Rational& tv = r.tv_to_uniform.back();
            if (!(tv * tv <= 16 * exact_rational(epsilon))) tv_ok = false;
        }
        start += block_sizes[i];
    }
    r.size_bound = static_cast<double>(block_sizes.size()) - r.a / epsilon;
    r.size_bound_satisfied = static_cast<double>(r.good.size()) >= r.size_bound - kEntropyTolerance;
    r.tv_clause_holds = tv_ok;
    return r;
}

std::uint64_t good_cells_subset_count(std::size_t coords, std::size_t q) {
    std::uint64_t total = 0;
    for (std::size_t s = 1; s <= std::min(q, coords); ++s) {
        const BigInt c = binomial(coords, s);
        if (!c.fits_ulong_p()) return UINT64_MAX;
        total += c.get_ui();
    }
    return total;
}

namespace {

// Exact TV of the joint marginal on `subset` from uniform, with a fast
// 128-bit path.
class SubsetTv {
public:
    explicit SubsetTv(const Distribution& y) : y_(y), keys_(y.support_size()) {}

    Rational operator()(std::span<const std::size_t> subset) {
        const auto& alph = y_.alphabets();
        long double lg_n = 0;
        for (auto c : subset) lg_n += std::log2(static_cast<long double>(alph[c]));
        const long double lg_t = std::log2(static_cast<long double>(y_.total()));
        const long double lg_s = std::log2(static_cast<long double>(y_.support_size() + 2));
        if (lg_n + lg_t + lg_s >= 124) return tv_to_uniform(y_.marginal(subset));

        std::uint64_t n = 1;
        for (auto c : subset) n *= alph[c];
        for (std::size_t k = 0; k < keys_.size(); ++k) {
            std::uint64_t key = 0;
            for (auto c : subset) key = key * alph[c] + y_.tuples()[k][c];
            keys_[k] = {key, y_.weights()[k]};
        }
        std::sort(keys_.begin(), keys_.end());
        const u128 t = y_.total();
        u128 num = 0;
        std::uint64_t runs = 0;
        std::size_t k = 0;
        while (k < keys_.size()) {
            u128 w = 0;
            const auto key = keys_[k].first;
            while (k < keys_.size() && keys_[k].first == key) w += keys_[k++].second;
            const u128 lhs = w * n;
            num += lhs > t ? lhs - t : t - lhs;
            ++runs;
        }
        num += static_cast<u128>(n - runs) * t;
        return make_rational(to_big(num), to_big(2 * t * n));
    }

private:
    const Distribution& y_;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> keys_;
};

// Calls visit(subset) for every s-subset of `items` in lexicographic order;
// stops early when visit returns false.
template <typename Visit>
void for_each_subset(const std::vector<std::size_t>& items, std::size_t s, Visit&& visit) {
    if (s > items.size()) return;
    std::vector<std::size_t> idx(s);
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<std::size_t> subset(s);
    while (true) {
        for (std::size_t j = 0; j < s; ++j) subset[j] = items[idx[j]];
        if (!visit(subset)) return;
        std::size_t j = s;
        while (j > 0 && idx[j - 1] == items.size() - s + (j - 1)) --j;
        if (j == 0) return;
        ++idx[j - 1];
        for (std::size_t l = j; l < s; ++l) idx[l] = idx[l - 1] + 1;
    }
}

}  // namespace

Rational marginal_tv_to_uniform(const Distribution& dist, std::span<const std::size_t> coords) {
    for (auto c : coords) {
        if (c >= dist.arity()) throw RangeError("coordinate " + std::to_string(c) + " out of range");
    }
    SubsetTv tv(dist);
    return tv(coords);
}

GoodCellsReport good_cells(const Distribution& y, std::size_t q, double eta,
                           const GoodCellsOptions& options) {
    if (!(eta > 0)) throw ParameterError("eta must be > 0");
    GoodCellsReport r;
    r.eta = eta;
    r.q = q;
    const std::size_t u = y.arity();
    r.a = lg(y.space_size()) - entropy(y);
    for (std::size_t k = 0; k < u; ++k) {
        const std::size_t coord[1] = {k};
        r.score.push_back(std::log2(static_cast<double>(y.alphabets()[k])) - entropy(y, coord));
    }

    auto budget_check = [&](std::size_t items, std::size_t s) {
        const BigInt count = binomial(items, s);
        const BigInt work = count * big(y.support_size());
        if (work > big(options.max_work)) {
            throw SizeError("good_cells: " + to_string(count) + " subsets of size " +
                                std::to_string(s) + " over a support of " +
                                std::to_string(y.support_size()) + " exceed the work budget",
                            count.fits_ulong_p() ? count.get_ui() : SIZE_MAX);
        }
    };

    const Rational eta_q = exact_rational(eta);
    SubsetTv tv(y);
    std::vector<char> alive(u, 1);
    std::vector<std::size_t> g = iota_coords(0, u);
    for (std::size_t s = 1; s <= std::min(q, g.size()); ++s) {
        budget_check(g.size(), s);
        const auto snapshot = g;
        for_each_subset(snapshot, s, [&](const std::vector<std::size_t>& subset) {
            for (auto c : subset) {
                if (!alive[c]) return true;
            }
            if (tv(subset) <= eta_q) return true;
            std::size_t worst = subset.front();
            for (auto c : subset) {
                if (r.score[c] > r.score[worst]) worst = c;
            }
            alive[worst] = 0;
            r.removed.push_back(worst);
            return true;
        });
        g.clear();
        for (std::size_t k = 0; k < u; ++k) {
            if (alive[k]) g.push_back(k);
        }
    }
    r.good = g;

    // Independent exhaustive verification of the final set.
    r.subset_size = std::min(q, g.size());
    r.verified = true;
    r.max_tv = 0;
    if (r.subset_size > 0) {
        budget_check(g.size(), r.subset_size);
        for_each_subset(g, r.subset_size, [&](const std::vector<std::size_t>& subset) {
            ++r.subsets_checked;
            const Rational d = tv(subset);
            if (d > r.max_tv) r.max_tv = d;
            if (d > eta_q) r.verified = false;
            return true;
        });
    }
    r.size_bound = static_cast<double>(u) - 16.0 * static_cast<double>(q) * r.a / (eta * eta);
    r.size_bound_satisfied = static_cast<double>(g.size()) >= r.size_bound - kEntropyTolerance;
    return r;
}

}  // namespace cellprobe
