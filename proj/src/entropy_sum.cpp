#include "cellprobe/entropy_sum.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "cellprobe/errors.hpp"
#include "cellprobe/infotheory.hpp"

namespace cellprobe {

namespace {

const Distribution& require_bits(const Distribution& d) {
    for (auto m : d.alphabets()) {
        if (m != 2) throw DomainError("entropy-sum analysis needs a distribution over bit strings");
    }
    return d;
}

std::vector<std::size_t> range_coords(std::size_t from, std::size_t to) {
    std::vector<std::size_t> v(to - from);
    std::iota(v.begin(), v.end(), from);
    return v;
}

std::uint64_t ones(const Tuple& t, std::size_t upto) {
    std::uint64_t s = 0;
    for (std::size_t k = 0; k < upto; ++k) s += t[k];
    return s;
}

// Smallest integer >= r.
std::int64_t ceil_of(const Rational& r) {
    BigInt q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q.get_si();
}

std::int64_t floor_of(const Rational& r) {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q.get_si();
}

}  // namespace

std::size_t source_length(const BitSource& source) {
    if (const auto* u = std::get_if<UniformBits>(&source)) return u->n;
    return std::get<Distribution>(source).arity();
}

Rational binomial_tail(std::uint64_t trials, std::int64_t threshold) {
    if (threshold <= 0) return Rational(1);
    if (static_cast<std::uint64_t>(threshold) > trials) return Rational(0);
    BigInt count = 0;
    for (std::uint64_t k = static_cast<std::uint64_t>(threshold); k <= trials; ++k) {
        count += binomial(trials, k);
    }
    return make_rational(count, pow2(trials));
}

Rational binomial_point(std::uint64_t trials, std::int64_t k) {
    if (k < 0 || static_cast<std::uint64_t>(k) > trials) return Rational(0);
    return make_rational(binomial(trials, static_cast<unsigned long>(k)), pow2(trials));
}

std::int64_t ceil_shifted(const Rational& base, const Rational& c, std::uint64_t d) {
    if (c < 0) throw ParameterError("c must be >= 0");
    if (c == 0 || d == 0) return ceil_of(base);
    const Rational c2d3 = c * c * Rational(big(d) * big(d) * big(d));
    // K >= base + c^{1/3} sqrt(d)  <=>  K - base >= 0 and (K - base)^6 >= c^2 d^3
    auto holds = [&](std::int64_t k) {
        const Rational lhs = Rational(k) - base;
        if (lhs < 0) return false;
        const Rational sq = lhs * lhs;
        return sq * sq * sq >= c2d3;
    };
    const double approx = to_double(base) + std::cbrt(to_double(c)) * std::sqrt(static_cast<double>(d));
    std::int64_t k = static_cast<std::int64_t>(std::floor(approx));
    while (holds(k - 1)) --k;
    while (!holds(k)) ++k;
    return k;
}

CentralBinomial central_binomial_bounds(std::uint64_t m) {
    CentralBinomial r;
    r.m = m;
    const BigInt c = binomial(m, m / 2);
    const BigInt c2 = c * c;
    const BigInt four_m = ipow(4, m);
    r.lower_holds = 4 * big(m) * c2 >= four_m;
    r.upper_holds = big(m) * c2 <= four_m;
    return r;
}

GoodPrefixSet good_prefix_set_unchecked(const BitSource& source, std::size_t p, std::size_t j,
                                        double c) {
    const std::size_t n = source_length(source);
    if (p > j || j > n) throw ParameterError("good_prefix_set needs 0 <= p <= j <= n");
    if (!(c > 0)) throw ParameterError("c must be > 0");
    GoodPrefixSet a;
    a.p = p;
    a.j = j;
    a.c = c;
    const double width = static_cast<double>(j - p);
    a.required_entropy = width - 1.0 / c;

    if (std::holds_alternative<UniformBits>(source)) {
        a.all_prefixes = true;
        a.probability = 1;
        a.measured_entropy = width;
        a.hypothesis_holds = true;
        return a;
    }
    const Distribution& dist = require_bits(std::get<Distribution>(source));
    const auto block = range_coords(p, j);
    const auto prefix = range_coords(0, p);
    a.measured_entropy = conditional_entropy(dist, block, prefix);
    a.hypothesis_holds = a.measured_entropy >= a.required_entropy - kEntropyTolerance;

    // Group the support by prefix; only prefixes of positive probability appear.
    std::map<BitVector, std::map<Tuple, std::uint64_t>> groups;
    for (std::size_t k = 0; k < dist.support_size(); ++k) {
        const auto& t = dist.tuples()[k];
        BitVector y(std::vector<std::uint8_t>(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(p)));
        Tuple z(t.begin() + static_cast<std::ptrdiff_t>(p), t.begin() + static_cast<std::ptrdiff_t>(j));
        groups[y][z] += dist.weights()[k];
    }
    const double cut = width - 2.0 / c;
    BigInt mass = 0;
    for (const auto& [y, zs] : groups) {
        long double total = 0, s = 0;
        for (const auto& [z, w] : zs) {
            total += static_cast<long double>(w);
            s += static_cast<long double>(w) * std::log2(static_cast<long double>(w));
        }
        const double h = static_cast<double>(std::log2(total) - s / total);
        if (h >= cut - kEntropyTolerance) {
            a.members.push_back(y);
            std::uint64_t wy = 0;
            for (const auto& [z, w] : zs) wy += w;
            mass += big(wy);
        }
    }
    a.probability = make_rational(mass, big(dist.total()));
    return a;
}

GoodPrefixSet good_prefix_set(const BitSource& source, std::size_t p, std::size_t j, double c) {
    GoodPrefixSet a = good_prefix_set_unchecked(source, p, j, c);
    if (!a.hypothesis_holds) {
        throw HypothesisError("H(X_{p+1..j} | X_{1..p}) = " + format_real(a.measured_entropy) +
                                  " is below (j - p) - 1/c = " + format_real(a.required_entropy),
                              a.measured_entropy, a.required_entropy);
    }
    return a;
}

Threshold find_threshold(const BitSource& source, const GoodPrefixSet& a) {
    const std::size_t p = a.p;
    // mass[s] = Pr[Y in A and sum Y = s]
    std::vector<Rational> mass(p + 1, Rational(0));
    if (a.all_prefixes) {
        for (std::size_t s = 0; s <= p; ++s) mass[s] = binomial_point(p, static_cast<std::int64_t>(s));
    } else {
        const Distribution& dist = require_bits(std::get<Distribution>(source));
        std::vector<BigInt> counts(p + 1, BigInt(0));
        for (std::size_t k = 0; k < dist.support_size(); ++k) {
            const auto& t = dist.tuples()[k];
            BitVector y(std::vector<std::uint8_t>(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(p)));
            if (std::binary_search(a.members.begin(), a.members.end(), y)) {
                counts[y.popcount()] += big(dist.weights()[k]);
            }
        }
        for (std::size_t s = 0; s <= p; ++s) mass[s] = make_rational(counts[s], big(dist.total()));
    }
    const Rational quarter(1, 4);
    Rational at_least = 0;  // Pr[A and sum >= t] as t decreases
    for (std::size_t t = p + 1; t-- > 0;) {
        const Rational above = at_least;
        at_least += mass[t];
        if (at_least >= quarter) {
            Threshold r;
            r.t = static_cast<std::int64_t>(t);
            r.at_t = at_least;
            r.at_t_plus_1 = above;
            r.at_most_t = 0;
            for (std::size_t s = 0; s <= t; ++s) r.at_most_t += mass[s];
            return r;
        }
    }
    throw DomainError("no threshold t: Pr[Y in A] = " + to_string(at_least) + " < 1/4");
}

EntropySumWitness entropy_sum_analysis(const BitSource& source, std::size_t p, std::size_t i,
                                       std::size_t j, double c) {
    const std::size_t n = source_length(source);
    if (!(p < i && i < j && j <= n)) {
        throw ParameterError("entropy-sum analysis needs 0 <= p < i < j <= n (p = " +
                             std::to_string(p) + ", i = " + std::to_string(i) + ", j = " +
                             std::to_string(j) + ", n = " + std::to_string(n) + ")");
    }
    if (!(c > 0)) throw ParameterError("c must be > 0");
    EntropySumWitness w;
    w.p = p;
    w.i = i;
    w.j = j;
    w.ell = i - p;
    w.d = j - i;
    w.c = c;
    const Rational cq = exact_rational(c);
    w.spacing_holds = Rational(big(w.ell)) >= cq * Rational(big(w.d));
    w.prefix_set = good_prefix_set_unchecked(source, p, j, c);
    w.threshold = find_threshold(source, w.prefix_set);
    const std::int64_t t = w.threshold.t;

    w.upper_base = Rational(t) + Rational(big(w.ell + w.d), 2);
    w.upper_base.canonicalize();
    w.upper_cutoff = ceil_shifted(w.upper_base, cq, w.d);
    w.lower_cut = Rational(t) + Rational(big(w.ell), 2);
    w.lower_cut.canonicalize();
    // sum < cut  <=>  sum <= strict_max;  sum <= cut  <=>  sum <= loose_max
    const std::int64_t strict_max = ceil_of(w.lower_cut) - 1;
    const std::int64_t loose_max = floor_of(w.lower_cut);
    w.lower_forms_differ = strict_max != loose_max;

    Rational half_d(big(w.d), 2);
    half_d.canonicalize();
    w.tail_bound = binomial_tail(w.d, ceil_shifted(half_d, cq, w.d));

    if (std::holds_alternative<UniformBits>(source)) {
        const std::int64_t k_up = w.upper_cutoff;
        w.p_upper = binomial_tail(j, k_up);
        w.p_lower = 1 - binomial_tail(i, strict_max + 1);
        w.p_lower_nonstrict = 1 - binomial_tail(i, loose_max + 1);
        w.p_joint = 0;
        for (std::int64_t a = 0; a <= std::min<std::int64_t>(static_cast<std::int64_t>(i), strict_max); ++a) {
            w.p_joint += binomial_point(i, a) * binomial_tail(w.d, k_up - a);
        }
        w.block_tv = 0;
    } else {
        const Distribution& dist = require_bits(std::get<Distribution>(source));
        BigInt up = 0, lo = 0, lo_loose = 0, joint = 0;
        for (std::size_t k = 0; k < dist.support_size(); ++k) {
            const auto& x = dist.tuples()[k];
            const auto si = static_cast<std::int64_t>(ones(x, i));
            const auto sj = static_cast<std::int64_t>(ones(x, j));
            const BigInt wk = big(dist.weights()[k]);
            const bool u = sj >= w.upper_cutoff;
            const bool l = si <= strict_max;
            if (u) up += wk;
            if (l) lo += wk;
            if (si <= loose_max) lo_loose += wk;
            if (u && l) joint += wk;
        }
        const BigInt total = big(dist.total());
        w.p_upper = make_rational(up, total);
        w.p_lower = make_rational(lo, total);
        w.p_lower_nonstrict = make_rational(lo_loose, total);
        w.p_joint = make_rational(joint, total);
        const auto block = range_coords(i, j);
        w.block_tv = tv_to_uniform(dist.marginal(block));
    }
    w.upper_ok = w.p_upper >= Rational(1, 10);
    w.lower_ok = w.p_lower >= Rational(1, 10);
    w.joint_ok = w.p_joint <= Rational(1, 1000);
    w.holds = w.upper_ok && w.lower_ok && w.joint_ok;
    w.joint_chain_holds = w.p_joint <= w.tail_bound + w.block_tv;
    return w;
}

}  // namespace cellprobe
