#include "cellprobe/brackets.hpp"

#include "cellprobe/errors.hpp"

namespace cellprobe {

BitVector parse_brackets(std::string_view text) {
    BitVector x(text.size());
    for (std::size_t k = 0; k < text.size(); ++k) {
        switch (text[k]) {
            case '(':
            case '1': x.set(k, true); break;
            case ')':
            case '0': x.set(k, false); break;
            default:
                throw FormatError("invalid bracket character '" + std::string(1, text[k]) + "'");
        }
    }
    return x;
}

std::string to_brackets(const BitVector& x) {
    std::string s(x.size(), ')');
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (x[k]) s[k] = '(';
    }
    return s;
}

bool is_balanced(const BitVector& x) {
    if (x.size() % 2 != 0) return false;
    long depth = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        depth += x[k] ? 1 : -1;
        if (depth < 0) return false;
    }
    return depth == 0;
}

std::vector<std::size_t> match_partners(const BitVector& x) {
    std::vector<std::size_t> partner(x.size(), 0);
    std::vector<std::size_t> open;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (x[k]) {
            open.push_back(k);
        } else if (!open.empty()) {
            partner[k] = open.back() + 1;
            partner[open.back()] = k + 1;
            open.pop_back();
        }
    }
    return partner;
}

std::size_t match_index(const BitVector& x, std::size_t i) {
    if (!is_balanced(x)) throw DomainError("Match queried on unbalanced string " + x.str());
    if (i < 1 || i > x.size()) {
        throw RangeError("Match index " + std::to_string(i) + " outside [1, " +
                         std::to_string(x.size()) + "]");
    }
    return match_partners(x)[i - 1];
}

BigInt catalan_count(std::size_t n) {
    if (n % 2 != 0) throw ParameterError("catalan_count requires even n");
    const unsigned long half = n / 2;
    BigInt c = binomial(n, half);
    c /= BigInt(half + 1);
    return c;
}

namespace {

void bal_recurse(BitVector& x, std::size_t pos, std::size_t opens, std::size_t depth,
                 const std::function<void(const BitVector&)>& visit) {
    const std::size_t n = x.size();
    if (pos == n) {
        visit(x);
        return;
    }
    if (depth > 0) {
        x.set(pos, false);
        bal_recurse(x, pos + 1, opens, depth - 1, visit);
    }
    if (opens < n / 2) {
        x.set(pos, true);
        bal_recurse(x, pos + 1, opens + 1, depth + 1, visit);
    }
}

}  // namespace

void for_each_bal(std::size_t n, const std::function<void(const BitVector&)>& visit) {
    if (n % 2 != 0) throw ParameterError("Bal(n) requires even n");
    if (n > kMaxEnumeratedBracketLength) {
        throw SizeError("refusing to enumerate Bal(n) for n > " +
                            std::to_string(kMaxEnumeratedBracketLength),
                        n);
    }
    BitVector x(n);
    bal_recurse(x, 0, 0, 0, visit);
}

std::vector<BitVector> enumerate_bal(std::size_t n) {
    std::vector<BitVector> out;
    for_each_bal(n, [&](const BitVector& x) { out.push_back(x); });
    return out;
}

namespace {

void check_walk_length(std::size_t d) {
    if (d < 1) throw ParameterError("walk length d must be >= 1");
    if (d > kMaxWalkLength) {
        throw SizeError("exact enumeration over {0,1}^d limited to d <= " +
                            std::to_string(kMaxWalkLength),
                        d);
    }
}

}  // namespace

Rational unmatched_open_prob(std::size_t d) {
    check_walk_length(d);
    // Bit d-1-k of `code` is x_{k+1}. x_1 sits at the bottom of the stack,
    // so it is matched exactly when the pending-open count drops to zero.
    std::uint64_t hits = 0;
    const std::uint64_t total = std::uint64_t{1} << d;
    for (std::uint64_t code = 0; code < total; ++code) {
        if (((code >> (d - 1)) & 1U) == 0) continue;
        std::size_t pending = 1;
        bool matched = false;
        for (std::size_t k = 1; k < d && !matched; ++k) {
            if ((code >> (d - 1 - k)) & 1U) {
                ++pending;
            } else if (--pending == 0) {
                matched = true;
            }
        }
        if (!matched) ++hits;
    }
    return make_rational(hits, total);
}

Rational unmatched_close_prob(std::size_t d) {
    check_walk_length(d);
    // x_d is unmatched iff no open bracket is pending after x_1..x_{d-1}.
    std::uint64_t hits = 0;
    const std::uint64_t total = std::uint64_t{1} << d;
    for (std::uint64_t code = 0; code < total; ++code) {
        if ((code & 1U) != 0) continue;
        std::size_t pending = 0;
        for (std::size_t k = 0; k + 1 < d; ++k) {
            if ((code >> (d - 1 - k)) & 1U) {
                ++pending;
            } else if (pending > 0) {
                --pending;
            }
        }
        if (pending == 0) ++hits;
    }
    return make_rational(hits, total);
}

}  // namespace cellprobe
