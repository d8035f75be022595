#include "cellprobe/stretcher.hpp"

#include <cmath>

namespace cellprobe {

StretcherResult find_stretcher(const std::vector<std::uint64_t>& indices, std::uint64_t n,
                               double c) {
    if (!(c > 1)) throw ParameterError("stretcher requires c > 1");
    if (n < 1) throw ParameterError("stretcher requires n >= 1");
    for (std::size_t k = 0; k < indices.size(); ++k) {
        if (indices[k] < 1 || indices[k] > n) {
            throw ParameterError("stretcher index " + std::to_string(indices[k]) +
                                 " outside [1, " + std::to_string(n) + "]");
        }
        if (k > 0 && indices[k] <= indices[k - 1]) {
            throw ParameterError("stretcher indices must be strictly ascending");
        }
    }

    const std::size_t w = indices.size();
    const long double c_lg_n = static_cast<long double>(c) * std::log2(static_cast<long double>(n));
    StretcherResult r;
    r.window = static_cast<std::size_t>(std::floor(c_lg_n));
    r.guaranteed_size = c_lg_n > 0 ? 2 * static_cast<std::size_t>(std::floor(w / c_lg_n)) : 0;

    // v_0 := 0.
    auto v = [&](std::size_t k) -> std::uint64_t { return k == 0 ? 0 : indices[k - 1]; };
    const std::size_t t = r.window;
    std::size_t s = 0;
    while (s + t <= w) {
        bool found = false;
        for (std::size_t i = 1; i + 1 <= t; ++i) {
            const std::uint64_t lead = v(s + i) - v(s);
            const std::uint64_t gap = v(s + i + 1) - v(s + i);
            if (static_cast<long double>(lead) >= static_cast<long double>(c) * gap) {
                r.pairs.push_back({v(s + i), v(s + i + 1), lead, gap});
                r.v_prime.push_back(v(s + i));
                r.v_prime.push_back(v(s + i + 1));
                s += i + 1;
                found = true;
                break;
            }
        }
        if (!found) {
            r.w_prime = r.v_prime.size();
            throw StretcherStuck("stretcher stuck: no qualifying i in the window starting at s = " +
                                     std::to_string(s) + " (t = " + std::to_string(t) +
                                     "); n is too small for c",
                                 s, std::move(r));
        }
    }
    r.w_prime = r.v_prime.size();
    return r;
}

}  // namespace cellprobe
