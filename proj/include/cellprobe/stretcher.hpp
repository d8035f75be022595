#pragma once

// Stretcher: from ascending indices v_1 < ... < v_w pick pairs
// (v'_{2k+1}, v'_{2k+2}) such that the interval before each pair is at least
// c times the interval inside it, with v'_0 := 0.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cellprobe/errors.hpp"

namespace cellprobe {

struct StretcherPair {
    std::uint64_t first = 0;   // v'_{2k+1}
    std::uint64_t second = 0;  // v'_{2k+2}
    std::uint64_t lead = 0;    // v'_{2k+1} - v'_{2k}
    std::uint64_t gap = 0;     // v'_{2k+2} - v'_{2k+1}
};

struct StretcherResult {
    std::vector<std::uint64_t> v_prime;
    std::size_t w_prime = 0;
    std::vector<StretcherPair> pairs;
    std::size_t window = 0;           // t = floor(c lg n)
    std::size_t guaranteed_size = 0;  // 2 floor(w / (c lg n))
};

// Raised when a window of t indices contains no i with
// v_{s+i} - v_s >= c (v_{s+i+1} - v_{s+i}); this only happens when n is
// too small for c. Carries the stuck window and the pairs found before it.
class StretcherStuck : public Error {
public:
    StretcherStuck(const std::string& what, std::size_t window_start, StretcherResult partial)
        : Error(what), window_start_(window_start), partial_(std::move(partial)) {}
    // s, so the window is v_s .. v_{s+t} (v_0 = 0).
    std::size_t window_start() const noexcept { return window_start_; }
    const StretcherResult& partial() const noexcept { return partial_; }

private:
    std::size_t window_start_;
    StretcherResult partial_;
};

// The sweep: s := 0, t := floor(c lg n); while s <= w - t take the first
// 0 < i <= t - 1 with v_{s+i} - v_s >= c (v_{s+i+1} - v_{s+i}), keep
// (v_{s+i}, v_{s+i+1}) and set s := s + i + 1.
// Throws ParameterError unless the indices are strictly ascending in [1, n]
// and c > 1; throws StretcherStuck as described above.
StretcherResult find_stretcher(const std::vector<std::uint64_t>& indices, std::uint64_t n,
                               double c);

}  // namespace cellprobe
