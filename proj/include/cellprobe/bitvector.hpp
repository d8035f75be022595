#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cellprobe {

// An input x in {0,1}^n. Positions are 1-indexed at the API surface
// (x_1 ... x_n) to match query indices; operator[] is 0-indexed.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t n) : bits_(n, 0) {}
    explicit BitVector(std::vector<std::uint8_t> bits);

    // Accepts '0'/'1' characters; whitespace is not allowed.
    static BitVector parse(std::string_view text);

    // x_1 is the most significant bit of `code`, so ascending codes
    // enumerate {0,1}^n in lexicographic order.
    static BitVector from_code(std::uint64_t code, std::size_t n);

    std::size_t size() const noexcept { return bits_.size(); }
    bool empty() const noexcept { return bits_.empty(); }

    std::uint8_t operator[](std::size_t k) const { return bits_[k]; }
    // x_pos for 1 <= pos <= n.
    std::uint8_t at(std::size_t pos) const;
    void set(std::size_t k, bool value) { bits_[k] = value ? 1 : 0; }

    std::span<const std::uint8_t> bits() const noexcept { return bits_; }

    // Sum(i) = x_1 + ... + x_i; Sum(0) = 0.
    std::size_t prefix_sum(std::size_t i) const;
    std::size_t popcount() const { return prefix_sum(size()); }

    // Requires size() <= 64.
    std::uint64_t code() const;
    std::string str() const;

    auto operator<=>(const BitVector&) const = default;
    bool operator==(const BitVector&) const = default;

private:
    std::vector<std::uint8_t> bits_;
};

// All of {0,1}^n in lexicographic order. Requires n <= 30.
std::vector<BitVector> all_bitstrings(std::size_t n);

}  // namespace cellprobe
