#include "cellprobe/bitvector.hpp"

#include "cellprobe/errors.hpp"

namespace cellprobe {

BitVector::BitVector(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto b : bits_) {
        if (b > 1) throw DomainError("bit vector element is not 0 or 1");
    }
}

BitVector BitVector::parse(std::string_view text) {
    BitVector x(text.size());
    for (std::size_t k = 0; k < text.size(); ++k) {
        const char ch = text[k];
        if (ch != '0' && ch != '1') {
            throw FormatError("invalid bit character '" + std::string(1, ch) + "' in \"" +
                              std::string(text) + "\"");
        }
        x.bits_[k] = ch == '1' ? 1 : 0;
    }
    return x;
}

BitVector BitVector::from_code(std::uint64_t code, std::size_t n) {
    if (n > 64) throw ParameterError("bit vector code limited to 64 bits");
    BitVector x(n);
    for (std::size_t k = 0; k < n; ++k) {
        x.bits_[k] = static_cast<std::uint8_t>((code >> (n - 1 - k)) & 1U);
    }
    return x;
}

std::uint8_t BitVector::at(std::size_t pos) const {
    if (pos < 1 || pos > bits_.size()) {
        throw RangeError("bit position " + std::to_string(pos) + " outside [1, " +
                         std::to_string(bits_.size()) + "]");
    }
    return bits_[pos - 1];
}

std::size_t BitVector::prefix_sum(std::size_t i) const {
    if (i > bits_.size()) {
        throw RangeError("prefix length " + std::to_string(i) + " exceeds " +
                         std::to_string(bits_.size()));
    }
    std::size_t s = 0;
    for (std::size_t k = 0; k < i; ++k) s += bits_[k];
    return s;
}

std::uint64_t BitVector::code() const {
    if (bits_.size() > 64) throw ParameterError("bit vector code limited to 64 bits");
    std::uint64_t c = 0;
    for (auto b : bits_) c = (c << 1) | b;
    return c;
}

std::string BitVector::str() const {
    std::string s(bits_.size(), '0');
    for (std::size_t k = 0; k < bits_.size(); ++k) {
        if (bits_[k]) s[k] = '1';
    }
    return s;
}

std::vector<BitVector> all_bitstrings(std::size_t n) {
    if (n > 30) throw SizeError("refusing to enumerate {0,1}^n for n > 30", n);
    const std::uint64_t count = std::uint64_t{1} << n;
    std::vector<BitVector> out;
    out.reserve(count);
    for (std::uint64_t code = 0; code < count; ++code) out.push_back(BitVector::from_code(code, n));
    return out;
}

}  // namespace cellprobe
