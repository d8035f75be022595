#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace cellprobe {

// Exact probabilities and counts.
using Rational = mpq_class;
using BigInt = mpz_class;

inline Rational make_rational(const BigInt& num, const BigInt& den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline Rational make_rational(std::uint64_t num, std::uint64_t den) {
    return make_rational(BigInt(std::to_string(num)), BigInt(std::to_string(den)));
}

inline BigInt big(std::uint64_t v) { return BigInt(std::to_string(v)); }

inline double to_double(const Rational& r) { return r.get_d(); }

// "a/b" (or "a" when the denominator is one).
inline std::string to_string(const Rational& r) { return r.get_str(); }
inline std::string to_string(const BigInt& z) { return z.get_str(); }

// Exact rational value of a finite double (every double is a dyadic rational).
inline Rational exact_rational(double v) { return Rational(v); }

// 2^k as an exact integer.
inline BigInt pow2(unsigned long k) {
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), 2, k);
    return r;
}

inline BigInt ipow(std::uint64_t base, unsigned long exp) {
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
    return r;
}

inline BigInt binomial(unsigned long n, unsigned long k) {
    BigInt r;
    if (k > n) return r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

// Base-2 logarithm of a (possibly huge) positive integer, in reals.
double lg(const BigInt& z);

// Decimal rendering with a fixed number of significant digits, used by the
// report writers so output is byte-stable.
std::string format_real(double v, int digits = 12);

}  // namespace cellprobe
