#include "cellprobe/rational.hpp"

#include <cmath>
#include <cstdio>

namespace cellprobe {

double lg(const BigInt& z) {
    if (sgn(z) <= 0) return -INFINITY;
    long exp = 0;
    const double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
    return std::log2(mant) + static_cast<double>(exp);
}

std::string format_real(double v, int digits) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return buf;
}

}  // namespace cellprobe
