#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace radon {

/// Exact rational scalar used throughout the symbolic layer.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline bool is_zero(const Rat& r) { return sgn(r) == 0; }

inline double to_double(const Rat& r) { return r.get_d(); }

/// r^k for k >= 0.
inline Rat rat_pow(const Rat& r, int k) {
    Rat out = 1;
    Rat base = r;
    for (int e = k; e > 0; e >>= 1) {
        if (e & 1) out *= base;
        base *= base;
    }
    return out;
}

inline Rat rat_abs(const Rat& r) { return sgn(r) < 0 ? Rat(-r) : r; }

inline Rat factorial(int n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return Rat(f);
}

inline std::string rat_str(const Rat& r) { return r.get_str(); }

}  // namespace radon
