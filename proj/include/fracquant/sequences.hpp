#pragma once

// The canonical sequences a(n) and F(n).  The nu1 system follows the
// "crossing" regime (a alternates +1/+2 steps); nu2-nu4 share the "plain"
// regime a(n) = n-1 with a(1) = 1.

#include "fracquant/exact.hpp"
#include "fracquant/model.hpp"

#include <stdexcept>
#include <vector>

namespace fracquant {

enum class Regime { crossing, plain };

inline Regime regime_of(Variant v) {
    return v == Variant::nu1 ? Regime::crossing : Regime::plain;
}

inline long a_of(Regime regime, long n) {
    if (n < 1) throw std::invalid_argument("a_of: n >= 1 required");
    if (regime == Regime::crossing) {
        // a(2k+1) = 3k, a(2k) = 3k-2; equivalently (6n + (-1)^(n+1) - 7)/4.
        return (n % 2 == 1) ? 3 * ((n - 1) / 2) : 3 * (n / 2) - 2;
    }
    return n == 1 ? 1 : n - 1;
}

inline BigInt f_of(Regime regime, long n) {
    if (n < 1) throw std::invalid_argument("f_of: n >= 1 required");
    if (regime == Regime::plain) return BigInt(n + 3) << (n - 1);  // (n+3) 2^(n-1)
    if (n == 1) return 4;
    // F(2) = 2^2 + 2 F(1), F(n) = 2^a(n) + 2 F(n-1) for n >= 3.
    BigInt f = 4;
    for (long i = 2; i <= n; ++i)
        f = (BigInt(1) << (i == 2 ? 2 : a_of(Regime::crossing, i))) + 2 * f;
    return f;
}

// Resolution of the nu block sitting at S-depth n - ell inside alpha_F(n).
// In the crossing regime the two shallowest blocks use exponents 1 and 2
// (not a(1) = 0, a(2) = 1); the plain regime uses a(ell) throughout.
inline long slot_exponent(Regime regime, long ell) {
    if (ell < 1) throw std::invalid_argument("slot_exponent: ell >= 1 required");
    if (regime == Regime::crossing) {
        if (ell <= 2) return ell;
        return a_of(regime, ell);
    }
    return a_of(regime, ell);
}

}  // namespace fracquant
