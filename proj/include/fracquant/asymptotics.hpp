#pragma once

// Quantization-dimension estimators and quantization-coefficient sequences
// along the F(n) ladder.  Everything exact until the final float export; logs
// are taken on mantissa/exponent pairs so deep rows cannot underflow.

#include "fracquant/construction.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace fracquant {

inline double kappa() { return 2.0 * std::log(2.0) / (std::log(75.0) - std::log(2.0)); }

// D(nu) per variant.
inline double d_nu(Variant v) {
    switch (v) {
        case Variant::nu1: return std::log(2.0) / std::log(3.0);
        case Variant::nu2: return std::log(2.0) / std::log(7.0);
        case Variant::nu3: return std::log(2.0) / std::log(5.0);
        case Variant::nu4: return kappa();
    }
    return 0.0;
}

// D(P) = max{kappa, D(nu)}.
inline double d_p(Variant v) { return std::max(kappa(), d_nu(v)); }

struct AsymptoticsRow {
    long n = 0;
    BigInt f;
    Scalar v;
    double dim_estimate = 0.0;  // 2 log F(n) / (-log V_F(n))
    double dim_slope = 0.0;     // two-point slope between rows n-1 and n
    double coeff = 0.0;         // F(n)^(2/d) V_F(n)
};

inline std::vector<AsymptoticsRow> coefficient_table(const CondensationSystem& sys, double d,
                                                     long n_max) {
    sys.require_paper_variant("coefficient_table");
    if (d <= 0.0) throw std::invalid_argument("coefficient_table: d > 0 required");
    const Regime regime = regime_of(*sys.variant());
    std::vector<AsymptoticsRow> rows;
    rows.reserve(static_cast<std::size_t>(n_max));
    double prev_lf = 0.0, prev_lv = 0.0;
    for (long n = 1; n <= n_max; ++n) {
        AsymptoticsRow row;
        row.n = n;
        row.f = f_of(regime, n);
        row.v = closed_V_F(sys, n);
        const double lf = big_log(row.f);
        const double lv = row.v.log();
        row.dim_estimate = 2.0 * lf / (-lv);
        row.dim_slope = (n == 1) ? row.dim_estimate : 2.0 * (lf - prev_lf) / (prev_lv - lv);
        row.coeff = std::exp((2.0 / d) * lf + lv);
        prev_lf = lf;
        prev_lv = lv;
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::vector<AsymptoticsRow> dimension_table(const CondensationSystem& sys, long n_max) {
    if (n_max < 2) throw std::invalid_argument("dimension_table: n_max >= 2 required");
    return coefficient_table(sys, d_p(*sys.variant()), n_max);
}

struct SubsequenceLimits {
    bool diverges = false;
    double odd_limit = 0.0;       // lim over n = 2k+1
    double even_limit = 0.0;      // lim over n = 2(k+1)
    double liminf_lower = 0.0;    // odd_limit / 9
    double limsup_upper = 0.0;    // 9 * odd_limit
    std::string odd_expr;
    std::string even_expr;
};

// The two distinct subsequential limits of F(n)^(2/beta) V_F(n) for nu1; for
// the other variants the natural-dimension coefficient diverges.
inline SubsequenceLimits subsequence_limits(const CondensationSystem& sys) {
    sys.require_paper_variant("subsequence_limits");
    SubsequenceLimits lim;
    if (sys.variant() != Variant::nu1) {
        lim.diverges = true;
        return lim;
    }
    const double beta = d_nu(Variant::nu1);
    const double pow3 = std::exp((2.0 / beta) * std::log(3.0));
    const double pow8 = std::exp((2.0 / beta) * std::log(8.0));
    const Scalar odd_rat(79, 7224);
    const Scalar even_rat = sys.nu.w * Scalar(1, 27) + Scalar(2, 75) * odd_rat;
    lim.odd_limit = pow3 * odd_rat.to_double();
    lim.even_limit = pow8 * even_rat.to_double();
    lim.liminf_lower = lim.odd_limit / 9.0;
    lim.limsup_upper = 9.0 * lim.odd_limit;
    lim.odd_expr = "3^(2/beta) * 79/7224";
    lim.even_expr = "8^(2/beta) * (W/27 + (2/75)(79/7224)) = 8^(2/beta) * " +
                    even_rat.to_string();
    return lim;
}

}  // namespace fracquant
