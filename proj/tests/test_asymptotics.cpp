#include "fracquant/asymptotics.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace fracquant;

namespace {

const CondensationSystem& system_of(Variant v) {
    static const CondensationSystem s1 = CondensationSystem::make(Variant::nu1);
    static const CondensationSystem s2 = CondensationSystem::make(Variant::nu2);
    static const CondensationSystem s3 = CondensationSystem::make(Variant::nu3);
    static const CondensationSystem s4 = CondensationSystem::make(Variant::nu4);
    switch (v) {
        case Variant::nu1: return s1;
        case Variant::nu2: return s2;
        case Variant::nu3: return s3;
        default: return s4;
    }
}

}  // namespace

TEST_CASE("dimension targets") {
    CHECK(kappa() == Catch::Approx(0.382496).margin(5e-7));
    CHECK(d_nu(Variant::nu1) == Catch::Approx(0.63093).margin(5e-6));
    CHECK(d_nu(Variant::nu2) == Catch::Approx(0.356207).margin(5e-7));
    CHECK(d_p(Variant::nu1) == d_nu(Variant::nu1));
    CHECK(d_p(Variant::nu2) == kappa());
    CHECK(d_p(Variant::nu3) == d_nu(Variant::nu3));
    CHECK(d_p(Variant::nu4) == kappa());
}

TEST_CASE("dimension table rows are well formed") {
    auto rows = dimension_table(system_of(Variant::nu3), 5);
    REQUIRE(rows.size() == 5);
    CHECK(rows[1].n == 2);
    CHECK(rows[1].dim_estimate > 0.0);
    CHECK(std::isfinite(rows[1].dim_estimate));
    // V_F(n) strictly decreasing
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].v < rows[i - 1].v);
    CHECK_THROWS_AS(dimension_table(system_of(Variant::nu3), 1), std::invalid_argument);
}

TEST_CASE("deep rows survive float underflow") {
    auto rows = dimension_table(system_of(Variant::nu1), 60);
    const auto& last = rows.back();
    CHECK(last.v.sign() > 0);
    CHECK(std::isfinite(last.dim_estimate));
    CHECK(last.dim_estimate > 0.55);
    CHECK(last.dim_estimate < 0.64);
    // V_F(60) is around 1e-86 for nu1; the log path must not lose it
    CHECK(last.v.log() < -190.0);
}

TEST_CASE("dimension estimates approach their targets") {
    struct Row {
        Variant v;
        long n;
        double tol_estimate;
        double tol_slope;
    };
    for (const auto& c : {Row{Variant::nu1, 25, 0.02, 0.02},
                          Row{Variant::nu2, 40, 0.05, 0.03},
                          Row{Variant::nu3, 40, 0.05, 0.03},
                          Row{Variant::nu4, 40, 0.05, 0.03}}) {
        auto rows = dimension_table(system_of(c.v), c.n);
        const auto& r = rows.back();
        CHECK(std::abs(r.dim_estimate - d_p(c.v)) < c.tol_estimate);
        CHECK(std::abs(r.dim_slope - d_p(c.v)) < c.tol_slope);
        // the global-ratio estimate drifts toward the target from above
        CHECK((rows[rows.size() - 1].dim_estimate < rows[rows.size() / 2].dim_estimate ||
               c.v == Variant::nu1));
    }
}

TEST_CASE("nu1 coefficient subsequences approach two distinct limits") {
    const auto& sys = system_of(Variant::nu1);
    const double beta = d_nu(Variant::nu1);
    auto rows = coefficient_table(sys, beta, 34);
    auto lim = subsequence_limits(sys);
    REQUIRE_FALSE(lim.diverges);
    const double odd = rows[31 - 1].coeff;   // n = 2k+1, k = 15
    const double even = rows[32 - 1].coeff;  // n = 2(k+1), k = 15
    CHECK(std::abs(odd - lim.odd_limit) / lim.odd_limit < 0.01);
    CHECK(std::abs(even - lim.even_limit) / lim.even_limit < 0.01);
    CHECK(std::abs(lim.odd_limit - lim.even_limit) > 0.005);  // genuinely distinct
    CHECK(lim.limsup_upper / lim.liminf_lower == Catch::Approx(81.0));
    // successive subsequence terms settle to within 0.5% by k = 20
    auto deep = coefficient_table(sys, beta, 44);
    CHECK(std::abs(deep[43 - 1].coeff - deep[41 - 1].coeff) / deep[41 - 1].coeff < 0.005);
    CHECK(std::abs(deep[44 - 1].coeff - deep[42 - 1].coeff) / deep[42 - 1].coeff < 0.005);
}

TEST_CASE("natural-dimension coefficients diverge for nu2/nu3/nu4") {
    for (Variant v : {Variant::nu2, Variant::nu3, Variant::nu4}) {
        const auto& sys = system_of(v);
        auto rows = coefficient_table(sys, d_p(v), 40);
        CHECK(rows[39].coeff > 10.0 * rows[4].coeff);
        CHECK(subsequence_limits(sys).diverges);
    }
}

TEST_CASE("coefficient growth for nu2 follows the (n+4) power law") {
    // with d = kappa the closed form gives coeff ~ c (n+3)^(2/kappa)
    auto rows = coefficient_table(system_of(Variant::nu2), kappa(), 40);
    const double p = 2.0 / kappa();
    const double ratio = rows[39].coeff / rows[19].coeff;
    const double predicted = std::pow(43.0 / 23.0, p);
    CHECK(ratio == Catch::Approx(predicted).epsilon(0.02));
}
