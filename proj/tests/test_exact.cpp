#include "fracquant/exact.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using fracquant::BigInt;
using fracquant::BigRat;
using fracquant::Scalar;

namespace {

std::mt19937_64 rng(20240611);

Scalar random_rational() {
    std::uniform_int_distribution<long long> num(-400, 400);
    std::uniform_int_distribution<long long> den(1, 400);
    return Scalar(num(rng), den(rng));
}

Scalar random_quad() {
    return Scalar(random_rational().rat_part(), random_rational().rat_part());
}

}  // namespace

TEST_CASE("field arithmetic on rationals") {
    CHECK(Scalar(1, 3) * Scalar(1, 5) * Scalar(1, 5) == Scalar(1, 75));
    CHECK(Scalar(2, 75).pow(2) == Scalar(4, 5625));
    CHECK(Scalar(18).pow(3) / Scalar(75).pow(2) == Scalar(5832, 5625));
    CHECK(Scalar(7, 3).pow(0) == Scalar(1));
    CHECK(Scalar(2, 75).pow(-1) == Scalar(75, 2));
    CHECK_THROWS_AS(Scalar(1) / Scalar(0), std::domain_error);
    CHECK_THROWS_AS(Scalar(0).pow(-2), std::domain_error);
}

TEST_CASE("quadratic field values") {
    const Scalar sqrt6 = Scalar::quad(BigRat(0), BigRat(1));
    CHECK((Scalar(1) + sqrt6) * (Scalar(1) - sqrt6) == Scalar(-5));
    CHECK(sqrt6 * sqrt6 == Scalar(6));

    const Scalar w = Scalar::quad(BigRat(77, 7300), BigRat(-10, 7300));
    CHECK(w * Scalar(3) == Scalar::quad(BigRat(231, 7300), BigRat(-30, 7300)));
    CHECK(w.sign() == +1);  // 77^2 = 5929 > 600 = 6*100

    CHECK((Scalar(90) + sqrt6 - Scalar(90)).sign() == +1);
    CHECK(Scalar(0).sign() == 0);
}

TEST_CASE("sign of mixed quadratics compares a^2 with 6 b^2") {
    // 10 - 4 sqrt6: 100 vs 96 -> positive
    CHECK(Scalar::quad(BigRat(10), BigRat(-4)).sign() == +1);
    // 9 - 4 sqrt6: 81 vs 96 -> negative
    CHECK(Scalar::quad(BigRat(9), BigRat(-4)).sign() == -1);
    // -10 + 4 sqrt6 mirrors
    CHECK(Scalar::quad(BigRat(-10), BigRat(4)).sign() == -1);
    CHECK(Scalar::quad(BigRat(-9), BigRat(4)).sign() == +1);
}

TEST_CASE("float export matches published decimals") {
    CHECK(Scalar(32929, 1182600).to_double() == Catch::Approx(0.0278446).epsilon(1e-5));
    CHECK(Scalar(32929, 1182600).to_decimal(6) == "0.0278446");
    const Scalar v2_nu4 = Scalar::quad(BigRat(4167521, 179853750), BigRat(155430, 179853750));
    CHECK(v2_nu4.to_double() == Catch::Approx(0.0252886).epsilon(1e-5));
    CHECK(Scalar(0).to_double() == 0.0);
    CHECK(Scalar(0).to_decimal() == "0");
    CHECK(Scalar(-1, 8).to_decimal(3) == "-0.125");
}

TEST_CASE("decimal export of extreme magnitudes") {
    const Scalar tiny = Scalar(2, 75).pow(60);
    CHECK(tiny.sign() == +1);
    const double lg = tiny.log() / std::log(10.0);
    CHECK(lg == Catch::Approx(60.0 * std::log10(2.0 / 75.0)).margin(1e-9));
    CHECK(tiny.to_decimal(5).find("e-") != std::string::npos);
    const Scalar huge = Scalar(18).pow(123);
    CHECK(huge.log() == Catch::Approx(123.0 * std::log(18.0)).epsilon(1e-12));
}

TEST_CASE("canonical form is maintained under arithmetic") {
    for (int i = 0; i < 300; ++i) {
        Scalar x = random_rational();
        Scalar y = random_rational();
        Scalar ops[] = {x + y, x - y, x * y};
        for (const Scalar& z : ops) {
            CHECK(z.den() > 0);
            CHECK(boost::multiprecision::gcd(boost::multiprecision::abs(z.num()), z.den()) == 1);
        }
    }
}

TEST_CASE("field laws on random triples") {
    for (int i = 0; i < 200; ++i) {
        Scalar x = random_quad(), y = random_quad(), z = random_quad();
        CHECK((x + y) + z == x + (y + z));
        CHECK((x * y) * z == x * (y * z));
        CHECK(x * (y + z) == x * y + x * z);
        if (!y.is_zero()) CHECK((x / y) * y == x);
    }
}

TEST_CASE("sign agrees with high-precision float") {
    for (int i = 0; i < 300; ++i) {
        Scalar x = random_quad();
        const double d = x.to_double(256);
        if (std::abs(d) > 1e-60) CHECK(x.sign() == (d > 0 ? 1 : (d < 0 ? -1 : 0)));
    }
}

TEST_CASE("power law pow(m+n) == pow(m) pow(n)") {
    std::uniform_int_distribution<int> small(0, 6);
    for (int i = 0; i < 100; ++i) {
        Scalar x = random_quad();
        const int m = small(rng), n = small(rng);
        CHECK(x.pow(m + n) == x.pow(m) * x.pow(n));
    }
}

TEST_CASE("mantissa and floor helpers") {
    CHECK(Scalar(7, 2).floor() == 3);
    CHECK(Scalar(-7, 2).floor() == -4);
    CHECK(Scalar::quad(BigRat(0), BigRat(1)).floor() == 2);  // sqrt6 = 2.449...
    CHECK(Scalar::quad(BigRat(0), BigRat(-1)).floor() == -3);
    auto [m, e] = Scalar(1, 3).mantissa_exp(64);
    const double back = std::ldexp(m.convert_to<double>(), static_cast<int>(e));
    CHECK(back == Catch::Approx(1.0 / 3.0).epsilon(1e-15));
}
