#pragma once

// Exact arithmetic kernel: arbitrary-precision rationals extended by sqrt(6).
// Every value is a + b*sqrt(6) with rational a, b; b == 0 is the plain
// rational case.  The representation is unique because sqrt(6) is irrational,
// so equality and ordering are decidable without any floating point.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace fracquant {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline BigInt big_pow(BigInt base, unsigned long k) {
    BigInt r{1};
    while (k) {
        if (k & 1) r *= base;
        base *= base;
        k >>= 1;
    }
    return r;
}

inline BigInt binomial(unsigned long n, unsigned long k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r{1};
    for (unsigned long i = 1; i <= k; ++i) {
        r *= BigInt(n - k + i);
        r /= BigInt(i);
    }
    return r;
}

// x > 0 decomposed as m * 2^e with m in [1/2, 1).
inline std::pair<double, long> int_mant_exp(const BigInt& x) {
    if (x <= 0) throw std::domain_error("int_mant_exp: positive input required");
    const long b = static_cast<long>(boost::multiprecision::msb(x));
    BigInt top = (b >= 63) ? BigInt(x >> (b - 63)) : BigInt(x << (63 - b));
    const double m = top.convert_to<double>() * std::ldexp(1.0, -64);
    return {m, b + 1};
}

inline double big_log(const BigInt& x) {
    auto [m, e] = int_mant_exp(x);
    return std::log(m) + static_cast<double>(e) * std::log(2.0);
}

// Cross-multiplied rational comparison; boost's own operator< runs a
// continued-fraction loop that is far slower on big integers.
inline int rat_cmp(const BigRat& x, const BigRat& y) {
    const auto& xr = x.backend().data();
    const auto& yr = y.backend().data();
    if (xr.denominator() == yr.denominator()) return xr.numerator().compare(yr.numerator());
    BigInt l = xr.numerator() * yr.denominator();
    BigInt r = yr.numerator() * xr.denominator();
    return l.compare(r);
}

class Scalar {
public:
    Scalar() = default;
    Scalar(long long n) : a_(n) {}
    Scalar(long long num, long long den) : a_(BigRat(BigInt(num), BigInt(den))) {}
    explicit Scalar(BigRat q) : a_(std::move(q)) {}
    Scalar(BigRat a, BigRat b) : a_(std::move(a)), b_(std::move(b)) {}

    static Scalar rational(BigInt num, BigInt den) { return Scalar(BigRat(std::move(num), std::move(den))); }
    // a + b*sqrt(6)
    static Scalar quad(BigRat a, BigRat b) { return Scalar(std::move(a), std::move(b)); }

    bool is_rational() const { return b_.is_zero(); }
    bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
    const BigRat& rat_part() const { return a_; }
    const BigRat& sqrt6_coeff() const { return b_; }

    // Numerator/denominator of the rational case (throws on a quadratic value).
    BigInt num() const {
        require_rational();
        return boost::multiprecision::numerator(a_);
    }
    BigInt den() const {
        require_rational();
        return boost::multiprecision::denominator(a_);
    }

    friend Scalar operator+(const Scalar& x, const Scalar& y) { return Scalar(x.a_ + y.a_, x.b_ + y.b_); }
    friend Scalar operator-(const Scalar& x, const Scalar& y) { return Scalar(x.a_ - y.a_, x.b_ - y.b_); }
    friend Scalar operator-(const Scalar& x) { return Scalar(-x.a_, -x.b_); }
    friend Scalar operator*(const Scalar& x, const Scalar& y) {
        return Scalar(x.a_ * y.a_ + 6 * x.b_ * y.b_, x.a_ * y.b_ + x.b_ * y.a_);
    }
    friend Scalar operator/(const Scalar& x, const Scalar& y) { return x * y.inverse(); }

    Scalar& operator+=(const Scalar& y) { a_ += y.a_; b_ += y.b_; return *this; }
    Scalar& operator-=(const Scalar& y) { a_ -= y.a_; b_ -= y.b_; return *this; }
    Scalar& operator*=(const Scalar& y) { *this = *this * y; return *this; }
    Scalar& operator/=(const Scalar& y) { *this = *this / y; return *this; }

    Scalar inverse() const {
        if (is_zero()) throw std::domain_error("Scalar: division by zero");
        // 1/(a + b*sqrt6) = (a - b*sqrt6) / (a^2 - 6 b^2); the norm vanishes
        // only at zero because sqrt6 is irrational.
        BigRat norm = a_ * a_ - 6 * b_ * b_;
        return Scalar(a_ / norm, -b_ / norm);
    }

    // Exact sign: for a + b*sqrt6 with mixed signs compare a^2 with 6 b^2.
    int sign() const {
        const int sa = a_.sign();
        const int sb = b_.sign();
        if (sb == 0) return sa;
        if (sa == 0) return sb;
        if (sa == sb) return sa;
        const BigRat norm = a_ * a_ - 6 * b_ * b_;
        const int big = norm.sign();
        if (big == 0) return 0;  // unreachable: would make sqrt6 rational
        return big > 0 ? sa : sb;
    }

    friend bool operator==(const Scalar& x, const Scalar& y) { return x.a_ == y.a_ && x.b_ == y.b_; }
    friend bool operator!=(const Scalar& x, const Scalar& y) { return !(x == y); }
    // Comparisons with equal sqrt6 parts reduce to one cross multiplication.
    friend int compare(const Scalar& x, const Scalar& y) {
        if (x.b_ == y.b_) return rat_cmp(x.a_, y.a_);
        return (x - y).sign();
    }
    friend bool operator<(const Scalar& x, const Scalar& y) { return compare(x, y) < 0; }
    friend bool operator>(const Scalar& x, const Scalar& y) { return compare(x, y) > 0; }
    friend bool operator<=(const Scalar& x, const Scalar& y) { return compare(x, y) <= 0; }
    friend bool operator>=(const Scalar& x, const Scalar& y) { return compare(x, y) >= 0; }

    Scalar pow(long long k) const {
        if (k < 0) {
            if (is_zero()) throw std::domain_error("Scalar: 0^negative");
            return inverse().pow(-k);
        }
        Scalar r{1};
        Scalar base = *this;
        unsigned long long e = static_cast<unsigned long long>(k);
        while (e) {
            if (e & 1) r *= base;
            base *= base;
            e >>= 1;
        }
        return r;
    }

    friend Scalar abs(const Scalar& x) { return x.sign() < 0 ? -x : x; }

    // floor(value * 2^shift), exact for both branches of the union.  shift may
    // be negative.
    BigInt scaled_floor(long shift) const {
        BigInt fa = rat_floor(shift_rat(a_, shift));
        if (b_.is_zero()) return fa;
        BigInt fb = sqrt6_floor(shift_rat(b_, shift));
        // floor(u) + floor(v) is floor(u+v) or one less.
        BigInt cand = fa + fb + 1;
        Scalar scaled = *this * Scalar(pow2_rat(shift));
        if ((scaled - Scalar(BigRat(cand))).sign() >= 0) return cand;
        return cand - 1;
    }

    BigInt floor() const { return scaled_floor(0); }

    // value ~ M * 2^e with 2^(bits-1) <= |M| < 2^bits; {0,0} for zero.
    std::pair<BigInt, long> mantissa_exp(unsigned bits = 128) const {
        if (is_zero()) return {BigInt(0), 0};
        const Scalar mag = abs(*this);
        long s = static_cast<long>(bits) - approx_exp2(mag);
        for (int guard = 0; guard < 128; ++guard) {
            BigInt m = mag.scaled_floor(s);
            if (m <= 0) {
                s += static_cast<long>(bits);
                continue;
            }
            const long w = static_cast<long>(boost::multiprecision::msb(m)) + 1;
            if (w == static_cast<long>(bits)) {
                if (sign() < 0) m = -m;
                return {m, -s};
            }
            s += static_cast<long>(bits) - w;
        }
        throw std::runtime_error("Scalar::mantissa_exp failed to normalize");
    }

    double to_double(unsigned bits = 128) const {
        if (is_zero()) return 0.0;
        auto [m, e] = mantissa_exp(bits > 64 ? 64 : bits);
        return std::ldexp(m.convert_to<double>(), static_cast<int>(e));
    }

    // Natural log of a positive value, safe far outside double range.
    double log() const {
        if (sign() <= 0) throw std::domain_error("Scalar::log: positive value required");
        auto [m, e] = mantissa_exp(64);
        return std::log(m.convert_to<double>()) + static_cast<double>(e) * std::log(2.0);
    }

    std::string to_string() const {
        if (b_.is_zero()) return rat_str(a_);
        std::string s = rat_str(a_);
        s += (b_.sign() < 0) ? " - " : " + ";
        BigRat babs = b_.sign() < 0 ? BigRat(-b_) : b_;
        s += rat_str(babs);
        s += "*sqrt6";
        return s;
    }

    std::string to_decimal(int sig_digits = 10) const;

private:
    BigRat a_{0};
    BigRat b_{0};

    void require_rational() const {
        if (!is_rational()) throw std::domain_error("Scalar: rational value required");
    }

    static BigRat pow2_rat(long shift) {
        if (shift >= 0) return BigRat(BigInt(1) << shift);
        return BigRat(BigInt(1), BigInt(1) << (-shift));
    }

    static BigRat shift_rat(const BigRat& q, long shift) { return q * pow2_rat(shift); }

    static BigInt rat_floor(const BigRat& q) {
        BigInt n = boost::multiprecision::numerator(q);
        BigInt d = boost::multiprecision::denominator(q);
        BigInt f = n / d;
        if (n.sign() < 0 && f * d != n) --f;
        return f;
    }

    // floor(q * sqrt6) for rational q; exact via integer square roots.
    static BigInt sqrt6_floor(const BigRat& q) {
        const int s = q.sign();
        if (s == 0) return 0;
        BigInt p = boost::multiprecision::numerator(q);
        BigInt d = boost::multiprecision::denominator(q);
        if (s < 0) p = -p;
        // |q|*sqrt6 = sqrt(6 p^2 / d^2); floor(sqrt(t)) = isqrt(floor(t)).
        BigInt t = (6 * p * p) / (d * d);
        BigInt r = boost::multiprecision::sqrt(t);
        if (s > 0) return r;
        return -r - 1;  // q*sqrt6 is never an integer for q != 0
    }

    // Rough exponent of |value|; only used to seed mantissa_exp.
    static long approx_exp2(const Scalar& mag) {
        auto part = [](const BigRat& q) -> std::pair<double, long> {
            if (q.is_zero()) return {0.0, 0};
            BigInt n = boost::multiprecision::numerator(q);
            if (n.sign() < 0) n = -n;
            auto [mn, en] = int_mant_exp(n);
            auto [md, ed] = int_mant_exp(boost::multiprecision::denominator(q));
            return {mn / md * (q.sign() < 0 ? -1.0 : 1.0), en - ed};
        };
        auto [ma, ea] = part(mag.a_);
        auto [mb, eb] = part(mag.b_);
        mb *= 2.4494897427831781;
        double m;
        long e;
        if (mag.a_.is_zero()) { m = mb; e = eb; }
        else if (mag.b_.is_zero()) { m = ma; e = ea; }
        else if (ea >= eb) {
            e = ea;
            m = ma + ((ea - eb) > 200 ? 0.0 : mb * std::ldexp(1.0, static_cast<int>(eb - ea)));
        } else {
            e = eb;
            m = mb + ((eb - ea) > 200 ? 0.0 : ma * std::ldexp(1.0, static_cast<int>(ea - eb)));
        }
        if (m == 0.0) return 0;  // cancellation; caller loops to recover
        int add;
        std::frexp(m, &add);
        return e + add;
    }

    static std::string rat_str(const BigRat& q) {
        BigInt n = boost::multiprecision::numerator(q);
        BigInt d = boost::multiprecision::denominator(q);
        if (d == 1) return n.str();
        return n.str() + "/" + d.str();
    }
};

inline std::string Scalar::to_decimal(int sig_digits) const {
    if (sig_digits < 1) sig_digits = 1;
    if (is_zero()) return "0";
    const bool neg = sign() < 0;
    const Scalar y = neg ? -*this : *this;
    // Decimal exponent, estimated then fixed up exactly.
    long e10 = static_cast<long>(std::floor(y.log() / std::log(10.0)));
    auto pow10 = [](long k) {
        if (k >= 0) return Scalar(BigRat(big_pow(10, static_cast<unsigned long>(k))));
        return Scalar(BigRat(BigInt(1), big_pow(10, static_cast<unsigned long>(-k))));
    };
    while (y < pow10(e10)) --e10;
    while (y >= pow10(e10 + 1)) ++e10;
    // Round to sig_digits digits.
    Scalar scaled = y * pow10(sig_digits - 1 - e10) + Scalar(1, 2);
    BigInt digits = scaled.floor();
    if (digits == big_pow(10, static_cast<unsigned long>(sig_digits))) {
        digits /= 10;
        ++e10;
    }
    std::string ds = digits.str();
    auto strip = [](std::string s) {
        if (s.find('.') == std::string::npos) return s;
        while (s.back() == '0') s.pop_back();
        if (s.back() == '.') s.pop_back();
        return s;
    };
    std::string out;
    if (e10 >= -4 && e10 < sig_digits + 6) {
        if (e10 >= sig_digits - 1) {
            out = ds + std::string(static_cast<size_t>(e10 - sig_digits + 1), '0');
        } else if (e10 >= 0) {
            out = strip(ds.substr(0, static_cast<size_t>(e10 + 1)) + "." +
                        ds.substr(static_cast<size_t>(e10 + 1)));
        } else {
            out = strip("0." + std::string(static_cast<size_t>(-e10 - 1), '0') + ds);
        }
    } else {
        out = ds.substr(0, 1);
        if (ds.size() > 1) out += "." + ds.substr(1);
        out = strip(out) + "e" + std::to_string(e10);
    }
    return neg ? "-" + out : out;
}

}  // namespace fracquant
