#pragma once

// The condensation system ({S1,S2}, (1/3,1/3,1/3), nu) on [0,1] with the four
// self-similar choices of nu, its symbolic point addresses, and the cylinder
// cells J_w, L_w, S_w T_t(L) that carry the measure's mass and moments.

#include "fracquant/exact.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracquant {

enum class Variant { nu1, nu2, nu3, nu4 };

inline const char* variant_name(Variant v) {
    switch (v) {
        case Variant::nu1: return "nu1";
        case Variant::nu2: return "nu2";
        case Variant::nu3: return "nu3";
        case Variant::nu4: return "nu4";
    }
    return "?";
}

inline std::optional<Variant> parse_variant(const std::string& s) {
    if (s == "nu1") return Variant::nu1;
    if (s == "nu2") return Variant::nu2;
    if (s == "nu3") return Variant::nu3;
    if (s == "nu4") return Variant::nu4;
    return std::nullopt;
}

// Requesting a nu-resolution the model has no closed form for (non-dyadic n
// outside nu1).
struct UnsupportedResolution : std::domain_error {
    using std::domain_error::domain_error;
};

struct SimilarityMap {
    Scalar ratio;
    Scalar offset;

    Scalar operator()(const Scalar& x) const { return ratio * x + offset; }

    // (this o g)(x) = this(g(x))
    SimilarityMap compose(const SimilarityMap& g) const {
        return {ratio * g.ratio, ratio * g.offset + offset};
    }

    static SimilarityMap identity() { return {Scalar(1), Scalar(0)}; }
};

struct NuSpec {
    std::optional<Variant> tag;  // nullopt for a custom system
    SimilarityMap t1, t2;
    Scalar mean;     // E(nu) = 1/2 for the built-in variants
    Scalar w;        // variance of nu
    Scalar r2;       // ratio^2, the variance scaling per T-letter
    Scalar r2_half;  // ratio^2 / 2, the per-split error factor

    const SimilarityMap& t(char letter) const { return letter == '1' ? t1 : t2; }

    static NuSpec from_maps(std::optional<Variant> tag, SimilarityMap t1, SimilarityMap t2);
    static NuSpec make(Variant v);
    // nu = (1/2) nu T1^-1 + (1/2) nu T2^-1 with T_i(x) = r x + c_i (1 - r),
    // c1 = 2/5, c2 = 3/5: the template every paper variant instantiates.
    static NuSpec custom(const Scalar& ratio);
};

// mean and variance of nu from the fixed-point equations of its two maps.
inline std::pair<Scalar, Scalar> nu_moments(const NuSpec& nu) {
    const Scalar r = nu.t1.ratio;
    const Scalar half(1, 2);
    Scalar mean = half * (nu.t1.offset + nu.t2.offset) / (Scalar(1) - r);
    Scalar second = (r * mean * (nu.t1.offset + nu.t2.offset) +
                     half * (nu.t1.offset * nu.t1.offset + nu.t2.offset * nu.t2.offset)) /
                    (Scalar(1) - r * r);
    return {mean, second - mean * mean};
}

inline NuSpec NuSpec::from_maps(std::optional<Variant> tag, SimilarityMap t1, SimilarityMap t2) {
    if (t1.ratio != t2.ratio) throw std::invalid_argument("NuSpec: maps must share one ratio");
    if (t1.ratio.sign() <= 0 || (Scalar(1, 2) - t1.ratio).sign() <= 0)
        throw std::invalid_argument("NuSpec: ratio must lie in (0, 1/2)");
    NuSpec nu;
    nu.tag = tag;
    nu.t1 = t1;
    nu.t2 = t2;
    nu.r2 = t1.ratio * t1.ratio;
    nu.r2_half = nu.r2 * Scalar(1, 2);
    auto [mean, w] = nu_moments(nu);
    nu.mean = mean;
    nu.w = w;
    // strong separation inside L = [2/5, 3/5]
    const Scalar l(2, 5), rr(3, 5);
    if ((t1(l) - l).sign() < 0 || (t2(rr) - rr).sign() > 0 || (t2(l) - t1(rr)).sign() <= 0)
        throw std::invalid_argument("NuSpec: maps must send L to disjoint subintervals of L");
    return nu;
}

inline NuSpec NuSpec::custom(const Scalar& ratio) {
    const Scalar one(1);
    SimilarityMap t1{ratio, Scalar(2, 5) * (one - ratio)};
    SimilarityMap t2{ratio, Scalar(3, 5) * (one - ratio)};
    return from_maps(std::nullopt, t1, t2);
}

inline NuSpec NuSpec::make(Variant v) {
    switch (v) {
        case Variant::nu1: {
            auto nu = custom(Scalar(1, 3));
            nu.tag = v;
            return nu;
        }
        case Variant::nu2: {
            auto nu = custom(Scalar(1, 7));
            nu.tag = v;
            return nu;
        }
        case Variant::nu3: {
            auto nu = custom(Scalar(1, 5));
            nu.tag = v;
            return nu;
        }
        case Variant::nu4: {
            auto nu = custom(Scalar::quad(BigRat(0), BigRat(1, 15)));  // sqrt6/15
            nu.tag = v;
            return nu;
        }
    }
    throw std::invalid_argument("NuSpec::make: unknown variant");
}

class CondensationSystem;

enum class Anchor { Half, TwoLeft, TwoRight, Explicit };

// Symbolic point S_w T_t(anchor); evaluation composes the maps exactly.
struct Address {
    std::string s_word;  // over {'1','2'}, applied outermost
    std::string t_word;  // over {'1','2'}
    Anchor anchor = Anchor::Half;
    Scalar explicit_value;

    Scalar eval(const CondensationSystem& sys) const;

    friend bool operator==(const Address& x, const Address& y) {
        return x.s_word == y.s_word && x.t_word == y.t_word && x.anchor == y.anchor &&
               (x.anchor != Anchor::Explicit || x.explicit_value == y.explicit_value);
    }
    // Canonical order used when a construction has to pick "the
    // lexicographically smallest" block elements.
    friend bool operator<(const Address& x, const Address& y) {
        if (x.s_word != y.s_word) return x.s_word < y.s_word;
        if (x.t_word != y.t_word) return x.t_word < y.t_word;
        return static_cast<int>(x.anchor) < static_cast<int>(y.anchor);
    }
};

class CondensationSystem {
public:
    SimilarityMap s1{Scalar(1, 5), Scalar(0)};
    SimilarityMap s2{Scalar(1, 5), Scalar(4, 5)};
    NuSpec nu;
    Scalar mean;       // E(P) = 1/2
    Scalar v;          // V(P)
    Scalar two_left;   // optimal two-means points for P
    Scalar two_right;
    Scalar v2;         // second quantization error V_2(P)

    static CondensationSystem make(Variant v) { return CondensationSystem(NuSpec::make(v)); }
    static CondensationSystem custom(NuSpec nu) { return CondensationSystem(std::move(nu)); }

    std::optional<Variant> variant() const { return nu.tag; }
    bool is_custom() const { return !nu.tag.has_value(); }

    const SimilarityMap& s(char letter) const { return letter == '1' ? s1 : s2; }

    SimilarityMap s_map(const std::string& word) const {
        SimilarityMap m = SimilarityMap::identity();
        for (char c : word) m = m.compose(s(c));
        return m;
    }
    SimilarityMap t_map(const std::string& word) const {
        SimilarityMap m = SimilarityMap::identity();
        for (char c : word) m = m.compose(nu.t(c));
        return m;
    }

    void require_paper_variant(const char* who) const {
        if (is_custom())
            throw std::invalid_argument(std::string(who) + ": not available for custom systems");
    }

private:
    explicit CondensationSystem(NuSpec n) : nu(std::move(n)) {
        auto [m, var] = p_moments_of(*this);
        mean = m;
        v = var;
        // Optimal two-means: by symmetry the boundary is 1/2, so each point is
        // the centroid of J_i together with the nearer half of L.
        const Scalar half(1, 2), third(1, 3), sixth(1, 6);
        two_left = Scalar(2) * (third * s1(half) + sixth * nu.t1(half));
        two_right = Scalar(2) * (third * s2(half) + sixth * nu.t2(half));
        const Scalar dj = s1(half) - two_left;
        const Scalar dn = nu.t1(half) - two_left;
        v2 = Scalar(2) * (third * (v * Scalar(1, 25) + dj * dj) +
                          sixth * (nu.r2 * nu.w + dn * dn));
    }

    static std::pair<Scalar, Scalar> p_moments_of(const CondensationSystem& sys) {
        // m = (4 + 5 E(nu))/13 and s = (8 m + 16 + 25 E(nu^2))/73 from the
        // one-step self-similarity of P.
        const Scalar nu_second = sys.nu.w + sys.nu.mean * sys.nu.mean;
        Scalar m = (Scalar(4) + Scalar(5) * sys.nu.mean) / Scalar(13);
        Scalar s = (Scalar(8) * m + Scalar(16) + Scalar(25) * nu_second) / Scalar(73);
        return {m, s - m * m};
    }
};

inline std::pair<Scalar, Scalar> p_moments(const CondensationSystem& sys) {
    return {sys.mean, sys.v};
}

inline Scalar Address::eval(const CondensationSystem& sys) const {
    Scalar x;
    switch (anchor) {
        case Anchor::Half: x = Scalar(1, 2); break;
        case Anchor::TwoLeft: x = sys.two_left; break;
        case Anchor::TwoRight: x = sys.two_right; break;
        case Anchor::Explicit: x = explicit_value; break;
    }
    for (auto it = t_word.rbegin(); it != t_word.rend(); ++it) x = sys.nu.t(*it)(x);
    for (auto it = s_word.rbegin(); it != s_word.rend(); ++it) x = sys.s(*it)(x);
    return x;
}

inline Scalar eval_point(const Address& addr, const CondensationSystem& sys) {
    return addr.eval(sys);
}

// ---------------------------------------------------------------------------
// Cylinder cells.

enum class CellKind { J, L, Nu };

// A cell is an affine image of a template interval: J cells are copies of
// ([0,1], P), L/Nu cells are copies of (L, nu).  mass is relative to the
// measure the root cell was built for.
struct CylinderCell {
    CellKind kind = CellKind::J;
    std::string s_word;
    std::string t_word;
    SimilarityMap map = SimilarityMap::identity();
    Scalar mass{1};

    int depth() const { return static_cast<int>(s_word.size() + t_word.size()); }

    Scalar lo() const { return kind == CellKind::J ? map(Scalar(0)) : map(Scalar(2, 5)); }
    Scalar hi() const { return kind == CellKind::J ? map(Scalar(1)) : map(Scalar(3, 5)); }
    Scalar centroid() const { return map(Scalar(1, 2)); }

    Scalar var_term(const CondensationSystem& sys) const {
        const Scalar s2 = map.ratio * map.ratio;
        return kind == CellKind::J ? sys.v * s2 : sys.nu.w * s2;
    }

    static CylinderCell root_p() { return CylinderCell{}; }
    static CylinderCell root_nu() {
        CylinderCell c;
        c.kind = CellKind::L;
        return c;
    }

    std::vector<CylinderCell> children(const CondensationSystem& sys) const {
        std::vector<CylinderCell> out;
        out.reserve(kind == CellKind::J ? 3 : 2);
        const Scalar third(1, 3), half(1, 2);
        if (kind == CellKind::J) {
            for (char c : {'1', '2'}) {
                CylinderCell j;
                j.kind = CellKind::J;
                j.s_word = s_word + c;
                j.map = map.compose(sys.s(c));
                j.mass = mass * third;
                out.push_back(std::move(j));
            }
            CylinderCell l;
            l.kind = CellKind::L;
            l.s_word = s_word;
            l.map = map;  // L_w = S_w(L)
            l.mass = mass * third;
            out.insert(out.begin() + 1, std::move(l));
        } else {
            for (char c : {'1', '2'}) {
                CylinderCell n;
                n.kind = CellKind::Nu;
                n.s_word = s_word;
                n.t_word = t_word + c;
                n.map = map.compose(sys.nu.t(c));
                n.mass = mass * half;
                out.push_back(std::move(n));
            }
        }
        return out;
    }
};

// Second moment of the cell about x0: mass * (scaled template variance +
// squared centroid offset); this is Eq.-(4)/(40)-style exact evaluation.
inline Scalar cell_second_moment_about(const CylinderCell& cell, const Scalar& x0,
                                       const CondensationSystem& sys) {
    const Scalar d = cell.centroid() - x0;
    return cell.mass * (cell.var_term(sys) + d * d);
}

// ---------------------------------------------------------------------------
// Optimal quantization of nu itself.

// nth quantization error of nu.  nu1 admits every n; the other variants (and
// custom systems) only expose the dyadic resolutions.
inline Scalar nu_optimal_error(unsigned long n, const NuSpec& nu) {
    if (n < 1) throw std::invalid_argument("nu_optimal_error: n >= 1 required");
    if (n == 1) return nu.w;
    unsigned long ell = 0;
    while ((2ull << ell) <= n) ++ell;  // 2^ell <= n < 2^(ell+1)
    const bool dyadic = (n == (1ull << ell));
    if (nu.tag == Variant::nu1) {
        // (1/2^l) W [ (2^(l+1) - n) r2^l + (n - 2^l) r2^(l+1) ]
        const Scalar unsplit(static_cast<long long>((2ull << ell) - n));
        const Scalar split(static_cast<long long>(n - (1ull << ell)));
        return Scalar(BigRat(BigInt(1), BigInt(1) << ell)) * nu.w *
               (unsplit * nu.r2.pow(static_cast<long long>(ell)) +
                split * nu.r2.pow(static_cast<long long>(ell) + 1));
    }
    if (!dyadic)
        throw UnsupportedResolution("nu_optimal_error: only dyadic n is known for this variant");
    return nu.r2.pow(static_cast<long long>(ell)) * nu.w;
}

// Addresses of a canonical optimal set of n-means for nu (t-words only).
inline std::vector<Address> alpha_nu_addresses(unsigned long n, const NuSpec& nu) {
    if (n < 1) throw std::invalid_argument("alpha_nu_addresses: n >= 1 required");
    std::vector<std::string> words{""};
    auto refine = [](std::vector<std::string>& ws) {
        std::vector<std::string> next;
        next.reserve(ws.size() * 2);
        for (auto& w : ws) {
            next.push_back(w + '1');
            next.push_back(w + '2');
        }
        ws = std::move(next);
    };
    unsigned long ell = 0;
    while ((1ull << (ell + 1)) <= n) ++ell;
    for (unsigned long i = 0; i < ell; ++i) refine(words);
    unsigned long extra = n - (1ull << ell);
    if (extra != 0 && nu.tag != Variant::nu1)
        throw UnsupportedResolution("alpha_nu_addresses: only dyadic n is known for this variant");
    std::vector<Address> out;
    out.reserve(n);
    // Split the lexicographically first `extra` level-ell cells one step further.
    for (unsigned long i = 0; i < words.size(); ++i) {
        if (i < extra) {
            out.push_back(Address{"", words[i] + '1', Anchor::Half, {}});
            out.push_back(Address{"", words[i] + '2', Anchor::Half, {}});
        } else {
            out.push_back(Address{"", words[i], Anchor::Half, {}});
        }
    }
    return out;
}

}  // namespace fracquant
