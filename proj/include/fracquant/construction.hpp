#pragma once

// Optimal-set construction: the family decomposition of alpha_F(n), the order
// > on SF*(n) realized by exact per-element error comparison, the greedy
// splitting ladder between consecutive F(n), and an exact block dynamic
// program over the self-similar decomposition V_n = (1/75)(V_{n1} + V_{n2}) +
// (1/3) V_{nL}(nu) that produces minimal-error sets for arbitrary m.
//
// The two routes intentionally coexist.  The splitting ladder is the closed
// procedure (it also counts the sets it can produce at a given m); the block
// DP searches all admissible block sizes and is what `build_alpha_m` emits.
// They agree at every F(n) and for most m; where they differ the DP set has
// strictly smaller distortion (first at m = 7), which the k-means oracle
// confirms.  README discusses the discrepancy.

#include "fracquant/distortion.hpp"
#include "fracquant/sequences.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracquant {

enum class FamilyKind { NuBlock, PCenters, TwoMeans };

// A block of quantizer points sharing one per-element error: the unit on
// which the order > and the splitting ladder operate.
//  - NuBlock{d,e}:  { S_w T_t(1/2) : |w| = d, |t| = e }
//  - PCenters{d}:   { S_w(1/2) : |w| = d }
//  - TwoMeans{d}:   { S_w(two_left), S_w(two_right) : |w| = d }
struct Family {
    FamilyKind kind = FamilyKind::NuBlock;
    int s_depth = 0;
    int nu_exp = 0;  // NuBlock only
    bool second_gen = false;
    std::string label;
    bool tied_with_next = false;

    BigInt cardinality() const {
        switch (kind) {
            case FamilyKind::NuBlock: return BigInt(1) << (s_depth + nu_exp);
            case FamilyKind::PCenters: return BigInt(1) << s_depth;
            case FamilyKind::TwoMeans: return BigInt(1) << (s_depth + 1);
        }
        return 0;
    }

    Scalar per_element_error(const CondensationSystem& sys) const {
        const Scalar scale = Scalar(1, 75).pow(s_depth);
        switch (kind) {
            case FamilyKind::NuBlock:
                return sys.nu.w * Scalar(1, 3) * scale * sys.nu.r2_half.pow(nu_exp);
            case FamilyKind::PCenters:
                return sys.v * scale;
            case FamilyKind::TwoMeans:
                return sys.v2 * Scalar(1, 2) * scale;
        }
        return Scalar(0);
    }

    // Combined error of the two points that replace one element when the
    // family is split.
    Scalar pair_error(const CondensationSystem& sys) const {
        const Scalar scale = Scalar(1, 75).pow(s_depth);
        switch (kind) {
            case FamilyKind::NuBlock:
                return Scalar(2) * sys.nu.w * Scalar(1, 3) * scale * sys.nu.r2_half.pow(nu_exp + 1);
            case FamilyKind::PCenters:
                return sys.v2 * scale;
            case FamilyKind::TwoMeans:
                return sys.v * scale * Scalar(1, 75) +
                       sys.nu.w * Scalar(1, 3) * scale * sys.nu.r2_half;
        }
        return Scalar(0);
    }

    bool same_block(const Family& o) const {
        return kind == o.kind && s_depth == o.s_depth &&
               (kind != FamilyKind::NuBlock || nu_exp == o.nu_exp);
    }
};

// The splitting map: a nu block refines one letter deeper; the P-centers
// become the scaled two-means pairs; a two-means family resolves into the
// next level's P-centers plus a fresh nu block.
inline std::vector<Family> split_family(const Family& f) {
    switch (f.kind) {
        case FamilyKind::NuBlock: {
            Family g = f;
            g.nu_exp += 1;
            g.second_gen = true;
            g.label.clear();
            return {g};
        }
        case FamilyKind::PCenters:
            return {Family{FamilyKind::TwoMeans, f.s_depth, 0, true, "", false}};
        case FamilyKind::TwoMeans:
            return {Family{FamilyKind::PCenters, f.s_depth + 1, 0, false, "", false},
                    Family{FamilyKind::NuBlock, f.s_depth, 1, false, "", false}};
    }
    return {};
}

inline std::string family_label(Regime regime, long n, const Family& f) {
    auto wrap2 = [&](const std::string& inner, bool g2) {
        return g2 ? "S^(2)(" + inner + ")" : "S(" + inner + ")";
    };
    switch (f.kind) {
        case FamilyKind::PCenters: return "S(0)";
        case FamilyKind::TwoMeans: return "S^(2)(0)";
        case FamilyKind::NuBlock: {
            const long slot = n - f.s_depth;
            if (regime == Regime::crossing && slot >= 3)
                return wrap2("a(" + std::to_string(slot) + ")", f.second_gen);
            return wrap2(std::to_string(slot), f.second_gen);
        }
    }
    return "?";
}

// Families of alpha_F(n): P-centers at depth n plus one nu block per slot.
inline std::vector<Family> alpha_F_families(const CondensationSystem& sys, long n) {
    sys.require_paper_variant("alpha_F_families");
    if (n < 1) throw std::invalid_argument("alpha_F_families: n >= 1 required");
    const Regime regime = regime_of(*sys.variant());
    std::vector<Family> fams;
    fams.reserve(static_cast<std::size_t>(n) + 1);
    for (long ell = n; ell >= 1; --ell) {
        Family f;
        f.kind = FamilyKind::NuBlock;
        f.s_depth = static_cast<int>(n - ell);
        f.nu_exp = static_cast<int>(slot_exponent(regime, ell));
        f.label = family_label(regime, n, f);
        fams.push_back(f);
    }
    Family pc;
    pc.kind = FamilyKind::PCenters;
    pc.s_depth = static_cast<int>(n);
    pc.label = "S(0)";
    fams.push_back(pc);
    return fams;
}

// SF*(n): the families of alpha_F(n) together with the second-generation sets
// that appear while refining towards alpha_F(n+1).
inline std::vector<Family> sf_star(const CondensationSystem& sys, long n) {
    const Regime regime = regime_of(*sys.variant());
    std::vector<Family> fams = alpha_F_families(sys, n);
    Family tm;
    tm.kind = FamilyKind::TwoMeans;
    tm.s_depth = static_cast<int>(n);
    tm.second_gen = true;
    tm.label = "S^(2)(0)";
    fams.push_back(tm);
    if (regime == Regime::crossing) {
        for (long j = 2; 2 * j <= n; ++j) {
            Family f;
            f.kind = FamilyKind::NuBlock;
            f.s_depth = static_cast<int>(n - 2 * j);
            f.nu_exp = static_cast<int>(a_of(regime, 2 * j) + 1);
            f.second_gen = true;
            f.label = family_label(regime, n, f);
            fams.push_back(f);
        }
    }
    return fams;
}

// SF*(n) sorted by per-element error, largest first, by exact comparison.
// Exact ties (they occur for nu4, where every S(k), k >= 2 carries the same
// per-element error) are flagged and broken deterministically: deeper nu
// resolution first, which matches how the chains are reported.
inline std::vector<Family> family_order(const CondensationSystem& sys, long n) {
    std::vector<Family> fams = sf_star(sys, n);
    std::vector<Scalar> err;
    err.reserve(fams.size());
    std::vector<std::size_t> idx(fams.size());
    for (std::size_t i = 0; i < fams.size(); ++i) {
        err.push_back(fams[i].per_element_error(sys));
        idx[i] = i;
    }
    auto rank = [](const Family& f) {
        if (f.kind == FamilyKind::NuBlock) return f.second_gen ? 3 : 0;
        return f.kind == FamilyKind::PCenters ? 1 : 2;
    };
    std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
        const int s = (err[x] - err[y]).sign();
        if (s != 0) return s > 0;
        const Family& fx = fams[x];
        const Family& fy = fams[y];
        if (rank(fx) != rank(fy)) return rank(fx) < rank(fy);
        if (fx.nu_exp != fy.nu_exp) return fx.nu_exp > fy.nu_exp;
        return fx.s_depth < fy.s_depth;
    });
    std::vector<Family> out;
    out.reserve(fams.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        Family f = fams[idx[i]];
        f.tied_with_next = (i + 1 < idx.size()) && err[idx[i]] == err[idx[i + 1]];
        out.push_back(std::move(f));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Point materialization.

namespace detail {

inline std::vector<std::string> words_of_length(int len) {
    std::vector<std::string> ws{""};
    for (int i = 0; i < len; ++i) {
        std::vector<std::string> next;
        next.reserve(ws.size() * 2);
        for (auto& w : ws) {
            next.push_back(w + '1');
            next.push_back(w + '2');
        }
        ws = std::move(next);
    }
    return ws;
}

}  // namespace detail

// Elements of a family in canonical (lexicographic) order.
inline std::vector<Address> family_addresses(const Family& f) {
    std::vector<Address> out;
    const auto s_words = detail::words_of_length(f.s_depth);
    switch (f.kind) {
        case FamilyKind::NuBlock: {
            const auto t_words = detail::words_of_length(f.nu_exp);
            out.reserve(s_words.size() * t_words.size());
            for (const auto& s : s_words)
                for (const auto& t : t_words) out.push_back(Address{s, t, Anchor::Half, {}});
            break;
        }
        case FamilyKind::PCenters:
            out.reserve(s_words.size());
            for (const auto& s : s_words) out.push_back(Address{s, "", Anchor::Half, {}});
            break;
        case FamilyKind::TwoMeans:
            out.reserve(s_words.size() * 2);
            for (const auto& s : s_words) {
                out.push_back(Address{s, "", Anchor::TwoLeft, {}});
                out.push_back(Address{s, "", Anchor::TwoRight, {}});
            }
            break;
    }
    return out;
}

// The two addresses replacing one element when its family is split.
inline std::pair<Address, Address> split_element(const Address& a, FamilyKind kind) {
    switch (kind) {
        case FamilyKind::NuBlock:
            return {Address{a.s_word, a.t_word + '1', Anchor::Half, {}},
                    Address{a.s_word, a.t_word + '2', Anchor::Half, {}}};
        case FamilyKind::PCenters:
            return {Address{a.s_word, "", Anchor::TwoLeft, {}},
                    Address{a.s_word, "", Anchor::TwoRight, {}}};
        case FamilyKind::TwoMeans:
            if (a.anchor == Anchor::TwoLeft)
                return {Address{a.s_word + '1', "", Anchor::Half, {}},
                        Address{a.s_word, "1", Anchor::Half, {}}};
            return {Address{a.s_word, "2", Anchor::Half, {}},
                    Address{a.s_word + '2', "", Anchor::Half, {}}};
    }
    throw std::logic_error("split_element: bad kind");
}

inline BigInt alpha_F_cardinality(Regime regime, long n) { return f_of(regime, n); }

constexpr std::uint64_t kMaterializeLimit = 1u << 20;

inline std::vector<Address> alpha_F_addresses(const CondensationSystem& sys, long n) {
    const Regime regime = regime_of(*sys.variant());
    if (f_of(regime, n) > kMaterializeLimit)
        throw std::invalid_argument("alpha_F_addresses: F(n) too large to materialize");
    std::vector<Address> out;
    for (const auto& f : alpha_F_families(sys, n)) {
        auto part = family_addresses(f);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

inline QuantizerSet build_alpha_F(const CondensationSystem& sys, long n) {
    return QuantizerSet::from_addresses(alpha_F_addresses(sys, n), sys);
}

// Exact F(n)-th quantization error:
//   sum_l (2/75)^(n-l) (W/3) (r^2)^(e(l)) + (2/75)^n V.
inline Scalar closed_V_F(const CondensationSystem& sys, long n) {
    sys.require_paper_variant("closed_V_F");
    if (n < 1) throw std::invalid_argument("closed_V_F: n >= 1 required");
    const Regime regime = regime_of(*sys.variant());
    const Scalar w3 = sys.nu.w * Scalar(1, 3);
    const Scalar q(2, 75);
    Scalar acc = q.pow(n) * sys.v;
    for (long ell = 1; ell <= n; ++ell)
        acc += q.pow(n - ell) * w3 * sys.nu.r2.pow(slot_exponent(regime, ell));
    return acc;
}

// ---------------------------------------------------------------------------
// Greedy splitting ladder between F(n_m) and F(n_m + 1).

struct GreedyState {
    long level_n = 0;  // n_m
    std::vector<Family> families;
    std::optional<Family> partial_family;
    BigInt partial_count{0};
    BigInt total_cardinality{0};
    Scalar total_error{0};
    BigInt multiplicity{1};
    std::string beta_description;
};

inline GreedyState greedy_walk(const CondensationSystem& sys, std::uint64_t m) {
    sys.require_paper_variant("greedy_walk");
    if (m < 1) throw std::invalid_argument("greedy_walk: m >= 1 required");
    const Regime regime = regime_of(*sys.variant());
    GreedyState st;
    if (m <= 3) {
        // Hand-proved 1/2/3-means sets, expressed in family form.
        st.total_cardinality = BigInt(static_cast<long long>(m));
        if (m == 1) {
            st.families = {Family{FamilyKind::PCenters, 0, 0, false, "", false}};
            st.total_error = sys.v;
        } else if (m == 2) {
            st.families = {Family{FamilyKind::TwoMeans, 0, 0, false, "", false}};
            st.total_error = sys.v2;
        } else {
            st.families = {Family{FamilyKind::PCenters, 1, 0, false, "", false},
                           Family{FamilyKind::NuBlock, 0, 0, false, "", false}};
            st.total_error = Scalar(2, 75) * sys.v + sys.nu.w * Scalar(1, 3);
        }
        return st;
    }
    long n = 1;
    while (f_of(regime, n + 1) <= BigInt(static_cast<long long>(m))) ++n;
    st.level_n = n;
    st.families = alpha_F_families(sys, n);
    st.total_cardinality = f_of(regime, n);
    st.total_error = closed_V_F(sys, n);
    const BigInt target(static_cast<long long>(m));

    for (const Family& c : family_order(sys, n)) {
        if (st.total_cardinality == target) break;
        const BigInt card = c.cardinality();
        const Scalar delta = c.pair_error(sys) - c.per_element_error(sys);
        auto it = std::find_if(st.families.begin(), st.families.end(),
                               [&](const Family& f) { return f.same_block(c); });
        if (it == st.families.end())
            throw std::logic_error("greedy_walk: ordered family missing from state");
        if (st.total_cardinality + card <= target) {
            Family taken = *it;
            st.families.erase(it);
            for (auto& g : split_family(taken)) st.families.push_back(std::move(g));
            st.total_cardinality += card;
            st.total_error += Scalar(BigRat(card)) * delta;
        } else {
            const BigInt b = target - st.total_cardinality;
            Family taken = *it;
            st.families.erase(it);
            st.partial_family = taken;
            st.partial_count = b;
            st.total_cardinality = target;
            st.total_error += Scalar(BigRat(b)) * delta;
            st.multiplicity = binomial(card.convert_to<unsigned long>(),
                                       b.convert_to<unsigned long>());
            st.beta_description = "beta: first " + b.str() + " of " + card.str() +
                                  " elements of " + family_label(regime, n, taken) +
                                  " (lexicographic)";
            return st;
        }
    }
    if (st.total_cardinality != target)
        throw std::logic_error("greedy_walk: ladder exhausted before reaching m");
    return st;
}

inline std::vector<Address> greedy_addresses(const CondensationSystem& sys, std::uint64_t m) {
    if (m > kMaterializeLimit)
        throw std::invalid_argument("greedy_addresses: m too large to materialize");
    GreedyState st = greedy_walk(sys, m);
    std::vector<Address> out;
    out.reserve(m);
    if (st.level_n == 0) {  // m <= 3: read the families directly
        for (const auto& f : st.families) {
            if (f.kind == FamilyKind::NuBlock && f.nu_exp == 0) {
                out.push_back(Address{"", "", Anchor::Half, {}});  // centroid of L
            } else {
                auto part = family_addresses(f);
                out.insert(out.end(), part.begin(), part.end());
            }
        }
        return out;
    }
    for (const auto& f : st.families) {
        auto part = family_addresses(f);
        out.insert(out.end(), part.begin(), part.end());
    }
    if (st.partial_family) {
        auto elems = family_addresses(*st.partial_family);
        const auto b = st.partial_count.convert_to<std::size_t>();
        for (std::size_t i = 0; i < elems.size(); ++i) {
            if (i < b) {
                auto [x, y] = split_element(elems[i], st.partial_family->kind);
                out.push_back(std::move(x));
                out.push_back(std::move(y));
            } else {
                out.push_back(std::move(elems[i]));
            }
        }
    }
    return out;
}

inline Scalar greedy_error(const CondensationSystem& sys, std::uint64_t m) {
    return greedy_walk(sys, m).total_error;
}

// Counting follows the splitting procedure: the number of admissible partial
// blocks beta of the straddled family, binomial(card, |beta|).
inline BigInt count_optimal_sets(const CondensationSystem& sys, std::uint64_t m) {
    return greedy_walk(sys, m).multiplicity;
}

// Ladder error for every m in [1, m_max], computed incrementally.
inline std::vector<Scalar> greedy_error_sequence(const CondensationSystem& sys,
                                                 std::uint64_t m_max) {
    std::vector<Scalar> errs(m_max + 1, Scalar(0));
    if (m_max >= 1) errs[1] = sys.v;
    if (m_max >= 2) errs[2] = sys.v2;
    if (m_max >= 3) errs[3] = Scalar(2, 75) * sys.v + sys.nu.w * Scalar(1, 3);
    if (m_max < 4) return errs;
    const Regime regime = regime_of(*sys.variant());
    long n = 1;
    std::uint64_t m = 4;
    errs[4] = closed_V_F(sys, 1);
    Scalar err = errs[4];
    while (m < m_max) {
        // One ladder level: split families in order until the count reaches
        // F(n+1).  In the plain regime the lowest-ranked family (S(1)) stays
        // unsplit; it re-labels as the next level's S(2).
        const std::uint64_t level_target = f_of(regime, n + 1).convert_to<std::uint64_t>();
        for (const Family& c : family_order(sys, n)) {
            const Scalar delta = c.pair_error(sys) - c.per_element_error(sys);
            const std::uint64_t card = c.cardinality().convert_to<std::uint64_t>();
            for (std::uint64_t i = 0; i < card && m < m_max && m < level_target; ++i) {
                err += delta;
                errs[++m] = err;
            }
            if (m >= m_max || m >= level_target) break;
        }
        ++n;
        if (m < m_max && m != level_target)
            throw std::logic_error("greedy_error_sequence: level total mismatch");
    }
    return errs;
}

// ---------------------------------------------------------------------------
// Exact minimal-error sets by block dynamic programming.

class VmTable {
public:
    explicit VmTable(const CondensationSystem& sys) : sys_(&sys) {
        v_.assign(3, Scalar(0));
        choice_.assign(3, {0, 0});
        v_[1] = sys.v;
        if (v_.size() > 2) v_[2] = sys.v2;
        pair_best_.assign(2, Scalar(0));
        pair_arg_.assign(2, 0);
    }

    const Scalar& value(std::size_t m) {
        ensure(m);
        return v_[m];
    }

    std::pair<std::size_t, std::size_t> choice(std::size_t m) {
        ensure(m);
        return choice_[m];
    }

    std::vector<Address> optimal_addresses(std::size_t m) {
        ensure(m);
        std::vector<Address> out;
        out.reserve(m);
        emit(m, out);
        return out;
    }

private:
    const CondensationSystem* sys_;
    std::vector<Scalar> v_;
    std::vector<std::pair<std::size_t, std::size_t>> choice_;  // (n_L, n1)
    std::vector<Scalar> pair_best_;      // min over n1 of v[n1] + v[s - n1]
    std::vector<std::size_t> pair_arg_;  // smallest minimizing n1

    Scalar nu_error(std::size_t n) const {
        return nu_optimal_error(static_cast<unsigned long>(n), sys_->nu);
    }

    // Admissible L-block sizes: every n for nu1, dyadic otherwise (the only
    // resolutions with known optimal nu-sets).
    template <typename Fn>
    void for_each_nl(std::size_t max_nl, Fn&& fn) const {
        if (sys_->variant() == Variant::nu1) {
            for (std::size_t n = 1; n <= max_nl; ++n) fn(n);
        } else {
            fn(static_cast<std::size_t>(1));
            for (std::size_t n = 2; n <= max_nl; n *= 2) fn(n);
        }
    }

    void ensure(std::size_t m) {
        if (m < 1) throw std::invalid_argument("VmTable: m >= 1 required");
        if (m < v_.size()) return;
        const Scalar q75(1, 75), third(1, 3);
        for (std::size_t mm = v_.size(); mm <= m; ++mm) {
            // extend pair_best to s = mm - 1 (uses v[1..mm-2], already final)
            {
                const std::size_t s = mm - 1;
                Scalar best = v_[1] + v_[s - 1];
                std::size_t arg = 1;
                for (std::size_t n1 = 2; n1 + 1 <= s; ++n1) {
                    Scalar cand = v_[n1] + v_[s - n1];
                    if (cand < best) {
                        best = cand;
                        arg = n1;
                    }
                }
                pair_best_.push_back(std::move(best));
                pair_arg_.push_back(arg);
            }
            std::optional<Scalar> best;
            std::size_t best_nl = 0;
            for_each_nl(mm - 2, [&](std::size_t nl) {
                Scalar cand = q75 * pair_best_[mm - nl] + third * nu_error(nl);
                if (!best || cand < *best) {
                    best = std::move(cand);
                    best_nl = nl;
                }
            });
            v_.push_back(std::move(*best));
            choice_.push_back({best_nl, pair_arg_[mm - best_nl]});
        }
    }

    void emit(std::size_t m, std::vector<Address>& out) const {
        if (m == 1) {
            out.push_back(Address{"", "", Anchor::Half, {}});
            return;
        }
        if (m == 2) {
            out.push_back(Address{"", "", Anchor::TwoLeft, {}});
            out.push_back(Address{"", "", Anchor::TwoRight, {}});
            return;
        }
        auto [nl, n1] = choice_[m];
        const std::size_t n2 = m - nl - n1;
        std::size_t base = out.size();
        emit(n1, out);
        for (std::size_t i = base; i < out.size(); ++i)
            out[i].s_word.insert(out[i].s_word.begin(), '1');
        for (auto& a : alpha_nu_addresses(static_cast<unsigned long>(nl), sys_->nu))
            out.push_back(std::move(a));
        base = out.size();
        emit(n2, out);
        for (std::size_t i = base; i < out.size(); ++i)
            out[i].s_word.insert(out[i].s_word.begin(), '2');
    }
};

struct OptimalSetBundle {
    QuantizerSet points;
    Scalar error;
    BigInt multiplicity;
    std::string chosen_beta;
};

inline OptimalSetBundle build_alpha_m(const CondensationSystem& sys, std::uint64_t m,
                                      VmTable* table = nullptr) {
    sys.require_paper_variant("build_alpha_m");
    if (m < 1) throw std::invalid_argument("build_alpha_m: m >= 1 required");
    if (m > kMaterializeLimit)
        throw std::invalid_argument("build_alpha_m: m too large to materialize");
    std::optional<VmTable> local;
    if (!table) {
        local.emplace(sys);
        table = &*local;
    }
    GreedyState walk = greedy_walk(sys, m);
    OptimalSetBundle b{
        QuantizerSet::from_addresses(table->optimal_addresses(static_cast<std::size_t>(m)), sys),
        table->value(static_cast<std::size_t>(m)), walk.multiplicity, walk.beta_description};
    return b;
}

}  // namespace fracquant
