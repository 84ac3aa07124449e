#pragma once

// Independent brute-force verification: discretize P (or nu) into a weighted
// atomic measure and solve the 1-D n-means problem to global optimality by
// dynamic programming over contiguous clusters (optimal 1-D clusters are
// intervals).  Oracle arithmetic is double precision with compensated prefix
// sums; the discretization bound certifies how far the surrogate can sit from
// the true measure.

#include "fracquant/construction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace fracquant {

struct AtomicMeasure {
    std::vector<double> pos;
    std::vector<double> mass;
    double trunc_var_bound = 0.0;
    std::size_t size() const { return pos.size(); }
};

constexpr std::size_t kAtomLimit = 10'000'000;

// Atoms at cell centroids so the surrogate preserves every cell mean exactly:
// S_w(1/2) for |w| = depth_p and S_w T_t(1/2) for |w| = k < depth_p,
// |t| = depth_nu.
inline AtomicMeasure discretize(Target target, const CondensationSystem& sys, int depth_p,
                                int depth_nu) {
    if (depth_p < 1 || depth_nu < 1)
        throw std::invalid_argument("discretize: depths >= 1 required");
    const double r = sys.nu.t1.ratio.to_double();
    const double w = sys.nu.w.to_double();
    const double v = sys.v.to_double();
    const double r2 = r * r;

    // nu atoms of the template measure at resolution depth_nu
    std::vector<double> t_scale{1.0}, t_off{0.0};
    const double o1 = sys.nu.t1.offset.to_double();
    const double o2 = sys.nu.t2.offset.to_double();
    for (int i = 0; i < depth_nu; ++i) {
        std::vector<double> ns, no;
        ns.reserve(t_scale.size() * 2);
        no.reserve(t_off.size() * 2);
        for (std::size_t j = 0; j < t_scale.size(); ++j) {
            ns.push_back(t_scale[j] * r);
            no.push_back(t_scale[j] * o1 + t_off[j]);
            ns.push_back(t_scale[j] * r);
            no.push_back(t_scale[j] * o2 + t_off[j]);
        }
        t_scale = std::move(ns);
        t_off = std::move(no);
    }
    std::vector<double> nu_atoms(t_scale.size());
    for (std::size_t j = 0; j < t_scale.size(); ++j) nu_atoms[j] = t_scale[j] * 0.5 + t_off[j];

    AtomicMeasure am;
    if (target == Target::Nu) {
        const double m = 1.0 / static_cast<double>(t_scale.size());
        am.pos = nu_atoms;
        am.mass.assign(nu_atoms.size(), m);
        am.trunc_var_bound = w * std::pow(r2, depth_nu);
    } else {
        const std::size_t n_nu = nu_atoms.size();
        std::size_t count = (1ull << depth_p);
        for (int k = 0; k < depth_p; ++k) count += (1ull << k) * n_nu;
        if (count > kAtomLimit) throw std::invalid_argument("discretize: atom count over limit");
        am.pos.reserve(count);
        am.mass.reserve(count);

        std::vector<double> s_scale{1.0}, s_off{0.0};
        double p_level_mass = 1.0;  // 1/3^k
        double bound = 0.0;
        for (int k = 0; k <= depth_p; ++k) {
            if (k == depth_p) {
                for (std::size_t j = 0; j < s_scale.size(); ++j) {
                    am.pos.push_back(s_scale[j] * 0.5 + s_off[j]);
                    am.mass.push_back(p_level_mass);
                    bound += p_level_mass * v * s_scale[j] * s_scale[j];
                }
                break;
            }
            const double nu_mass = p_level_mass / 3.0 / static_cast<double>(n_nu);
            for (std::size_t j = 0; j < s_scale.size(); ++j) {
                for (double x : nu_atoms) {
                    am.pos.push_back(s_scale[j] * x + s_off[j]);
                    am.mass.push_back(nu_mass);
                }
                bound += (p_level_mass / 3.0) * w * std::pow(r2, depth_nu) * s_scale[j] * s_scale[j];
            }
            std::vector<double> ns, no;
            ns.reserve(s_scale.size() * 2);
            no.reserve(s_off.size() * 2);
            for (std::size_t j = 0; j < s_scale.size(); ++j) {
                ns.push_back(s_scale[j] * 0.2);
                no.push_back(s_off[j]);
                ns.push_back(s_scale[j] * 0.2);
                no.push_back(s_scale[j] * 0.8 + s_off[j]);
            }
            s_scale = std::move(ns);
            s_off = std::move(no);
            p_level_mass /= 3.0;
        }
        am.trunc_var_bound = bound;
    }

    std::vector<std::size_t> idx(am.pos.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t x, std::size_t y) { return am.pos[x] < am.pos[y]; });
    AtomicMeasure sorted;
    sorted.trunc_var_bound = am.trunc_var_bound;
    sorted.pos.reserve(idx.size());
    sorted.mass.reserve(idx.size());
    for (std::size_t i : idx) {
        sorted.pos.push_back(am.pos[i]);
        sorted.mass.push_back(am.mass[i]);
    }
    return sorted;
}

struct DPSolution {
    std::vector<std::size_t> breaks;  // first atom index of each cluster
    std::vector<double> centroids;
    double cost = 0.0;
};

namespace detail {

struct KahanPrefix {
    std::vector<double> sum;
    explicit KahanPrefix(const std::vector<double>& xs) {
        sum.resize(xs.size() + 1, 0.0);
        double acc = 0.0, comp = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double y = xs[i] - comp;
            const double t = acc + y;
            comp = (t - acc) - y;
            acc = t;
            sum[i + 1] = acc;
        }
    }
    double range(std::size_t i, std::size_t j) const { return sum[j + 1] - sum[i]; }
};

}  // namespace detail

// Globally optimal n-clustering of the sorted atoms; interval DP with O(1)
// prefix-sum cost queries and divide-and-conquer row fill (the cost matrix is
// totally monotone).
inline DPSolution kmeans_dp(const AtomicMeasure& am, std::size_t n) {
    const std::size_t N = am.size();
    if (n < 1 || n > N) throw std::invalid_argument("kmeans_dp: need 1 <= n <= atom count");
    std::vector<double> wx(N), wxx(N);
    for (std::size_t i = 0; i < N; ++i) {
        wx[i] = am.mass[i] * am.pos[i];
        wxx[i] = am.mass[i] * am.pos[i] * am.pos[i];
    }
    detail::KahanPrefix pw(am.mass), pwx(wx), pwxx(wxx);
    auto cost = [&](std::size_t i, std::size_t j) {
        const double w = pw.range(i, j);
        if (w <= 0.0) return 0.0;
        const double sx = pwx.range(i, j);
        const double c = pwxx.range(i, j) - sx * sx / w;
        return c > 0.0 ? c : 0.0;
    };

    std::vector<double> prev(N), cur(N);
    std::vector<std::vector<std::uint32_t>> arg(n, std::vector<std::uint32_t>(N, 0));
    for (std::size_t j = 0; j < N; ++j) prev[j] = cost(0, j);

    // Fill row k: cur[j] = min_{i <= j} prev[i-1] + cost(i, j); the argmin is
    // monotone in j, so fill by divide and conquer.
    for (std::size_t k = 2; k <= n; ++k) {
        auto& row_arg = arg[k - 1];
        auto solve = [&](auto&& self, std::size_t lo, std::size_t hi, std::size_t opt_lo,
                         std::size_t opt_hi) -> void {
            if (lo > hi) return;
            const std::size_t mid = lo + (hi - lo) / 2;
            double best = 0.0;
            std::size_t best_i = 0;
            bool first = true;
            const std::size_t i_lo = std::max(opt_lo, k - 1);
            const std::size_t i_hi = std::min(opt_hi, mid);
            for (std::size_t i = i_lo; i <= i_hi; ++i) {
                const double val = prev[i - 1] + cost(i, mid);
                if (first || val < best) {
                    best = val;
                    best_i = i;
                    first = false;
                }
            }
            cur[mid] = best;
            row_arg[mid] = static_cast<std::uint32_t>(best_i);
            if (mid > lo) self(self, lo, mid - 1, opt_lo, best_i);
            if (mid < hi) self(self, mid + 1, hi, best_i, opt_hi);
        };
        solve(solve, k - 1, N - 1, k - 1, N - 1);
        for (std::size_t j = 0; j + 1 < k; ++j) cur[j] = 0.0;  // unused region
        std::swap(prev, cur);
    }

    DPSolution sol;
    sol.cost = prev[N - 1];
    sol.breaks.assign(n, 0);
    std::size_t end = N - 1;
    for (std::size_t k = n; k >= 2; --k) {
        const std::size_t start = arg[k - 1][end];
        sol.breaks[k - 1] = start;
        end = start - 1;
    }
    sol.breaks[0] = 0;
    sol.centroids.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t i = sol.breaks[k];
        const std::size_t j = (k + 1 < n) ? sol.breaks[k + 1] - 1 : N - 1;
        sol.centroids[k] = pwx.range(i, j) / pw.range(i, j);
    }
    return sol;
}

// Optional comparison mode; finds only a local optimum, never used for
// verification.
inline DPSolution lloyd(const AtomicMeasure& am, std::vector<double> centroids,
                        int max_iters = 200) {
    std::sort(centroids.begin(), centroids.end());
    const std::size_t n = centroids.size();
    DPSolution sol;
    sol.centroids = std::move(centroids);
    for (int it = 0; it < max_iters; ++it) {
        std::vector<double> w(n, 0.0), wx(n, 0.0);
        std::size_t k = 0;
        for (std::size_t i = 0; i < am.size(); ++i) {
            while (k + 1 < n &&
                   std::abs(am.pos[i] - sol.centroids[k + 1]) < std::abs(am.pos[i] - sol.centroids[k]))
                ++k;
            w[k] += am.mass[i];
            wx[k] += am.mass[i] * am.pos[i];
        }
        bool moved = false;
        for (std::size_t j = 0; j < n; ++j) {
            if (w[j] <= 0.0) continue;
            const double c = wx[j] / w[j];
            if (c != sol.centroids[j]) moved = true;
            sol.centroids[j] = c;
        }
        std::sort(sol.centroids.begin(), sol.centroids.end());
        if (!moved) break;
    }
    sol.cost = 0.0;
    for (std::size_t i = 0; i < am.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (double c : sol.centroids) best = std::min(best, (am.pos[i] - c) * (am.pos[i] - c));
        sol.cost += am.mass[i] * best;
    }
    return sol;
}

struct VerifyReport {
    std::uint64_t m = 0;
    double dp_cost = 0.0;
    double exact_error = 0.0;
    double diff = 0.0;
    double bound = 0.0;
    double centroid_dev = 0.0;
    bool pass_cost = false;
    bool pass_centroids = false;
    bool pass = false;
    // The oracle found a strictly better set than the construction.  This
    // happens for nu2/nu3 at sizes whose optimal L-block needs a nu
    // resolution outside the proven dyadic family (first at m = 9 for nu3,
    // m = 11 for nu2); it is a property of the family, not float noise.
    bool dp_improves = false;
};

inline VerifyReport verify_optimality(const CondensationSystem& sys, std::uint64_t m,
                                      int depth_p, int depth_nu, double tol,
                                      double centroid_tol = 1e-4, VmTable* table = nullptr) {
    AtomicMeasure am = discretize(Target::P, sys, depth_p, depth_nu);
    DPSolution sol = kmeans_dp(am, static_cast<std::size_t>(m));
    OptimalSetBundle bundle = build_alpha_m(sys, m, table);

    VerifyReport rep;
    rep.m = m;
    rep.dp_cost = sol.cost;
    rep.exact_error = bundle.error.to_double();
    rep.diff = std::abs(rep.dp_cost - rep.exact_error);
    rep.bound = am.trunc_var_bound;
    // small absolute slack so diff == bound cases survive float rounding
    rep.pass_cost = rep.diff <= std::max(tol, rep.bound) * (1.0 + 1e-12) + 1e-18;
    rep.dp_improves = (rep.exact_error - rep.dp_cost) > std::max(tol, rep.bound);

    // The constructed set is canonical up to the reflection symmetry of P;
    // accept either orientation.
    std::vector<double> pts;
    pts.reserve(bundle.points.size());
    for (const auto& p : bundle.points.points()) pts.push_back(p.value.to_double());
    auto deviation = [&](const std::vector<double>& a) {
        double d = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            d = std::max(d, std::abs(a[i] - sol.centroids[i]));
        return d;
    };
    std::vector<double> mirrored(pts.rbegin(), pts.rend());
    for (double& x : mirrored) x = 1.0 - x;
    rep.centroid_dev = std::min(deviation(pts), deviation(mirrored));
    rep.pass_centroids = rep.centroid_dev <= centroid_tol;
    rep.pass = rep.pass_cost && rep.pass_centroids;
    return rep;
}

}  // namespace fracquant
