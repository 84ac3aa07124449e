#pragma once

// Exact distortion of a finite codebook against P or nu: Voronoi partition
// plus recursive cylinder-cell assignment.  A cell whose hull sits inside one
// Voronoi region contributes its second moment about that point exactly; a
// straddled cell is split; cells stopped by the depth cap contribute a
// certified [0, U] bracket.

#include "fracquant/model.hpp"

#include <algorithm>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

namespace fracquant {

enum class Target { P, Nu };

struct QPoint {
    Scalar value;
    std::optional<Address> provenance;
};

class QuantizerSet {
public:
    QuantizerSet() = default;

    static QuantizerSet from_values(std::vector<Scalar> values) {
        std::vector<QPoint> pts;
        pts.reserve(values.size());
        for (auto& v : values) pts.push_back(QPoint{std::move(v), std::nullopt});
        return QuantizerSet(std::move(pts));
    }

    static QuantizerSet from_addresses(std::vector<Address> addrs, const CondensationSystem& sys) {
        std::vector<QPoint> pts;
        pts.reserve(addrs.size());
        for (auto& a : addrs) {
            Scalar v = a.eval(sys);
            pts.push_back(QPoint{std::move(v), std::move(a)});
        }
        return QuantizerSet(std::move(pts));
    }

    explicit QuantizerSet(std::vector<QPoint> pts) : pts_(std::move(pts)) {
        if (pts_.empty()) throw std::invalid_argument("QuantizerSet: empty codebook");
        std::sort(pts_.begin(), pts_.end(),
                  [](const QPoint& x, const QPoint& y) { return x.value < y.value; });
        for (std::size_t i = 1; i < pts_.size(); ++i)
            if (pts_[i].value == pts_[i - 1].value)
                throw std::invalid_argument("QuantizerSet: duplicate point");
    }

    std::size_t size() const { return pts_.size(); }
    const QPoint& operator[](std::size_t i) const { return pts_[i]; }
    const std::vector<QPoint>& points() const { return pts_; }

    QuantizerSet reflected() const {  // about 1/2
        std::vector<QPoint> pts;
        pts.reserve(pts_.size());
        for (const auto& p : pts_) pts.push_back(QPoint{Scalar(1) - p.value, std::nullopt});
        return QuantizerSet(std::move(pts));
    }

private:
    std::vector<QPoint> pts_;
};

inline std::vector<Scalar> voronoi_boundaries(const QuantizerSet& alpha) {
    std::vector<Scalar> b;
    b.reserve(alpha.size() - 1);
    for (std::size_t i = 0; i + 1 < alpha.size(); ++i)
        b.push_back((alpha[i].value + alpha[i + 1].value) * Scalar(1, 2));
    return b;
}

struct DistortionOptions {
    Scalar tol = Scalar(BigRat(BigInt(1), big_pow(10, 30)));
    int max_depth = 60;
    bool per_point = false;
};

struct DistortionReport {
    Scalar value;             // resolved part
    Scalar truncation_bound;  // true distortion lies in [value, value + truncation_bound]
    std::vector<Scalar> per_point;
    int max_depth_used = 0;
    bool exact = false;
    std::size_t cells_processed = 0;
};

inline DistortionReport distortion(const QuantizerSet& alpha, Target target,
                                   const CondensationSystem& sys,
                                   const DistortionOptions& opt = {}) {
    if (opt.tol.sign() <= 0 && opt.max_depth < 0)
        throw std::invalid_argument("distortion: need tol > 0 or a finite depth cap");
    const std::vector<Scalar> bounds = voronoi_boundaries(alpha);

    DistortionReport rep;
    rep.value = Scalar(0);
    rep.truncation_bound = Scalar(0);
    if (opt.per_point) rep.per_point.assign(alpha.size(), Scalar(0));

    struct Pending {
        CylinderCell cell;
        Scalar bound;       // U, the best single-point second moment
        std::size_t r_lo, r_hi;  // Voronoi regions the hull touches
        double key;
        std::uint64_t seq;
    };
    struct ByKey {
        bool operator()(const Pending& x, const Pending& y) const {
            if (x.key != y.key) return x.key < y.key;
            return x.seq > y.seq;  // older first on equal keys
        }
    };
    std::priority_queue<Pending, std::vector<Pending>, ByKey> queue;
    Scalar active_bound{0};   // exact sum of U over queued cells
    Scalar frozen_bound{0};   // cells stopped by the depth cap
    std::uint64_t seq = 0;

    // Region of the hull endpoints under the left-assignment rule: a boundary
    // equal to the hull endpoint does not make the cell straddle.
    auto count_lt = [&](const Scalar& x) {
        std::size_t lo = 0, hi = bounds.size();
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (bounds[mid] < x) lo = mid + 1; else hi = mid;
        }
        return lo;  // number of boundaries strictly below x
    };
    auto count_le = [&](const Scalar& x) {
        std::size_t lo = 0, hi = bounds.size();
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (bounds[mid] <= x) lo = mid + 1; else hi = mid;
        }
        return lo;
    };

    // Nearest codebook point to x among indices [r_lo, r_hi]; the points are
    // sorted, so this is a binary search plus one neighbour comparison.
    auto nearest_in = [&](const Scalar& x, std::size_t r_lo, std::size_t r_hi) {
        std::size_t lo = r_lo, hi = r_hi;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (alpha[mid].value < x) lo = mid + 1; else hi = mid;
        }
        if (lo > r_lo) {
            const Scalar dl = x - alpha[lo - 1].value;
            const Scalar dr = alpha[lo].value - x;
            if (dl <= dr) return lo - 1;
        }
        return lo;
    };

    auto classify = [&](CylinderCell&& cell) {
        ++rep.cells_processed;
        rep.max_depth_used = std::max(rep.max_depth_used, cell.depth());
        const std::size_t r_lo = count_le(cell.lo());
        const std::size_t r_hi = count_lt(cell.hi());
        const Scalar centroid = cell.centroid();
        auto moment_about = [&](const Scalar& a) {
            const Scalar d = centroid - a;
            return cell.mass * (cell.var_term(sys) + d * d);
        };
        if (r_lo == r_hi) {
            Scalar contrib = moment_about(alpha[r_lo].value);
            if (opt.per_point) rep.per_point[r_lo] += contrib;
            rep.value += contrib;
            return;
        }
        // U is minimized by the point closest to the centroid.
        Scalar best = moment_about(alpha[nearest_in(centroid, r_lo, r_hi)].value);
        if (cell.depth() >= opt.max_depth) {
            frozen_bound += best;
            return;
        }
        Pending p{std::move(cell), best, r_lo, r_hi, 0.0, seq++};
        p.key = p.bound.to_double();
        active_bound += p.bound;
        queue.push(std::move(p));
    };

    classify(target == Target::P ? CylinderCell::root_p() : CylinderCell::root_nu());
    while (!queue.empty() && (active_bound + frozen_bound - opt.tol).sign() > 0) {
        Pending top = queue.top();
        queue.pop();
        active_bound -= top.bound;
        for (auto& child : top.cell.children(sys)) classify(std::move(child));
    }

    rep.truncation_bound = active_bound + frozen_bound;
    rep.exact = rep.truncation_bound.is_zero();
    return rep;
}

// Error contributed by L_w when covered by S_w(alpha_n(nu)):
// (1/75^|w|) (1/3) V_n(nu).
inline Scalar scaled_block_error(const std::string& omega, unsigned long n,
                                 const CondensationSystem& sys) {
    return Scalar(1, 75).pow(static_cast<long long>(omega.size())) * Scalar(1, 3) *
           nu_optimal_error(n, sys.nu);
}

enum class Side { Left, Right };

// Exact half-block error about an arbitrary point a:
// (1/3^k)( (1/25^k) V2/2 + (1/2) (S_w(anchor) - a)^2 ).
inline Scalar two_mean_block_error(const std::string& omega, const Scalar& a, Side side,
                                   const CondensationSystem& sys) {
    const long long k = static_cast<long long>(omega.size());
    const Scalar anchor = sys.s_map(omega)(side == Side::Left ? sys.two_left : sys.two_right);
    const Scalar d = anchor - a;
    return Scalar(1, 3).pow(k) *
           (Scalar(1, 25).pow(k) * sys.v2 * Scalar(1, 2) + Scalar(1, 2) * d * d);
}

}  // namespace fracquant
