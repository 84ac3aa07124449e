#include "fracquant/construction.hpp"
#include "fracquant/distortion.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

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

const Variant kAll[] = {Variant::nu1, Variant::nu2, Variant::nu3, Variant::nu4};

QuantizerSet paper_three(const CondensationSystem&) {
    return QuantizerSet::from_values({Scalar(1, 10), Scalar(1, 2), Scalar(9, 10)});
}

QuantizerSet paper_four(const CondensationSystem& sys) {
    return QuantizerSet::from_values({Scalar(1, 10), sys.nu.t1(Scalar(1, 2)),
                                      sys.nu.t2(Scalar(1, 2)), Scalar(9, 10)});
}

// Random structured codebook: a nonempty subset of alpha_F(4) from each of
// J1, L, J2 (its Voronoi boundaries fall into support gaps, so the engine
// terminates exactly).
QuantizerSet random_structured(const CondensationSystem& sys, std::mt19937_64& rng) {
    auto addrs = alpha_F_addresses(sys, 4);
    std::vector<Scalar> j1, l, j2;
    for (const auto& a : addrs) {
        Scalar x = a.eval(sys);
        if (x < Scalar(2, 5)) j1.push_back(x);
        else if (x <= Scalar(3, 5)) l.push_back(x);
        else j2.push_back(x);
    }
    auto pick = [&](std::vector<Scalar>& pool) {
        std::vector<Scalar> out;
        std::uniform_int_distribution<int> coin(0, 3);
        for (auto& x : pool)
            if (coin(rng) == 0) out.push_back(x);
        if (out.empty()) out.push_back(pool[rng() % pool.size()]);
        return out;
    };
    std::vector<Scalar> values;
    for (auto* pool : {&j1, &l, &j2})
        for (auto& x : pick(*pool)) values.push_back(x);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return QuantizerSet::from_values(values);
}

}  // namespace

TEST_CASE("voronoi boundaries") {
    auto b1 = voronoi_boundaries(QuantizerSet::from_values({Scalar(19, 90), Scalar(71, 90)}));
    REQUIRE(b1.size() == 1);
    CHECK(b1[0] == Scalar(1, 2));
    auto b2 = voronoi_boundaries(paper_three(system_of(Variant::nu1)));
    CHECK(b2[0] == Scalar(3, 10));
    CHECK(b2[1] == Scalar(7, 10));
    auto b3 = voronoi_boundaries(QuantizerSet::from_values({Scalar(3, 10), Scalar(1)}));
    CHECK(b3[0] == Scalar(13, 20));
}

TEST_CASE("one-mean distortion is the variance") {
    for (Variant v : kAll) {
        const auto& sys = system_of(v);
        auto rep = distortion(QuantizerSet::from_values({Scalar(1, 2)}), Target::P, sys);
        CHECK(rep.exact);
        CHECK(rep.value == sys.v);
        auto repn = distortion(QuantizerSet::from_values({Scalar(1, 2)}), Target::Nu, sys);
        CHECK(repn.exact);
        CHECK(repn.value == sys.nu.w);
    }
}

TEST_CASE("exact two/three/four-means distortions match the reference values") {
    struct Expected {
        Variant v;
        Scalar v2, v3, v4;
    };
    const Expected table[] = {
        {Variant::nu1, Scalar(32929, 1182600), Scalar(203, 43800), Scalar(1243, 394200)},
        {Variant::nu2, Scalar(321827, 12877200), Scalar(481, 87600), Scalar(13057, 4292400)},
        {Variant::nu3, Scalar(21211, 821250), Scalar(19, 3650), Scalar(841, 273750)},
        {Variant::nu4,
         Scalar::quad(BigRat(4167521, 179853750), BigRat(155430, 179853750)),
         Scalar::quad(BigRat(10447, 1598700), BigRat(-750, 1598700)),
         Scalar::quad(BigRat(93298, 29975625), BigRat(-740, 29975625))},
    };
    for (const auto& e : table) {
        const auto& sys = system_of(e.v);
        auto two = QuantizerSet::from_values({sys.two_left, sys.two_right});
        auto r2 = distortion(two, Target::P, sys);
        CHECK(r2.exact);
        CHECK(r2.value == e.v2);
        CHECK(sys.v2 == e.v2);
        auto r3 = distortion(paper_three(sys), Target::P, sys);
        CHECK(r3.exact);
        CHECK(r3.value == e.v3);
        auto r4 = distortion(paper_four(sys), Target::P, sys);
        CHECK(r4.exact);
        CHECK(r4.value == e.v4);
    }
}

TEST_CASE("per-point contributions sum to the value") {
    const auto& sys = system_of(Variant::nu1);
    DistortionOptions opt;
    opt.per_point = true;
    auto rep = distortion(paper_four(sys), Target::P, sys, opt);
    Scalar sum{0};
    for (const auto& c : rep.per_point) sum += c;
    CHECK(sum == rep.value);
    CHECK(rep.per_point.size() == 4);
    // symmetric set: outer and inner contributions pair up
    CHECK(rep.per_point[0] == rep.per_point[3]);
    CHECK(rep.per_point[1] == rep.per_point[2]);
}

TEST_CASE("scaled block errors") {
    const auto& sys = system_of(Variant::nu1);
    CHECK(scaled_block_error("", 1, sys) == Scalar(1, 600));
    CHECK(scaled_block_error("1", 2, sys) == Scalar(1, 405000));
    CHECK(scaled_block_error("", 8, sys) == Scalar(1, 3) * sys.nu.w * Scalar(1, 729));
    CHECK_THROWS_AS(scaled_block_error("", 3, system_of(Variant::nu2)), UnsupportedResolution);
}

TEST_CASE("two-mean half-block errors") {
    const auto& sys = system_of(Variant::nu1);
    CHECK(two_mean_block_error("", Scalar(19, 90), Side::Left, sys) == sys.v2 * Scalar(1, 2));
    CHECK(two_mean_block_error("1", Scalar(1, 10), Side::Right, sys) == Scalar(13, 17520));
    const Scalar s1_anchor = sys.s1(Scalar(19, 90));
    CHECK(two_mean_block_error("1", s1_anchor, Side::Left, sys) ==
          Scalar(1, 75) * sys.v2 * Scalar(1, 2));
}

TEST_CASE("engine input validation") {
    const auto& sys = system_of(Variant::nu1);
    CHECK_THROWS_AS(QuantizerSet::from_values({}), std::invalid_argument);
    CHECK_THROWS_AS(QuantizerSet::from_values({Scalar(1, 2), Scalar(1, 2)}), std::invalid_argument);
    DistortionOptions opt;
    opt.tol = Scalar(0);
    opt.max_depth = -1;
    CHECK_THROWS_AS(distortion(paper_three(sys), Target::P, sys, opt), std::invalid_argument);
}

TEST_CASE("adding a point never increases distortion") {
    std::mt19937_64 rng(11);
    for (Variant v : {Variant::nu1, Variant::nu4}) {
        const auto& sys = system_of(v);
        for (int trial = 0; trial < 6; ++trial) {
            auto base = random_structured(sys, rng);
            auto rep = distortion(base, Target::P, sys);
            REQUIRE(rep.exact);
            // add a constructed point not already present
            auto extra = alpha_F_addresses(sys, 5);
            std::vector<Scalar> values;
            for (const auto& p : base.points()) values.push_back(p.value);
            for (const auto& a : extra) {
                Scalar x = a.eval(sys);
                if (std::find(values.begin(), values.end(), x) == values.end()) {
                    values.push_back(x);
                    break;
                }
            }
            auto rep2 = distortion(QuantizerSet::from_values(values), Target::P, sys);
            REQUIRE(rep2.exact);
            CHECK(rep2.value <= rep.value);
        }
    }
}

TEST_CASE("self-similar decomposition of structured codebooks") {
    std::mt19937_64 rng(23);
    for (Variant v : kAll) {
        const auto& sys = system_of(v);
        for (int trial = 0; trial < 4; ++trial) {
            auto alpha = random_structured(sys, rng);
            std::vector<Scalar> a1, al, a2;
            for (const auto& p : alpha.points()) {
                if (p.value < Scalar(2, 5)) a1.push_back(p.value * Scalar(5));
                else if (p.value <= Scalar(3, 5)) al.push_back(p.value);
                else a2.push_back((p.value - Scalar(4, 5)) * Scalar(5));
            }
            REQUIRE(!a1.empty());
            REQUIRE(!al.empty());
            REQUIRE(!a2.empty());
            auto whole = distortion(alpha, Target::P, sys);
            auto left = distortion(QuantizerSet::from_values(a1), Target::P, sys);
            auto mid = distortion(QuantizerSet::from_values(al), Target::Nu, sys);
            auto right = distortion(QuantizerSet::from_values(a2), Target::P, sys);
            REQUIRE(whole.exact);
            REQUIRE(left.exact);
            REQUIRE(mid.exact);
            REQUIRE(right.exact);
            CHECK(whole.value ==
                  Scalar(1, 75) * (left.value + right.value) + Scalar(1, 3) * mid.value);
        }
    }
}

TEST_CASE("distortion is symmetric under reflection about 1/2") {
    std::mt19937_64 rng(31);
    for (Variant v : {Variant::nu1, Variant::nu2, Variant::nu4}) {
        const auto& sys = system_of(v);
        auto alpha = random_structured(sys, rng);
        auto rep = distortion(alpha, Target::P, sys);
        auto repr = distortion(alpha.reflected(), Target::P, sys);
        REQUIRE(rep.exact);
        REQUIRE(repr.exact);
        CHECK(rep.value == repr.value);
    }
}

TEST_CASE("depth-capped reports bracket the refined value") {
    std::mt19937_64 rng(47);
    std::uniform_int_distribution<long long> num(1, 999);
    for (Variant v : {Variant::nu1, Variant::nu3}) {
        const auto& sys = system_of(v);
        for (int trial = 0; trial < 5; ++trial) {
            // genuinely arbitrary rational codebook
            std::vector<Scalar> values;
            while (values.size() < 4) {
                Scalar x(num(rng), 1000);
                if (std::find(values.begin(), values.end(), x) == values.end())
                    values.push_back(x);
            }
            auto alpha = QuantizerSet::from_values(values);
            DistortionOptions coarse;
            coarse.max_depth = 6;
            DistortionOptions fine;
            fine.max_depth = 14;
            auto lo = distortion(alpha, Target::P, sys, coarse);
            auto hi = distortion(alpha, Target::P, sys, fine);
            CHECK(lo.value <= hi.value);
            CHECK(hi.value + hi.truncation_bound <= lo.value + lo.truncation_bound);
            CHECK(lo.truncation_bound.sign() >= 0);
        }
    }
}

TEST_CASE("custom systems work in the engine but not in constructions") {
    auto sys = CondensationSystem::custom(NuSpec::custom(Scalar(1, 4)));
    auto rep = distortion(QuantizerSet::from_values({Scalar(1, 2)}), Target::P, sys);
    REQUIRE(rep.exact);
    CHECK(rep.value == sys.v);
    auto repn = distortion(QuantizerSet::from_values({Scalar(1, 2)}), Target::Nu, sys);
    CHECK(repn.value == sys.nu.w);
    // the two-means pair derived for the custom ratio is exact as well
    auto two = distortion(QuantizerSet::from_values({sys.two_left, sys.two_right}), Target::P, sys);
    REQUIRE(two.exact);
    CHECK(two.value == sys.v2);
    CHECK(two.value < rep.value);
    CHECK_THROWS_AS(build_alpha_F(sys, 2), std::invalid_argument);
    CHECK_THROWS_AS(closed_V_F(sys, 2), std::invalid_argument);
    CHECK_THROWS_AS(count_optimal_sets(sys, 5), std::invalid_argument);
}

TEST_CASE("region centroids minimize: perturbing an optimal point costs") {
    const auto& sys = system_of(Variant::nu1);
    auto base = build_alpha_F(sys, 1);
    auto rep = distortion(base, Target::P, sys);
    for (std::size_t i = 0; i < base.size(); ++i) {
        for (const Scalar& delta : {Scalar(1, 1000), Scalar(-1, 1000)}) {
            std::vector<Scalar> values;
            for (const auto& p : base.points()) values.push_back(p.value);
            values[i] += delta;
            auto pert = distortion(QuantizerSet::from_values(values), Target::P, sys);
            // a 1/1000 shift keeps every boundary inside a support gap, so
            // the perturbed distortion is still exact and strictly larger
            REQUIRE(pert.exact);
            CHECK(rep.value < pert.value);
        }
    }
}
