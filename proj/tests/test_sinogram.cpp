#include <gtest/gtest.h>

#include <limits>
#include <random>

#include "test_support.hpp"
#include "torotomo/sinogram.hpp"
#include "torotomo/weight.hpp"
#include "torotomo/xray.hpp"

using namespace torotomo;
using torotomo::testing::random_field;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

WeightRule canonical_2d(int radius) {
    return weight_build(WeightKind::CanonicalSingleton, {}, family_from_directions(direction_cover(radius), radius));
}

TorusSinogram random_sinogram(const FamilyPtr& fam, std::uint64_t seed, bool off_support = false) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    TorusSinogram g(fam);
    g.set_mean({gauss(rng), gauss(rng)});
    const auto& band = fam->band();
    for (std::size_t m = 0; m < fam->size(); ++m) {
        SliceData s;
        if (off_support) {
            for (std::size_t k = 0; k < band.size(); ++k)
                if (k != band.zero_index() && (k + m) % 7 == 0) s.push_back({static_cast<std::uint32_t>(k), {gauss(rng), gauss(rng)}});
        } else {
            for (auto k : fam->support(m)) s.push_back({k, {gauss(rng), gauss(rng)}});
        }
        g.set_slice(m, std::move(s));
    }
    return g;
}
}  // namespace

TEST(WeightBuild, CanonicalSingletonIsFlat) {
    const auto w = canonical_2d(5);
    for (std::size_t k = 0; k < w.band().size(); ++k) EXPECT_NEAR(w.normal(k), 1.0, 1e-15);
    EXPECT_NEAR(w.lower_constant(), 1.0, 1e-15);
    EXPECT_NEAR(w.upper_constant(), 1.0, 1e-15);

    const int radius = 3;
    const auto w3 = weight_build(WeightKind::CanonicalSingleton, {}, 2, 3, complete_cover_height(2, 3, radius), radius);
    for (std::size_t k = 0; k < w3.band().size(); ++k) EXPECT_NEAR(w3.normal(k), 1.0, 1e-14);
}

TEST(WeightBuild, HeightDecayExample) {
    const auto w = weight_build(WeightKind::HeightDecay, {}, 1, 3, 1, 2);
    const IntVec k{0, 0, 1};
    const auto idx = w.band().index(k);
    EXPECT_EQ(w.family()->omega(idx).size(), 4u);
    EXPECT_DOUBLE_EQ(w.normal(idx), 1.0);
    for (auto m : w.family()->omega(idx)) EXPECT_DOUBLE_EQ(w.weight(idx, m), 0.5);
}

TEST(WeightBuild, NormalizedWeightsHaveUnitSquareSum) {
    const auto w = weight_build(WeightKind::HeightDecay, {}, 1, 3, 3, 3);
    for (std::size_t k = 0; k < w.band().size(); ++k) {
        if (k == w.band().zero_index()) continue;
        double acc = 0;
        for (auto m : w.family()->omega(k)) acc += std::pow(w.normalized_weight(k, m), 2);
        EXPECT_NEAR(acc, 1.0, 1e-14);
    }
}

TEST(WeightBuild, Errors) {
    // Directions with |v|_inf <= 1 do not cover |k|_inf <= 2.
    const auto thin = family_from_directions(direction_cover(1), 2);
    try {
        (void)weight_build(WeightKind::CanonicalSingleton, {}, thin);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DegenerateWeight);
    }
    try {
        (void)weight_build(WeightKind::CanonicalSingleton, {}, 1, 3, 2, 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::BadParams);
    }
}

TEST(WeightBuild, DecayBoundHolds) {
    const auto w = weight_build(WeightKind::HeightDecay, {}, 1, 3, 2, 2);
    const auto& band = w.band();
    for (std::size_t m = 0; m < w.family()->size(); ++m) {
        const auto b = w.decay_bound(m);
        EXPECT_GT(b.c, 0.0);
        for (std::size_t k = 0; k < band.size(); ++k)
            EXPECT_GE(w.weight(k, m), b.c * std::pow(bracket_sq(band.frequency(k)), -0.5 * b.m) - 1e-15);
    }
}

TEST(SinogramNorm, Examples) {
    const int radius = 4;
    const auto w = canonical_2d(radius);
    const auto h = torotomo::testing::harmonic(2, radius, {1, 2});
    EXPECT_NEAR(sinogram_norm(forward_sinogram(h, w.family()), 0.0, w), 1.0, 1e-15);

    TorusSinogram zero(w.family());
    EXPECT_EQ(sinogram_norm(zero, 1.0, w), 0.0);

    TorusSinogram mean_only(w.family());
    mean_only.set_mean(5.0);
    for (double s : {-1.0, 0.0, 3.0}) EXPECT_NEAR(sinogram_norm(mean_only, s, w), 5.0, 1e-13);
    // The canonical zero weight spreads the mean evenly over the slices.
    const double count = static_cast<double>(w.family()->size());
    EXPECT_NEAR(sinogram_norm(mean_only, 0.0, w, kInf, kInf), 5.0 / std::sqrt(count), 1e-13);
    EXPECT_NEAR(sinogram_norm(mean_only, 0.0, w, 1.0, 1.0), 5.0 * std::sqrt(count), 1e-11);
}

TEST(SinogramNorm, UnitarityOfXRayTransform) {
    const int radius = 6;
    const auto w = canonical_2d(radius);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto f = random_field(2, radius, seed);
        const auto g = forward_sinogram(f, w.family());
        for (double s : {-1.0, 0.0, 1.0, 2.0}) {
            const double nf = sobolev_norm(f, s);
            EXPECT_NEAR(sinogram_norm(g, s, w), nf, 1e-12 * nf);
            EXPECT_NEAR(unweighted_norm(g, s), nf, 1e-12 * nf);
        }
    }
}

TEST(SinogramNorm, InnerProductGeneratesTwoTwoNorm) {
    const auto w = weight_build(WeightKind::HeightDecay, {}, 1, 3, 2, 2);
    const auto g = random_sinogram(w.family(), 3);
    for (double s : {-1.0, 0.0, 1.0}) {
        const double n = sinogram_norm(g, s, w);
        EXPECT_NEAR(std::sqrt(sinogram_inner(g, g, s, w).real()), n, 1e-12 * n);
    }
}

TEST(SinogramNorm, NormAxiomsForAllExponents) {
    const int radius = 3;
    const auto w = canonical_2d(radius);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto g = random_sinogram(w.family(), 2 * seed, seed % 2 == 1);
        const auto h = random_sinogram(w.family(), 2 * seed + 1);
        for (double s : {-1.0, 0.0, 1.0})
            for (double p : {1.0, 2.0, kInf})
                for (double l : {1.0, 2.0, kInf}) {
                    const double ng = sinogram_norm(g, s, w, p, l);
                    EXPECT_NEAR(sinogram_norm(2.5 * g, s, w, p, l), 2.5 * ng, 1e-12 * ng);
                    EXPECT_LE(sinogram_norm(g + h, s, w, p, l), ng + sinogram_norm(h, s, w, p, l) + 1e-12);
                }
    }
}

TEST(SinogramNorm, CustomTableMissingEntry) {
    const int radius = 1;
    const auto fam = family_from_directions(direction_cover(radius), radius);
    WeightParams params;
    const auto& band = fam->band();
    for (std::size_t k = 0; k < band.size(); ++k)
        for (std::size_t m = 0; m < fam->size(); ++m)
            if (k == band.zero_index() || std::find(fam->omega(k).begin(), fam->omega(k).end(), m) != fam->omega(k).end())
                params.table[{k, m}] = 0.5;
    const auto w = weight_build(WeightKind::CustomTable, params, fam);
    EXPECT_NEAR(w.lower_constant(), 0.5, 1e-15);
    const auto in_range = random_sinogram(fam, 1);
    EXPECT_GT(sinogram_norm(in_range, 0.0, w), 0.0);
    const auto outside = random_sinogram(fam, 2, true);
    try {
        (void)sinogram_norm(outside, 0.0, w);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::WeightUndefined);
    }
}

TEST(MomentConstraint, ArithmeticMeanForFlatWeight) {
    const auto fam = family_from_directions({primitive_reduce({1, 0}), primitive_reduce({0, 1})}, 0);
    const auto w = weight_build(WeightKind::CanonicalSingleton, {}, fam);
    RawSinogram raw{fam, {1.0, 3.0}, {{}, {}}};
    EXPECT_NEAR(std::abs(enforce_moment_constraint(raw, w).mean() - 2.0), 0.0, 1e-15);
}

TEST(MomentConstraint, ConsistentDataIsFixedPoint) {
    const auto w = canonical_2d(3);
    const auto g = random_sinogram(w.family(), 8);
    const auto p = enforce_moment_constraint(to_raw(g), w);
    EXPECT_NEAR(std::abs(p.mean() - g.mean()), 0.0, 1e-14);
    EXPECT_EQ(p.slices(), g.slices());
}

TEST(MomentConstraint, IsNormMinimisingProjection) {
    const auto w = weight_build(WeightKind::HeightDecay, {}, 1, 2, 3, 3);
    const auto& fam = w.family();
    std::mt19937_64 rng(99);
    std::normal_distribution<double> gauss;
    RawSinogram raw = to_raw(random_sinogram(fam, 4));
    for (auto& m : raw.slice_means) m = {gauss(rng), gauss(rng)};
    const auto projected = enforce_moment_constraint(raw, w);

    auto distance = [&](const TorusSinogram& h) {
        RawSinogram diff = raw;
        for (std::size_t m = 0; m < diff.slices.size(); ++m) {
            diff.slice_means[m] -= h.mean();
            diff.slices[m] = detail::merge(diff.slices[m], h.slice(m), [](Complex a, Complex b) { return a - b; });
        }
        return raw_norm(diff, 0.0, w);
    };
    const double best = distance(projected);
    for (std::uint64_t trial = 0; trial < 200; ++trial) {
        auto h = projected;
        std::normal_distribution<double> step(0.0, trial < 100 ? 1e-3 : 1.0);
        h.set_mean(h.mean() + Complex(step(rng), step(rng)));
        if (trial % 2) h += 0.01 * random_sinogram(fam, 1000 + trial);
        EXPECT_LE(best, distance(h) + 1e-14);
    }
}
