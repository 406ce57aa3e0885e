#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"
#include "torotomo/xray.hpp"

using namespace torotomo;
using torotomo::testing::harmonic;
using torotomo::testing::random_field;
using torotomo::testing::series_at;

TEST(ForwardDirection, Examples) {
    TorusField c(2, 2);
    c.set({0, 0}, 1.0);
    const auto out = forward_direction(c, primitive_reduce({1, 0}));
    EXPECT_EQ(torotomo::testing::max_coeff_diff(out, c), 0.0);

    const auto h = harmonic(2, 2, {1, 0});
    EXPECT_EQ(sobolev_norm(forward_direction(h, primitive_reduce({1, 0})), 0.0), 0.0);
    EXPECT_EQ(torotomo::testing::max_coeff_diff(forward_direction(h, primitive_reduce({0, 1})), h), 0.0);
}

TEST(ForwardDirection, SelectionRuleIsExact) {
    const auto f = random_field(2, 6, 17);
    for (const auto& v : enumerate_directions(2, 4)) {
        const auto out = forward_direction(f, v);
        for (std::size_t i = 0; i < f.band().size(); ++i) {
            const bool keep = dot(f.band().frequency(i), v.vec()) == 0;
            EXPECT_EQ(out.coeffs()[i], keep ? f.coeffs()[i] : Complex{});
        }
    }
}

TEST(ForwardDirection, IsLinear) {
    const auto f = random_field(2, 5, 1);
    const auto g = random_field(2, 5, 2);
    const Complex a(0.3, 2.0);
    for (const auto& v : enumerate_directions(2, 3)) {
        const auto lhs = forward_direction(a * f + g, v);
        const auto rhs = a * forward_direction(f, v) + forward_direction(g, v);
        EXPECT_LT(torotomo::testing::max_coeff_diff(lhs, rhs), 1e-14);
    }
}

TEST(ForwardSubspace, Examples) {
    const auto h = harmonic(3, 2, {0, 0, 1});
    const auto plane = canonicalize_subspace({{1, 0, 0}, {0, 1, 0}}, 2);
    EXPECT_EQ(torotomo::testing::max_coeff_diff(forward_subspace(h, plane), h), 0.0);
    const auto line = as_subspace(primitive_reduce({0, 0, 1}));
    EXPECT_EQ(sobolev_norm(forward_subspace(h, line), 0.0), 0.0);

    const auto f = random_field(2, 4, 3);
    for (const auto& v : enumerate_directions(2, 3))
        EXPECT_EQ(torotomo::testing::max_coeff_diff(forward_subspace(f, as_subspace(v)), forward_direction(f, v)), 0.0);
}

TEST(Quadrature, Examples) {
    TorusField c(2, 1);
    c.set({0, 0}, 1.0);
    EXPECT_NEAR(std::abs(quadrature_line_integral(c, GeodesicSpec({0.3, 0.7}, primitive_reduce({1, 1})), 8) - 1.0), 0.0, 1e-15);

    const auto h = harmonic(2, 1, {1, 0});
    const auto z = quadrature_line_integral(h, GeodesicSpec({0.25, 0.0}, primitive_reduce({0, 1})), 4);
    EXPECT_NEAR(std::abs(z - Complex(0, 1)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(quadrature_line_integral(h, GeodesicSpec({0.25, 0.0}, primitive_reduce({1, 0})), 4)), 0.0, 1e-15);
}

TEST(Quadrature, AgreesWithFourierMultiplier) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto directions = enumerate_directions(2, 5);
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const int radius = 3 + static_cast<int>(seed % 4);
        const auto f = random_field(2, radius, seed);
        for (int trial = 0; trial < 12; ++trial) {
            const auto& v = directions[rng() % directions.size()];
            const std::vector<double> x{unit(rng), unit(rng)};
            const int nodes = 2 * radius * static_cast<int>(std::abs(v[0]) + std::abs(v[1])) + 1 + static_cast<int>(rng() % 5);
            const Complex quad = quadrature_line_integral(f, GeodesicSpec(x, v), nodes);
            const Complex multiplier = series_at(forward_direction(f, v), x);
            EXPECT_LT(std::abs(quad - multiplier), 1e-10);
            ++checked;
        }
    }
    EXPECT_GE(checked, 100);
}

TEST(Quadrature, PlanesInThreeDimensions) {
    const int radius = 2;
    const auto f = random_field(3, radius, 77);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (const auto& a : truncated_grassmannian(2, 3, 1)) {
        const std::vector<double> x{unit(rng), unit(rng), unit(rng)};
        std::int64_t l1 = 0;
        for (int i = 0; i < a.dim(); ++i) {
            std::int64_t s = 0;
            for (auto c : a.row(i)) s += std::abs(c);
            l1 = std::max(l1, s);
        }
        const int nodes = static_cast<int>(2 * radius * l1 + 1);
        EXPECT_LT(std::abs(quadrature_line_integral(f, GeodesicSpec(x, a), nodes) - series_at(forward_subspace(f, a), x)), 1e-10)
            << a.serialize();
    }
}

TEST(Quadrature, TooCoarse) {
    const auto f = random_field(2, 3, 1);
    try {
        (void)quadrature_line_integral(f, GeodesicSpec({0.0, 0.0}, primitive_reduce({1, 2})), 18);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::QuadratureTooCoarse);
    }
    EXPECT_NO_THROW((void)quadrature_line_integral(f, GeodesicSpec({0.0, 0.0}, primitive_reduce({1, 2})), 19));
    EXPECT_THROW(GeodesicSpec({1.0, 0.0}, primitive_reduce({1, 0})), Error);
}

TEST(Convention, Rescale) {
    const auto v = primitive_reduce({1, 1});
    const Complex arc = rescale_convention(1.0, v, Convention::ArcLength);
    EXPECT_NEAR(arc.real(), std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(std::abs(rescale_convention(arc, v, Convention::PeriodOne) - 1.0), 0.0, 1e-15);
}

TEST(ForwardSinogram, Examples) {
    const int radius = 2;
    const auto dirs = direction_cover(radius);
    const auto zero = forward_sinogram(TorusField(2, radius), dirs);
    EXPECT_EQ(zero.mean(), Complex{});
    for (const auto& s : zero.slices())
        for (const auto& e : s) EXPECT_EQ(e.value, Complex{});

    const auto h = harmonic(2, radius, {1, 2});
    const auto g = forward_sinogram(h, dirs);
    int nonzero = 0;
    for (std::size_t m = 0; m < g.size(); ++m) {
        for (const auto& e : g.slice(m))
            if (e.value != Complex{}) {
                ++nonzero;
                EXPECT_EQ(g.family()->members()[m], as_subspace(primitive_reduce({2, -1})));
            }
    }
    EXPECT_EQ(nonzero, 1);

    TorusField c(2, radius);
    c.set({0, 0}, 4.0);
    EXPECT_EQ(forward_sinogram(c, dirs).mean(), Complex(4.0));
}

TEST(ForwardSinogram, SliceFieldMatchesSingleDirection) {
    const auto f = random_field(2, 4, 8);
    const auto g = forward_sinogram(f, direction_cover(4));
    const auto& fam = *g.family();
    for (std::size_t m = 0; m < fam.size(); ++m) {
        const auto& a = fam[m];
        EXPECT_LT(torotomo::testing::max_coeff_diff(g.slice_field(m), forward_subspace(f, a)), 1e-15);
    }
}

TEST(RangeDefect, DetectsInconsistentData) {
    const auto f = random_field(2, 4, 9);
    auto g = forward_sinogram(f, direction_cover(4));
    EXPECT_EQ(range_defect(g), 0.0);
    EXPECT_TRUE(in_range(g));

    // An entry off the support of its slice.
    const auto& fam = *g.family();
    const auto sup = fam.support(0);
    std::uint32_t off = 0;
    while (off == fam.band().zero_index() || std::binary_search(sup.begin(), sup.end(), off)) ++off;
    auto s = g.slice(0);
    s.push_back({off, 0.5});
    std::sort(s.begin(), s.end(), [](const auto& a, const auto& b) { return a.k < b.k; });
    auto h = g;
    h.set_slice(0, s);
    EXPECT_NEAR(range_defect(h), 0.5, 1e-15);
}

TEST(RangeDefect, DetectsDisagreementAcrossLines) {
    // Lines in T^3 share frequencies, so slices must agree on them.
    const auto w = covering_family(1, 3, 2, 2);
    const auto f = random_field(3, 2, 4);
    const auto g = forward_sinogram(f, w);
    EXPECT_EQ(range_defect(g), 0.0);
    const auto k = g.family()->band().index(IntVec{0, 0, 1});
    const auto om = g.family()->omega(k);
    ASSERT_GE(om.size(), 2u);
    auto s = g.slice(om[0]);
    for (auto& e : s)
        if (e.k == k) e.value += 0.25;
    auto h = g;
    h.set_slice(om[0], s);
    EXPECT_NEAR(range_defect(h), 0.25, 1e-15);
}
