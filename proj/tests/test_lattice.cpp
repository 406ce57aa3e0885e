#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <set>

#include "torotomo/lattice.hpp"

using namespace torotomo;

namespace {

// Brute-force reference: every vector in the box, divided by its gcd and
// sign-normalised by hand, collected in a set.
std::set<IntVec> brute_force_directions(int n, std::int64_t h) {
    std::set<IntVec> out;
    IntVec v(static_cast<std::size_t>(n), -h);
    for (;;) {
        std::int64_t g = 0;
        for (auto x : v) g = std::gcd(g, x);
        if (g != 0) {
            IntVec r = v;
            for (auto& x : r) x /= g;
            for (auto x : r) {
                if (x == 0) continue;
                if (x < 0)
                    for (auto& y : r) y = -y;
                break;
            }
            out.insert(r);
        }
        int i = n - 1;
        while (i >= 0 && v[static_cast<std::size_t>(i)] == h) v[static_cast<std::size_t>(i--)] = -h;
        if (i < 0) break;
        ++v[static_cast<std::size_t>(i)];
    }
    return out;
}

IntVec as_vec(const RationalSubspace& a) { return a.basis(); }

}  // namespace

TEST(PrimitiveReduce, Examples) {
    EXPECT_EQ(primitive_reduce({4, 6}).vec(), (IntVec{2, 3}));
    EXPECT_EQ(primitive_reduce({0, -5}).vec(), (IntVec{0, 1}));
    EXPECT_EQ(primitive_reduce({3, 5}).vec(), (IntVec{3, 5}));
    EXPECT_EQ(primitive_reduce({-6, 4, 0}).vec(), (IntVec{3, -2, 0}));
}

TEST(PrimitiveReduce, ZeroVectorRejected) {
    try {
        (void)primitive_reduce({0, 0});
        FAIL() << "expected ZeroVector";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ZeroVector);
    }
}

TEST(PrimitiveReduce, IdempotentOnRandomVectors) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::int64_t> dist(-50, 50);
    for (int trial = 0; trial < 500; ++trial) {
        IntVec v{dist(rng), dist(rng), dist(rng)};
        if (is_zero(v)) continue;
        const auto once = primitive_reduce(v);
        EXPECT_EQ(primitive_reduce(once.vec()), once);
        // Same line: v is an integer multiple of the reduced vector.
        std::int64_t g = 0;
        for (auto x : v) g = std::gcd(g, x);
        IntVec scaled = once.vec();
        for (auto& x : scaled) x *= g;
        IntVec neg = scaled;
        for (auto& x : neg) x = -x;
        EXPECT_TRUE(scaled == v || neg == v);
    }
}

TEST(OrthogonalPrimitive, Examples) {
    EXPECT_EQ(orthogonal_primitive(IntVec{1, 2}).vec(), (IntVec{2, -1}));
    EXPECT_EQ(orthogonal_primitive(IntVec{2, 4}).vec(), (IntVec{2, -1}));
    EXPECT_EQ(orthogonal_primitive(IntVec{0, 3}).vec(), (IntVec{1, 0}));
    EXPECT_THROW((void)orthogonal_primitive(IntVec{0, 0}), Error);
}

TEST(OrthogonalPrimitive, ExactlyOrthogonal) {
    for (std::int64_t a = -20; a <= 20; ++a)
        for (std::int64_t b = -20; b <= 20; ++b) {
            if (a == 0 && b == 0) continue;
            const IntVec k{a, b};
            EXPECT_EQ(dot(k, orthogonal_primitive(k).vec()), 0);
        }
}

TEST(EnumerateDirections, MatchesBruteForce) {
    const auto h1 = enumerate_directions(2, 1);
    ASSERT_EQ(h1.size(), 4u);
    EXPECT_EQ(h1[0].vec(), (IntVec{0, 1}));
    EXPECT_EQ(h1[1].vec(), (IntVec{1, -1}));
    EXPECT_EQ(h1[2].vec(), (IntVec{1, 0}));
    EXPECT_EQ(h1[3].vec(), (IntVec{1, 1}));

    const auto h2 = enumerate_directions(2, 2);
    EXPECT_EQ(h2.size(), 8u);
    EXPECT_EQ(enumerate_directions(3, 1).size(), 13u);

    for (int n = 1; n <= 3; ++n)
        for (std::int64_t h = 1; h <= 4; ++h) {
            const auto got = enumerate_directions(n, h);
            const auto want = brute_force_directions(n, h);
            std::set<IntVec> got_set;
            for (const auto& v : got) got_set.insert(v.vec());
            EXPECT_EQ(got_set, want) << "n=" << n << " H=" << h;
            EXPECT_EQ(got.size(), want.size()) << "duplicates for n=" << n << " H=" << h;
            EXPECT_TRUE(std::is_sorted(got.begin(), got.end()));
        }
}

TEST(CanonicalizeSubspace, Examples) {
    const auto a = canonicalize_subspace({{2, 0, 0}, {0, 1, 0}}, 2);
    EXPECT_EQ(as_vec(a), (IntVec{1, 0, 0, 0, 1, 0}));
    const auto b = canonicalize_subspace({{0, 1, 0}, {1, 0, 0}}, 2);
    EXPECT_EQ(a, b);
    EXPECT_EQ(as_vec(canonicalize_subspace({{1, 1}}, 1)), (IntVec{1, 1}));
    EXPECT_EQ(as_vec(canonicalize_subspace({{-3, 6}}, 1)), (IntVec{1, -2}));
}

TEST(CanonicalizeSubspace, SaturatesNonPrimitiveLattices) {
    // span{(1,1,0),(1,-1,0)} has index 2 in its saturation, the xy-plane.
    const auto a = canonicalize_subspace({{1, 1, 0}, {1, -1, 0}}, 2);
    EXPECT_EQ(as_vec(a), (IntVec{1, 0, 0, 0, 1, 0}));
    // Redundant rows are fine as long as the rank matches.
    const auto b = canonicalize_subspace({{2, 4, 6}, {1, 2, 3}, {3, 6, 9}}, 1);
    EXPECT_EQ(as_vec(b), (IntVec{1, 2, 3}));
}

TEST(CanonicalizeSubspace, RankMismatch) {
    try {
        (void)canonicalize_subspace({{1, 2, 3}, {2, 4, 6}}, 2);
        FAIL() << "expected RankMismatch";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::RankMismatch);
    }
}

TEST(CanonicalizeSubspace, InvariantUnderUnimodularMixing) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::int64_t> entry(-6, 6);
    std::uniform_int_distribution<int> pick(0, 2);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 4, d = 1 + trial % 3;
        std::vector<IntVec> rows(static_cast<std::size_t>(d), IntVec(n));
        for (auto& r : rows)
            for (auto& x : r) x = entry(rng);
        RationalSubspace base = [&] {
            try {
                return canonicalize_subspace(rows, d);
            } catch (const Error&) {
                return canonicalize_subspace({{1, 0, 0, 0}}, 1);
            }
        }();
        if (base.dim() != d) continue;
        // Random product of elementary unimodular operations.
        auto mixed = rows;
        for (int step = 0; step < 12; ++step) {
            const auto i = static_cast<std::size_t>(pick(rng) % d);
            const auto j = static_cast<std::size_t>((i + 1 + static_cast<std::size_t>(pick(rng))) % static_cast<std::size_t>(d));
            const auto q = entry(rng);
            if (i != j)
                for (int c = 0; c < n; ++c) mixed[i][static_cast<std::size_t>(c)] += q * mixed[j][static_cast<std::size_t>(c)];
            if (pick(rng) == 0)
                for (auto& x : mixed[i]) x = -x;
            if (d > 1 && pick(rng) == 1) std::swap(mixed[i], mixed[j]);
        }
        EXPECT_EQ(canonicalize_subspace(mixed, d), base);
    }
}

TEST(SubspaceSerialization, RoundTrip) {
    const auto a = canonicalize_subspace({{1, 0, -1}, {0, 1, -1}}, 2);
    EXPECT_EQ(a.serialize(), "2 3; 1 0 -1; 0 1 -1");
    EXPECT_EQ(parse_subspace(a.serialize()), a);
    EXPECT_EQ(primitive_reduce({2, -1}).serialize(), "2,-1");
    EXPECT_EQ(parse_direction("2,-1"), primitive_reduce({2, -1}));
    EXPECT_THROW((void)parse_subspace("2 3; 1 0"), Error);
}

TEST(OmegaK, Examples) {
    const auto line = omega_k({1, 2}, 1, 2, 2);
    ASSERT_EQ(line.size(), 1u);
    EXPECT_EQ(as_vec(line[0]), (IntVec{2, -1}));

    const auto plane = omega_k({1, 1, 1}, 2, 3, 1);
    ASSERT_EQ(plane.size(), 1u);
    EXPECT_EQ(as_vec(plane[0]), (IntVec{1, 0, -1, 0, 1, -1}));

    const auto lines = omega_k({0, 0, 1}, 1, 3, 1);
    ASSERT_EQ(lines.size(), 4u);
    EXPECT_EQ(as_vec(lines[0]), (IntVec{0, 1, 0}));
    EXPECT_EQ(as_vec(lines[1]), (IntVec{1, -1, 0}));
    EXPECT_EQ(as_vec(lines[2]), (IntVec{1, 0, 0}));
    EXPECT_EQ(as_vec(lines[3]), (IntVec{1, 1, 0}));
}

TEST(OmegaK, HyperplaneAppearsOnceHeightAllows) {
    const IntVec k{3, 5, 7};
    const auto perp = orthogonal_hyperplane(k);
    EXPECT_TRUE(omega_k(k, 2, 3, perp.height() - 1).empty());
    const auto hit = omega_k(k, 2, 3, perp.height());
    ASSERT_EQ(hit.size(), 1u);
    EXPECT_EQ(hit[0], perp);
}

TEST(OmegaK, GeneralPathMatchesPairEnumeration) {
    // Oracle: all independent pairs from the box, canonicalised, filtered by height.
    for (const IntVec& k : {IntVec{0, 0, 0}, IntVec{1, 1, 1}, IntVec{1, 2, 0}}) {
        const std::int64_t h = 1;
        std::vector<IntVec> box;
        for (std::int64_t a = -h; a <= h; ++a)
            for (std::int64_t b = -h; b <= h; ++b)
                for (std::int64_t c = -h; c <= h; ++c) {
                    IntVec v{a, b, c};
                    if (!is_zero(v) && dot(v, k) == 0) box.push_back(v);
                }
        std::set<IntVec> want;
        for (std::size_t i = 0; i < box.size(); ++i)
            for (std::size_t j = i + 1; j < box.size(); ++j) {
                const auto& u = box[i];
                const auto& v = box[j];
                const IntVec cross{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
                if (is_zero(cross)) continue;
                const auto a = canonicalize_subspace({u, v}, 2);
                if (a.height() <= h) want.insert(a.basis());
            }
        std::set<IntVec> got;
        for (const auto& a : omega_k(k, 2, 3, h)) {
            EXPECT_TRUE(a.orthogonal_to(k));
            got.insert(a.basis());
        }
        EXPECT_EQ(got, want);
    }
}

TEST(OmegaK, RowsOrthogonalExactly) {
    for (std::int64_t a = -3; a <= 3; ++a)
        for (std::int64_t b = -3; b <= 3; ++b)
            for (std::int64_t c = -3; c <= 3; ++c) {
                const IntVec k{a, b, c};
                for (const auto& s : omega_k(k, 1, 3, 2)) EXPECT_TRUE(s.orthogonal_to(k));
                if (!is_zero(k))
                    for (const auto& s : omega_k(k, 2, 3, 6)) {
                        EXPECT_EQ(dot(s.row(0), k), 0);
                        EXPECT_EQ(dot(s.row(1), k), 0);
                    }
            }
}

TEST(DirectionCover, Examples) {
    EXPECT_EQ(direction_cover(0), std::vector<PrimitiveDirection>{primitive_reduce({1, 0})});
    const auto r1 = direction_cover(1);
    ASSERT_EQ(r1.size(), 4u);
    std::set<IntVec> want{{0, 1}, {1, 0}, {1, 1}, {1, -1}};
    std::set<IntVec> got;
    for (const auto& v : r1) got.insert(v.vec());
    EXPECT_EQ(got, want);
    EXPECT_EQ(direction_cover(2).size(), 8u);
}

TEST(DirectionCover, ExhaustivelyCovers) {
    for (std::int64_t r = 0; r <= 12; ++r) {
        const auto cover = direction_cover(r);
        for (std::int64_t a = -r; a <= r; ++a)
            for (std::int64_t b = -r; b <= r; ++b) {
                if (a == 0 && b == 0) continue;
                const IntVec k{a, b};
                const bool hit = std::any_of(cover.begin(), cover.end(), [&](const auto& v) { return dot(v.vec(), k) == 0; });
                EXPECT_TRUE(hit) << "R=" << r << " k=(" << a << "," << b << ")";
            }
    }
}
