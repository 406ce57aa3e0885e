#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "torotomo/error.hpp"

namespace torotomo {

using IntVec = std::vector<std::int64_t>;

/// A frequency k in Z^n.
using FrequencyIndex = IntVec;

inline std::int64_t dot(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
    if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "dot product of vectors with different lengths");
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

inline std::int64_t sup_norm(std::span<const std::int64_t> v) {
    std::int64_t m = 0;
    for (auto x : v) m = std::max(m, x < 0 ? -x : x);
    return m;
}

inline bool is_zero(std::span<const std::int64_t> v) {
    return std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x == 0; });
}

namespace detail {

using BigInt = boost::multiprecision::cpp_int;

template <class Int>
using IntMatrix = std::vector<std::vector<Int>>;

template <class Int>
Int abs_value(const Int& a) {
    return a < 0 ? Int(-a) : a;
}

template <class Int>
Int floor_div(const Int& a, const Int& b) {
    Int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
    return q;
}

/// Row-style Hermite normal form, in place. Pivots are positive, entries above
/// a pivot lie in [0, pivot), zero rows collect at the bottom. Every row
/// operation is mirrored on `transform` when given. Returns the rank.
template <class Int>
std::size_t row_hnf(IntMatrix<Int>& a, IntMatrix<Int>* transform = nullptr) {
    const std::size_t m = a.size();
    if (m == 0) return 0;
    const std::size_t n = a[0].size();

    auto axpy = [&](std::size_t dst, std::size_t src, const Int& q) {
        for (std::size_t c = 0; c < n; ++c) a[dst][c] -= q * a[src][c];
        if (transform) {
            auto& t = *transform;
            for (std::size_t c = 0; c < t[dst].size(); ++c) t[dst][c] -= q * t[src][c];
        }
    };
    auto swap_rows = [&](std::size_t i, std::size_t j) {
        if (i == j) return;
        std::swap(a[i], a[j]);
        if (transform) std::swap((*transform)[i], (*transform)[j]);
    };
    auto negate = [&](std::size_t i) {
        for (auto& x : a[i]) x = -x;
        if (transform)
            for (auto& x : (*transform)[i]) x = -x;
    };

    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        for (;;) {
            std::size_t best = m;
            for (std::size_t i = r; i < m; ++i) {
                if (a[i][c] == 0) continue;
                if (best == m || abs_value(a[i][c]) < abs_value(a[best][c])) best = i;
            }
            if (best == m) break;
            swap_rows(r, best);
            bool reduced = true;
            for (std::size_t i = r + 1; i < m; ++i) {
                if (a[i][c] == 0) continue;
                axpy(i, r, floor_div(a[i][c], a[r][c]));
                if (a[i][c] != 0) reduced = false;
            }
            if (reduced) break;
        }
        if (a[r][c] == 0) continue;
        if (a[r][c] < 0) negate(r);
        for (std::size_t j = 0; j < r; ++j) {
            Int q = floor_div(a[j][c], a[r][c]);
            if (q != 0) axpy(j, r, q);
        }
        ++r;
    }
    return r;
}

/// Basis (as rows) of {x in Z^n : M x = 0}. The result is saturated because it
/// is read off a unimodular transform.
template <class Int>
IntMatrix<Int> integer_kernel(const IntMatrix<Int>& mat, std::size_t n) {
    IntMatrix<Int> transposed(n, std::vector<Int>(mat.size()));
    for (std::size_t i = 0; i < mat.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) transposed[j][i] = mat[i][j];
    IntMatrix<Int> t(n, std::vector<Int>(n, Int(0)));
    for (std::size_t i = 0; i < n; ++i) t[i][i] = 1;
    const std::size_t rank = mat.empty() ? 0 : row_hnf(transposed, &t);
    return IntMatrix<Int>(t.begin() + static_cast<std::ptrdiff_t>(rank), t.end());
}

inline std::int64_t to_int64(const BigInt& x) {
    if (x > std::numeric_limits<std::int64_t>::max() || x < std::numeric_limits<std::int64_t>::min())
        throw Error(ErrorKind::ParamViolation, "canonical basis entry exceeds 64-bit range");
    return static_cast<std::int64_t>(x);
}

struct SubspaceAccess;

}  // namespace detail

/// Canonical representative of a rational line: coprime entries, first
/// nonzero entry positive.
class PrimitiveDirection {
public:
    [[nodiscard]] const IntVec& vec() const noexcept { return v_; }
    [[nodiscard]] std::size_t size() const noexcept { return v_.size(); }
    [[nodiscard]] std::int64_t operator[](std::size_t i) const { return v_[i]; }

    [[nodiscard]] double euclidean_norm() const {
        double s = 0;
        for (auto x : v_) s += static_cast<double>(x) * static_cast<double>(x);
        return std::sqrt(s);
    }

    /// Comma-separated integers, e.g. "2,-1".
    [[nodiscard]] std::string serialize() const {
        std::string out;
        for (std::size_t i = 0; i < v_.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(v_[i]);
        }
        return out;
    }

    friend auto operator<=>(const PrimitiveDirection&, const PrimitiveDirection&) = default;
    friend bool operator==(const PrimitiveDirection&, const PrimitiveDirection&) = default;

    friend PrimitiveDirection primitive_reduce(std::span<const std::int64_t> v);

private:
    explicit PrimitiveDirection(IntVec v) : v_(std::move(v)) {}
    IntVec v_;
};

inline PrimitiveDirection primitive_reduce(std::span<const std::int64_t> v) {
    if (v.empty() || is_zero(v)) throw Error(ErrorKind::ZeroVector, "cannot reduce the zero vector");
    std::int64_t g = 0;
    for (auto x : v) g = std::gcd(g, x);
    IntVec out(v.begin(), v.end());
    const auto first = *std::find_if(out.begin(), out.end(), [](std::int64_t x) { return x != 0; });
    const std::int64_t scale = first < 0 ? -g : g;
    for (auto& x : out) x /= scale;
    return PrimitiveDirection(std::move(out));
}

inline PrimitiveDirection primitive_reduce(std::initializer_list<std::int64_t> v) {
    return primitive_reduce(std::span<const std::int64_t>(v.begin(), v.size()));
}

inline PrimitiveDirection parse_direction(std::string_view text) {
    IntVec v;
    std::string token;
    std::stringstream ss{std::string(text)};
    while (std::getline(ss, token, ',')) {
        try {
            v.push_back(std::stoll(token));
        } catch (const std::exception&) {
            throw Error(ErrorKind::BadParams, "malformed direction '" + std::string(text) + "'");
        }
    }
    return primitive_reduce(v);
}

/// The rotation (-k2, k1) reduced to canonical form; orthogonal to k.
inline PrimitiveDirection orthogonal_primitive(std::span<const std::int64_t> k) {
    if (k.size() != 2) throw Error(ErrorKind::DimensionMismatch, "orthogonal_primitive is defined for n = 2");
    const IntVec rotated{-k[1], k[0]};
    return primitive_reduce(rotated);
}

/// Element of Gr(d, n) stored as the Hermite normal form of its saturated
/// integer lattice, so value equality is subspace equality.
class RationalSubspace {
public:
    [[nodiscard]] int ambient_dim() const noexcept { return n_; }
    [[nodiscard]] int dim() const noexcept { return d_; }
    [[nodiscard]] const IntVec& basis() const noexcept { return basis_; }

    [[nodiscard]] std::span<const std::int64_t> row(int i) const {
        return {basis_.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(n_), static_cast<std::size_t>(n_)};
    }

    /// Max absolute entry of the canonical basis.
    [[nodiscard]] std::int64_t height() const { return sup_norm(basis_); }

    [[nodiscard]] bool orthogonal_to(std::span<const std::int64_t> k) const {
        for (int i = 0; i < d_; ++i) {
            const auto r = row(i);
            std::int64_t acc = 0;
            for (int j = 0; j < n_; ++j) acc += r[static_cast<std::size_t>(j)] * k[static_cast<std::size_t>(j)];
            if (acc != 0) return false;
        }
        return true;
    }

    /// `d n; row1; row2; ...`
    [[nodiscard]] std::string serialize() const {
        std::string out = std::to_string(d_) + " " + std::to_string(n_);
        for (int i = 0; i < d_; ++i) {
            out += ";";
            for (auto x : row(i)) out += " " + std::to_string(x);
        }
        return out;
    }

    friend auto operator<=>(const RationalSubspace& a, const RationalSubspace& b) {
        if (auto c = a.n_ <=> b.n_; c != 0) return c;
        if (auto c = a.d_ <=> b.d_; c != 0) return c;
        return a.basis_ <=> b.basis_;
    }
    friend bool operator==(const RationalSubspace&, const RationalSubspace&) = default;

private:
    friend struct detail::SubspaceAccess;
    RationalSubspace(int n, int d, IntVec basis) : n_(n), d_(d), basis_(std::move(basis)) {}

    int n_ = 0;
    int d_ = 0;
    IntVec basis_;
};

namespace detail {
struct SubspaceAccess {
    static RationalSubspace make(int n, int d, IntVec basis) { return RationalSubspace(n, d, std::move(basis)); }
};
}  // namespace detail

inline RationalSubspace canonicalize_subspace(const std::vector<IntVec>& rows, int d) {
    using detail::BigInt;
    if (rows.empty()) throw Error(ErrorKind::RankMismatch, "no rows given");
    const std::size_t n = rows.front().size();
    if (n == 0) throw Error(ErrorKind::DimensionMismatch, "rows have zero length");
    detail::IntMatrix<BigInt> m;
    for (const auto& r : rows) {
        if (r.size() != n) throw Error(ErrorKind::DimensionMismatch, "rows have different lengths");
        m.emplace_back(r.begin(), r.end());
    }
    const std::size_t rank = detail::row_hnf(m);
    if (rank != static_cast<std::size_t>(d))
        throw Error(ErrorKind::RankMismatch,
                    "rank " + std::to_string(rank) + " does not match requested dimension " + std::to_string(d));
    m.resize(rank);
    auto saturated = detail::integer_kernel(detail::integer_kernel(m, n), n);
    detail::row_hnf(saturated);
    IntVec basis;
    basis.reserve(static_cast<std::size_t>(d) * n);
    for (const auto& r : saturated)
        for (const auto& x : r) basis.push_back(detail::to_int64(x));
    return detail::SubspaceAccess::make(static_cast<int>(n), d, std::move(basis));
}

inline RationalSubspace as_subspace(const PrimitiveDirection& v) {
    // A primitive vector with positive leading entry is already its own HNF.
    return detail::SubspaceAccess::make(static_cast<int>(v.size()), 1, v.vec());
}

/// The hyperplane k^perp in Gr(n-1, n).
inline RationalSubspace orthogonal_hyperplane(std::span<const std::int64_t> k) {
    if (is_zero(k)) throw Error(ErrorKind::ZeroVector, "k^perp is undefined for k = 0");
    detail::IntMatrix<detail::BigInt> row{std::vector<detail::BigInt>(k.begin(), k.end())};
    const auto kernel = detail::integer_kernel(row, k.size());
    std::vector<IntVec> rows;
    for (const auto& r : kernel) {
        IntVec v;
        for (const auto& x : r) v.push_back(detail::to_int64(x));
        rows.push_back(std::move(v));
    }
    return canonicalize_subspace(rows, static_cast<int>(k.size()) - 1);
}

inline RationalSubspace parse_subspace(std::string_view text) {
    std::vector<std::string> parts;
    {
        std::stringstream ss{std::string(text)};
        std::string p;
        while (std::getline(ss, p, ';')) parts.push_back(p);
    }
    auto fail = [&] { return Error(ErrorKind::BadParams, "malformed subspace '" + std::string(text) + "'"); };
    if (parts.empty()) throw fail();
    int d = 0, n = 0;
    {
        std::istringstream head(parts[0]);
        if (!(head >> d >> n) || d < 1 || n < 1) throw fail();
    }
    if (parts.size() != static_cast<std::size_t>(d) + 1) throw fail();
    std::vector<IntVec> rows;
    for (std::size_t i = 1; i < parts.size(); ++i) {
        std::istringstream rs(parts[i]);
        IntVec r;
        std::int64_t x;
        while (rs >> x) r.push_back(x);
        if (r.size() != static_cast<std::size_t>(n)) throw fail();
        rows.push_back(std::move(r));
    }
    return canonicalize_subspace(rows, d);
}

/// Canonical primitive vectors with |v|_inf <= H in lexicographic order.
inline std::vector<PrimitiveDirection> enumerate_directions(int n, std::int64_t height) {
    if (n < 1 || height < 1) throw Error(ErrorKind::BadParams, "enumerate_directions needs n >= 1 and H >= 1");
    std::vector<PrimitiveDirection> out;
    IntVec v(static_cast<std::size_t>(n), -height);
    for (;;) {
        const auto first = std::find_if(v.begin(), v.end(), [](std::int64_t x) { return x != 0; });
        if (first != v.end() && *first > 0) {
            std::int64_t g = 0;
            for (auto x : v) g = std::gcd(g, x);
            if (g == 1) out.push_back(primitive_reduce(v));
        }
        int i = n - 1;
        while (i >= 0 && v[static_cast<std::size_t>(i)] == height) v[static_cast<std::size_t>(i--)] = -height;
        if (i < 0) break;
        ++v[static_cast<std::size_t>(i)];
    }
    return out;
}

namespace detail {

// Enumerates d x n integer matrices in HNF shape whose rows are drawn from
// `candidates`, keeping the saturated ones.
inline void enumerate_hnf(const std::vector<IntVec>& candidates, int d, int n, std::vector<IntVec>& rows,
                          std::vector<int>& pivots, std::vector<RationalSubspace>& out) {
    const auto depth = static_cast<int>(rows.size());
    if (depth == d) {
        IntVec flat;
        for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
        const auto canon = canonicalize_subspace(rows, d);
        if (canon.basis() == flat) out.push_back(canon);
        return;
    }
    const int min_pivot = depth == 0 ? 0 : pivots.back() + 1;
    for (const auto& c : candidates) {
        const auto lead = std::find_if(c.begin(), c.end(), [](std::int64_t x) { return x != 0; });
        const auto p = static_cast<int>(lead - c.begin());
        if (p < min_pivot || p > n - (d - depth) || *lead <= 0) continue;
        bool reduced = true;
        for (const auto& prev : rows) {
            const auto e = prev[static_cast<std::size_t>(p)];
            if (e < 0 || e >= *lead) {
                reduced = false;
                break;
            }
        }
        if (!reduced) continue;
        rows.push_back(c);
        pivots.push_back(p);
        enumerate_hnf(candidates, d, n, rows, pivots, out);
        rows.pop_back();
        pivots.pop_back();
    }
}

}  // namespace detail

/// Subspaces A in Gr(d, n) with k orthogonal to A and canonical basis height
/// at most H, sorted. k = 0 yields the whole height-H truncation.
inline std::vector<RationalSubspace> omega_k(std::span<const std::int64_t> k, int d, int n, std::int64_t height) {
    if (static_cast<int>(k.size()) != n) throw Error(ErrorKind::DimensionMismatch, "frequency length differs from n");
    if (d < 1 || d > n - 1) throw Error(ErrorKind::BadParams, "need 1 <= d <= n-1");
    if (height < 1) throw Error(ErrorKind::BadParams, "need H >= 1");
    std::vector<RationalSubspace> out;
    const bool zero = is_zero(k);
    if (d == 1) {
        for (const auto& v : enumerate_directions(n, height))
            if (dot(v.vec(), k) == 0) out.push_back(as_subspace(v));
    } else if (d == n - 1 && !zero) {
        auto a = orthogonal_hyperplane(k);
        if (a.height() <= height) out.push_back(std::move(a));
    } else {
        std::vector<IntVec> candidates;
        IntVec v(static_cast<std::size_t>(n), -height);
        for (;;) {
            if (!is_zero(v) && dot(v, k) == 0) candidates.push_back(v);
            int i = n - 1;
            while (i >= 0 && v[static_cast<std::size_t>(i)] == height) v[static_cast<std::size_t>(i--)] = -height;
            if (i < 0) break;
            ++v[static_cast<std::size_t>(i)];
        }
        std::vector<IntVec> rows;
        std::vector<int> pivots;
        detail::enumerate_hnf(candidates, d, n, rows, pivots, out);
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<RationalSubspace> omega_k(std::initializer_list<std::int64_t> k, int d, int n, std::int64_t height) {
    return omega_k(std::span<const std::int64_t>(k.begin(), k.size()), d, n, height);
}

inline std::vector<RationalSubspace> truncated_grassmannian(int d, int n, std::int64_t height) {
    const IntVec zero(static_cast<std::size_t>(n), 0);
    return omega_k(zero, d, n, height);
}

/// Greedy set of directions on T^2 such that every 0 < |k|_inf <= R has an
/// orthogonal member. Picks the largest residual coverage first, ties broken
/// lexicographically; the result is returned sorted. Not minimal in general.
inline std::vector<PrimitiveDirection> direction_cover(std::int64_t radius) {
    if (radius < 0) throw Error(ErrorKind::BadParams, "cover radius must be nonnegative");
    if (radius == 0) return {primitive_reduce({1, 0})};

    const auto candidates = enumerate_directions(2, radius);
    std::vector<IntVec> band;
    for (std::int64_t a = -radius; a <= radius; ++a)
        for (std::int64_t b = -radius; b <= radius; ++b)
            if (a != 0 || b != 0) band.push_back({a, b});

    std::vector<std::vector<std::size_t>> covers(candidates.size());
    std::vector<std::vector<std::size_t>> covered_by(band.size());
    for (std::size_t c = 0; c < candidates.size(); ++c)
        for (std::size_t i = 0; i < band.size(); ++i)
            if (dot(candidates[c].vec(), band[i]) == 0) {
                covers[c].push_back(i);
                covered_by[i].push_back(c);
            }

    std::vector<std::size_t> residual(candidates.size());
    for (std::size_t c = 0; c < candidates.size(); ++c) residual[c] = covers[c].size();
    std::vector<bool> covered(band.size(), false);
    std::size_t remaining = band.size();
    std::vector<PrimitiveDirection> chosen;
    while (remaining > 0) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < candidates.size(); ++c)
            if (residual[c] > residual[best]) best = c;
        if (residual[best] == 0) break;
        chosen.push_back(candidates[best]);
        for (auto i : covers[best]) {
            if (covered[i]) continue;
            covered[i] = true;
            --remaining;
            for (auto c : covered_by[i]) --residual[c];
        }
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

}  // namespace torotomo
