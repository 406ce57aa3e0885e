#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "torotomo/family.hpp"
#include "torotomo/sinogram.hpp"
#include "torotomo/torus_field.hpp"

namespace torotomo {

/// Base point x in [0,1)^n and the integer generators of a closed geodesic
/// (one primitive direction) or periodic d-plane (a canonical basis).
/// Parameters run over [0,1]^d, so each generator is traversed exactly once.
class GeodesicSpec {
public:
    GeodesicSpec(std::vector<double> x, const PrimitiveDirection& v) : x_(std::move(x)), generators_{v.vec()} { check(); }
    GeodesicSpec(std::vector<double> x, const RationalSubspace& a) : x_(std::move(x)) {
        for (int i = 0; i < a.dim(); ++i) generators_.emplace_back(a.row(i).begin(), a.row(i).end());
        check();
    }

    [[nodiscard]] const std::vector<double>& base() const noexcept { return x_; }
    [[nodiscard]] const std::vector<IntVec>& generators() const noexcept { return generators_; }

private:
    void check() const {
        for (double c : x_)
            if (!(c >= 0.0 && c < 1.0)) throw Error(ErrorKind::BadParams, "base point components must lie in [0,1)");
        for (const auto& g : generators_)
            if (g.size() != x_.size()) throw Error(ErrorKind::DimensionMismatch, "generator and base point dimensions differ");
    }

    std::vector<double> x_;
    std::vector<IntVec> generators_;
};

/// R_{d,A} f: keeps f(k) where k is orthogonal to A, zero elsewhere.
inline TorusField forward_subspace(const TorusField& f, const RationalSubspace& a) {
    if (a.ambient_dim() != f.dim()) throw Error(ErrorKind::DimensionMismatch, "subspace and field dimensions differ");
    TorusField out(f.band(), std::vector<Complex>(f.band().size()), f.is_real());
    const auto& band = f.band();
    for (std::size_t i = 0; i < band.size(); ++i)
        if (a.orthogonal_to(band.frequency(i))) out.coeffs()[i] = f.coeffs()[i];
    return out;
}

/// I_v f in the period-1 convention: f(k) survives iff k . v = 0.
inline TorusField forward_direction(const TorusField& f, const PrimitiveDirection& v) {
    if (v.size() != static_cast<std::size_t>(f.dim())) throw Error(ErrorKind::DimensionMismatch, "direction and field dimensions differ");
    return forward_subspace(f, as_subspace(v));
}

/// Tensor midpoint rule for the parameter integral over [0,1]^d. Exact for
/// band-limited integrands once N_q > 2 K |v_i|_1 on every generator.
inline Complex quadrature_line_integral(const TorusField& f, const GeodesicSpec& spec, int nodes) {
    if (static_cast<int>(spec.base().size()) != f.dim())
        throw Error(ErrorKind::DimensionMismatch, "geodesic and field dimensions differ");
    for (const auto& g : spec.generators()) {
        std::int64_t l1 = 0;
        for (auto x : g) l1 += x < 0 ? -x : x;
        if (static_cast<std::int64_t>(nodes) <= 2 * f.radius() * l1)
            throw Error(ErrorKind::QuadratureTooCoarse, "need more than " + std::to_string(2 * f.radius() * l1) + " nodes");
    }
    const auto d = spec.generators().size();
    const auto n = spec.base().size();
    std::vector<int> idx(d, 0);
    std::vector<double> point(n);
    Complex acc{};
    for (;;) {
        for (std::size_t c = 0; c < n; ++c) {
            double p = spec.base()[c];
            for (std::size_t g = 0; g < d; ++g)
                p += (idx[g] + 0.5) / nodes * static_cast<double>(spec.generators()[g][c]);
            point[c] = p - std::floor(p);
        }
        acc += evaluate(f, point);
        std::size_t g = 0;
        while (g < d && ++idx[g] == nodes) idx[g++] = 0;
        if (g == d) break;
    }
    return acc / std::pow(static_cast<double>(nodes), static_cast<double>(d));
}

/// Batched forward map into the data space: one slice per family member,
/// k = 0 stripped from the slices and stored once as the shared mean.
inline TorusSinogram forward_sinogram(const TorusField& f, const FamilyPtr& family) {
    if (!family) throw Error(ErrorKind::BadParams, "empty family");
    if (!(family->band() == f.band())) throw Error(ErrorKind::DimensionMismatch, "family band differs from field band");
    std::vector<SliceData> slices(family->size());
    for (std::size_t m = 0; m < family->size(); ++m) {
        const auto sup = family->support(m);
        auto& s = slices[m];
        s.reserve(sup.size());
        for (auto k : sup) s.push_back({k, f.coeffs()[k]});
    }
    return TorusSinogram(family, f.mean(), std::move(slices));
}

inline TorusSinogram forward_sinogram(const TorusField& f, const std::vector<PrimitiveDirection>& directions) {
    return forward_sinogram(f, family_from_directions(directions, f.radius()));
}

enum class Convention { PeriodOne, ArcLength };

/// Period-1 data equal |v|^{-1} times arc-length data.
inline Complex rescale_convention(Complex value, const PrimitiveDirection& v, Convention target) {
    const double len = v.euclidean_norm();
    return target == Convention::ArcLength ? value * len : value / len;
}

}  // namespace torotomo
