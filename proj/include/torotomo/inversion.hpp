#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "torotomo/sinogram.hpp"
#include "torotomo/torus_field.hpp"
#include "torotomo/weight.hpp"

namespace torotomo {

/// Which axis integral recovers f(k) from slice data on T^2: `Second`
/// integrates I_v f(0, y) against exp(-2 pi i k_2 y), `First` integrates
/// I_v f(x, 0) against exp(-2 pi i k_1 x). `Auto` takes the axis with the
/// larger |k_i|, preferring `Second` on ties.
enum class RecoveryAxis { Auto, First, Second };

/// f(k) from a single slice g_v = I_v f with k . v = 0, by a one-dimensional
/// periodic midpoint rule on a coordinate axis through the origin.
inline Complex slice_reconstruct_coeff(const TorusField& slice, const PrimitiveDirection& v, std::span<const std::int64_t> k,
                                       int nodes, RecoveryAxis axis = RecoveryAxis::Auto) {
    if (slice.dim() != 2 || v.size() != 2 || k.size() != 2)
        throw Error(ErrorKind::DimensionMismatch, "slice reconstruction is defined on T^2");
    const std::int64_t l1 = std::abs(v[0]) + std::abs(v[1]);
    if (static_cast<std::int64_t>(nodes) <= 2 * slice.radius() * l1)
        throw Error(ErrorKind::QuadratureTooCoarse, "need more than " + std::to_string(2 * slice.radius() * l1) + " nodes");

    const bool zero = k[0] == 0 && k[1] == 0;
    if (!zero && dot(k, v.vec()) != 0) throw Error(ErrorKind::BadParams, "direction is not orthogonal to k");

    RecoveryAxis use = axis;
    if (zero) {
        // A line transversal to v sees every strand once.
        if (use == RecoveryAxis::Auto) use = v[0] != 0 ? RecoveryAxis::Second : RecoveryAxis::First;
        if ((use == RecoveryAxis::Second && v[0] == 0) || (use == RecoveryAxis::First && v[1] == 0))
            throw Error(ErrorKind::AxisDegenerate, "integration axis is parallel to the direction");
    } else {
        if (use == RecoveryAxis::Auto) use = std::abs(k[0]) > std::abs(k[1]) ? RecoveryAxis::First : RecoveryAxis::Second;
        if ((use == RecoveryAxis::Second && k[1] == 0) || (use == RecoveryAxis::First && k[0] == 0))
            throw Error(ErrorKind::AxisDegenerate, "selected axis component of k vanishes");
    }

    const std::size_t along = use == RecoveryAxis::Second ? 1 : 0;
    struct Term {
        std::int64_t freq;
        Complex value;
    };
    std::vector<Term> terms;
    const auto& band = slice.band();
    for (std::size_t i = 0; i < band.size(); ++i) {
        const auto c = slice.coeffs()[i];
        if (c == Complex{}) continue;
        terms.push_back({band.frequency(i)[along], c});
    }
    const std::int64_t target = k[along];
    Complex acc{};
    for (int j = 0; j < nodes; ++j) {
        const double t = (j + 0.5) / nodes;
        Complex value{};
        for (const auto& term : terms) value += term.value * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(term.freq) * t);
        acc += value * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(target) * t);
    }
    return acc / static_cast<double>(nodes);
}

namespace detail {
template <class WeightFn>
TorusField weighted_backprojection(const TorusSinogram& g, Complex zero_term, WeightFn&& weight_sq) {
    const auto& fam = *g.family();
    const auto& band = fam.band();
    TorusField f(band.dim(), band.radius());
    auto out = f.coeffs();
    out[band.zero_index()] = zero_term;
    for (std::size_t m = 0; m < g.size(); ++m) {
        const auto sup = fam.support(m);
        std::size_t j = 0;
        for (const auto& e : g.slice(m)) {
            while (j < sup.size() && sup[j] < e.k) ++j;
            if (j == sup.size()) break;
            if (sup[j] != e.k) continue;  // off-support entries are not seen by the adjoint
            out[e.k] += weight_sq(e.k, m) * e.value;
        }
    }
    return f;
}
}  // namespace detail

/// R_d^* g with coefficients sum_{A in Omega_k} w(k, A)^2 g(k, A); the k = 0
/// coefficient is W_0 times the shared mean.
inline TorusField adjoint(const TorusSinogram& g, const WeightRule& w) {
    detail::require_weight_family(g, w);
    const auto zero = g.band().zero_index();
    return detail::weighted_backprojection(g, w.normal(zero) * g.mean(), [&](std::size_t k, std::size_t m) {
        const double x = w.weight(k, m);
        return x * x;
    });
}

/// The symbol W_k of the normal operator R_d^* R_d.
inline double normal_multiplier(const WeightRule& w, std::span<const std::int64_t> k) {
    return w.normal(w.band().index(k));
}

/// F_{W^{-1}} R_d^* g, the left inverse of the forward map on the band.
inline TorusField invert_filtered(const TorusSinogram& g, const WeightRule& w) {
    const auto& symbol = w.normal_symbol();
    for (double v : symbol)
        if (!(v > 0)) throw Error(ErrorKind::SingularFilter, "W_k vanishes on the band");
    TorusField f = adjoint(g, w);
    for (std::size_t i = 0; i < symbol.size(); ++i) f.coeffs()[i] /= symbol[i];
    return f;
}

/// Adjoint taken with the normalised weight w~ = w / sqrt(W_k).
inline TorusField adjoint_normalized(const TorusSinogram& g, const WeightRule& w) {
    detail::require_weight_family(g, w);
    for (double v : w.normal_symbol())
        if (!(v > 0)) throw Error(ErrorKind::SingularFilter, "W_k vanishes on the band");
    const auto& fam = *g.family();
    const auto zero = fam.band().zero_index();
    double zero_sum = 0;
    for (std::size_t m = 0; m < fam.size(); ++m) zero_sum += std::pow(w.normalized_weight(zero, m), 2);
    return detail::weighted_backprojection(g, zero_sum * g.mean(), [&](std::size_t k, std::size_t m) {
        const double x = w.normalized_weight(k, m);
        return x * x;
    });
}

inline TorusSinogram without_mean(TorusSinogram g) {
    g.set_mean(Complex{});
    return g;
}

/// Filter-free inversion for d = n - 1: the slices of zero-average data sum
/// to the field. Needs k^perp in the family for every band frequency.
inline TorusField invert_sum(const TorusSinogram& g) {
    const auto& fam = *g.family();
    if (fam.dim() != fam.ambient_dim() - 1) throw Error(ErrorKind::BadParams, "summation inversion requires d = n - 1");
    const double scale = unweighted_norm(g, 0.0);
    if (std::abs(g.mean()) > 1e-12 * scale)
        throw Error(ErrorKind::NonzeroMean, "data mean must vanish; subtract it before summing");
    const auto missing = fam.uncovered();
    if (!missing.empty()) {
        std::string k;
        for (auto x : missing.front()) k += (k.empty() ? "" : ",") + std::to_string(x);
        throw Error(ErrorKind::IncompleteCover,
                    std::to_string(missing.size()) + " band frequencies lack their hyperplane, e.g. k=(" + k + ")");
    }
    TorusField f(fam.band().dim(), fam.band().radius());
    for (const auto& slice : g.slices())
        for (const auto& e : slice) f.coeffs()[e.k] += e.value;
    return f;
}

}  // namespace torotomo
