#pragma once

#include <cmath>
#include <string>

#include "torotomo/inversion.hpp"
#include "torotomo/sinogram.hpp"
#include "torotomo/torus_field.hpp"
#include "torotomo/xray.hpp"

namespace torotomo {

/// r: data smoothness, s: penalty smoothness, t: noise-norm index,
/// delta: extra smoothness of the truth, alpha: regularisation, eps: noise level.
struct RegParams {
    double r = 0.0;
    double s = 1.0;
    double t = 0.0;
    double delta = 0.0;
    double alpha = 1.0;
    double eps = 0.0;
};

/// P^s_alpha: the Fourier multiplier (1 + alpha <k>^{2s})^{-1}.
inline TorusField post_process(const TorusField& f, double s, double alpha) {
    if (!(alpha >= 0)) throw Error(ErrorKind::ParamViolation, "alpha must be nonnegative");
    TorusField out = f;
    if (alpha == 0) return out;
    const auto& band = f.band();
    for (std::size_t i = 0; i < band.size(); ++i)
        out.coeffs()[i] /= 1.0 + alpha * std::pow(bracket_sq(band.frequency(i)), s);
    return out;
}

/// Adjoint of the unweighted transform into H^s(T^n x family):
/// sum of g(k, A) over A in Omega_k, and the shared mean at k = 0.
inline TorusField adjoint_unweighted(const TorusSinogram& g) {
    const auto& fam = *g.family();
    const auto& band = fam.band();
    TorusField f(band.dim(), band.radius());
    f.coeffs()[band.zero_index()] = g.mean();
    for (std::size_t m = 0; m < g.size(); ++m) {
        const auto sup = fam.support(m);
        for (const auto& e : g.slice(m))
            if (std::binary_search(sup.begin(), sup.end(), e.k)) f.coeffs()[e.k] += e.value;
    }
    return f;
}

namespace detail {
inline void require_tikhonov(const TorusSinogram& g, double r, double s, double alpha) {
    if (s < r) throw Error(ErrorKind::ParamViolation, "need s >= r");
    if (!(alpha > 0)) throw Error(ErrorKind::ParamViolation, "need alpha > 0");
    if (g.family()->ambient_dim() != 2 || g.family()->dim() != 1)
        throw Error(ErrorKind::DimensionMismatch, "Tikhonov reconstruction is stated for the X-ray transform on T^2");
}
}  // namespace detail

/// The minimiser P^{s-r}_alpha I^* g of ||I f - g||^2_{H^r} + alpha ||f||^2_{H^s}.
inline TorusField tikhonov_reconstruct(const TorusSinogram& g, double r, double s, double alpha) {
    detail::require_tikhonov(g, r, s, alpha);
    return post_process(adjoint_unweighted(g), s - r, alpha);
}

inline double tikhonov_objective(const TorusField& f, const TorusSinogram& g, double r, double s, double alpha) {
    detail::require_tikhonov(g, r, s, alpha);
    const auto residual = forward_sinogram(f, g.family()) - g;
    const double data = unweighted_norm(residual, r);
    const double penalty = sobolev_norm(f, s);
    return data * data + alpha * penalty * penalty;
}

/// Weighted d-plane analogue of the closed-form minimiser,
/// f(k) = (R_d^* g)(k) / (W_k + alpha <k>^{2(s-r)}). This goes beyond the
/// two-dimensional unweighted setting and is flagged as such in reports.
inline TorusField tikhonov_reconstruct_weighted(const TorusSinogram& g, const WeightRule& w, double r, double s, double alpha) {
    if (s < r) throw Error(ErrorKind::ParamViolation, "need s >= r");
    if (!(alpha > 0)) throw Error(ErrorKind::ParamViolation, "need alpha > 0");
    TorusField f = adjoint(g, w);
    const auto& band = f.band();
    for (std::size_t i = 0; i < band.size(); ++i)
        f.coeffs()[i] /= w.normal(i) + alpha * std::pow(bracket_sq(band.frequency(i)), s - r);
    return f;
}

enum class Schedule { Strategy, Optimal };

inline Schedule parse_schedule(const std::string& text) {
    if (text == "strategy") return Schedule::Strategy;
    if (text == "optimal") return Schedule::Optimal;
    throw Error(ErrorKind::BadParams, "unknown schedule '" + text + "'");
}

/// alpha(eps) = sqrt(eps) (strategy) or eps^lambda with
/// lambda = (1 + delta / 2s)^{-1} (optimal).
inline double alpha_schedule(double eps, double delta, double s, Schedule mode) {
    if (!(eps > 0)) throw Error(ErrorKind::ParamViolation, "need eps > 0");
    if (mode == Schedule::Strategy) return std::sqrt(eps);
    if (!(delta >= 0) || !(s > 0)) throw Error(ErrorKind::ParamViolation, "optimal schedule needs delta >= 0 and s > 0");
    const double lambda = 1.0 / (1.0 + delta / (2.0 * s));
    return std::pow(eps, lambda);
}

/// C(x) = x (1/x - 1)^{1-x}.
inline double strategy_constant(double x) {
    if (!(x > 0 && x < 1)) throw Error(ErrorKind::ParamViolation, "C(x) needs 0 < x < 1");
    return x * std::pow(1.0 / x - 1.0, 1.0 - x);
}

/// alpha^{delta/2s} C(delta/2s) ||f||_{H^{r+delta}} + eps / alpha.
inline double error_bound(double alpha, double eps, double delta, double s, double truth_norm) {
    if (!(s > 0) || !(delta > 0 && delta < 2 * s)) throw Error(ErrorKind::ParamViolation, "need 0 < delta < 2s");
    if (!(alpha > 0 && alpha <= 2 * s / delta - 1)) throw Error(ErrorKind::ParamViolation, "need 0 < alpha <= 2s/delta - 1");
    if (!(eps >= 0)) throw Error(ErrorKind::ParamViolation, "need eps >= 0");
    const double x = delta / (2 * s);
    return std::pow(alpha, x) * strategy_constant(x) * truth_norm + eps / alpha;
}

}  // namespace torotomo
