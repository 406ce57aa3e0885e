#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "torotomo/noise.hpp"
#include "torotomo/torus_field.hpp"

namespace torotomo {

enum class PhantomKind { Harmonic, Disk, MultiBump, Rough };

inline std::string to_string(PhantomKind kind) {
    switch (kind) {
        case PhantomKind::Harmonic: return "harmonic";
        case PhantomKind::Disk: return "disk";
        case PhantomKind::MultiBump: return "multi-bump";
        case PhantomKind::Rough: return "rough";
    }
    return "?";
}

inline PhantomKind parse_phantom_kind(const std::string& text) {
    if (text == "harmonic") return PhantomKind::Harmonic;
    if (text == "disk") return PhantomKind::Disk;
    if (text == "multi-bump" || text == "bumps") return PhantomKind::MultiBump;
    if (text == "rough") return PhantomKind::Rough;
    throw Error(ErrorKind::BadParams, "unknown phantom kind '" + text + "'");
}

struct HarmonicTerm {
    IntVec k;
    Complex amplitude = 1.0;
};

struct Bump {
    std::vector<double> center{0.5, 0.5};
    double width = 0.05;
    double amplitude = 1.0;
};

struct PhantomParams {
    int dim = 2;
    std::vector<HarmonicTerm> terms;           // harmonic
    std::vector<double> center{0.5, 0.5};      // disk
    double radius = 0.25;                      // disk
    std::vector<Bump> bumps;                   // multi-bump
    double smoothness = 1.0;                   // rough: f in H^s for s < smoothness
    std::uint64_t seed = 1;                    // rough
};

struct Phantom {
    PhantomKind kind = PhantomKind::Harmonic;
    TorusField field;
    double analytic_mean = 0.0;
    /// L^2 norm of everything outside the band (disk only; zero when exact).
    double truncation_residual = 0.0;
};

/// Coefficients of the indicator of a disk of radius rho centred at c:
/// rho J_1(2 pi rho |k|) / |k| e^{-2 pi i k.c}, and pi rho^2 at k = 0.
inline Complex disk_coefficient(std::span<const std::int64_t> k, double rho, std::span<const double> c) {
    const double kn = std::hypot(static_cast<double>(k[0]), static_cast<double>(k[1]));
    if (kn == 0) return std::numbers::pi * rho * rho;
    const double phase = -2.0 * std::numbers::pi * (static_cast<double>(k[0]) * c[0] + static_cast<double>(k[1]) * c[1]);
    return rho * std::cyl_bessel_j(1.0, 2.0 * std::numbers::pi * rho * kn) / kn * std::polar(1.0, phase);
}

namespace detail {
inline double periodic_offset(double a, double b) {
    const double d = a - b;
    return d - std::round(d);
}
}  // namespace detail

/// Realises a real phantom on the band |k|_inf <= K. Harmonic and disk use
/// exact coefficients; bumps are sampled on an N-grid and transformed.
inline Phantom phantom(PhantomKind kind, const PhantomParams& params, int radius, int points) {
    if (points < 2 * radius + 2) throw Error(ErrorKind::BadParams, "need N >= 2K + 2");
    Phantom out;
    out.kind = kind;
    switch (kind) {
        case PhantomKind::Harmonic: {
            TorusField f(params.dim, radius, true);
            for (const auto& term : params.terms) {
                if (static_cast<int>(term.k.size()) != params.dim) throw Error(ErrorKind::BadParams, "harmonic frequency has wrong dimension");
                if (is_zero(term.k)) {
                    f.set(term.k, f[term.k] + term.amplitude.real());
                    continue;
                }
                IntVec neg = term.k;
                for (auto& x : neg) x = -x;
                f.set(term.k, f[term.k] + term.amplitude);
                f.set(neg, f[neg] + std::conj(term.amplitude));
            }
            out.field = std::move(f);
            out.analytic_mean = out.field.mean().real();
            break;
        }
        case PhantomKind::Disk: {
            if (params.center.size() != 2) throw Error(ErrorKind::BadParams, "disk phantom lives on T^2");
            if (!(params.radius > 0 && params.radius < 0.5)) throw Error(ErrorKind::BadParams, "disk radius must lie in (0, 1/2)");
            TorusField f(2, radius, true);
            const auto& band = f.band();
            double captured = 0;
            for (std::size_t i = 0; i < band.size(); ++i) {
                f.coeffs()[i] = disk_coefficient(band.frequency(i), params.radius, params.center);
                captured += std::norm(f.coeffs()[i]);
            }
            out.analytic_mean = std::numbers::pi * params.radius * params.radius;
            out.truncation_residual = std::sqrt(std::max(0.0, out.analytic_mean - captured));
            out.field = std::move(f);
            break;
        }
        case PhantomKind::MultiBump: {
            SampleGrid grid{2, points, std::vector<Complex>(static_cast<std::size_t>(points) * static_cast<std::size_t>(points))};
            for (int i = 0; i < points; ++i)
                for (int j = 0; j < points; ++j) {
                    const double x = static_cast<double>(i) / points;
                    const double y = static_cast<double>(j) / points;
                    double v = 0;
                    for (const auto& b : params.bumps) {
                        if (b.center.size() != 2 || !(b.width > 0)) throw Error(ErrorKind::BadParams, "bumps need a 2-d centre and positive width");
                        const double dx = detail::periodic_offset(x, b.center[0]);
                        const double dy = detail::periodic_offset(y, b.center[1]);
                        v += b.amplitude * std::exp(-(dx * dx + dy * dy) / (2 * b.width * b.width));
                    }
                    grid.values[static_cast<std::size_t>(i) * static_cast<std::size_t>(points) + static_cast<std::size_t>(j)] = v;
                }
            out.field = to_coefficients(grid, radius, true);
            out.analytic_mean = out.field.mean().real();
            break;
        }
        case PhantomKind::Rough: {
            // Random phases, |f(k)| = <k>^{-(smoothness + n/2)}: in H^s exactly for s < smoothness.
            auto f = gaussian_field(Band(params.dim, radius), params.seed);
            const auto& band = f.band();
            for (std::size_t i = 0; i < band.size(); ++i) {
                const auto c = f.coeffs()[i];
                const double mag = std::pow(bracket_sq(band.frequency(i)), -0.5 * (params.smoothness + 0.5 * params.dim));
                f.coeffs()[i] = std::abs(c) > 0 ? mag * c / std::abs(c) : Complex(mag);
            }
            out.field = std::move(f);
            out.analytic_mean = out.field.mean().real();
            break;
        }
    }
    return out;
}

}  // namespace torotomo
