#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "torotomo/bridge.hpp"
#include "torotomo/experiment.hpp"

namespace torotomo {

namespace detail {
inline TorusField selftest_field(int n, int radius, std::uint64_t seed) { return gaussian_field(Band(n, radius), seed); }

inline double coeff_gap(const TorusField& a, const TorusField& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.coeffs().size(); ++i) m = std::max(m, std::abs(a.coeffs()[i] - b.coeffs()[i]));
    return m;
}
}  // namespace detail

/// Quick invariant battery at small sizes. One line per check,
/// "PASS|FAIL <name>: <detail>", with no timings so the output is byte-stable.
inline std::vector<CheckResult> run_selftest() {
    using detail::coeff_gap;
    using detail::format_double;
    std::vector<CheckResult> out;
    auto check = [&](const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
        try {
            auto [ok, what] = body();
            out.push_back({name, ok, what});
        } catch (const std::exception& e) {
            out.push_back({name, false, std::string("exception: ") + e.what()});
        }
    };

    check("selection rule and quadrature", [] {
        const int K = 4;
        const auto f = detail::selftest_field(2, K, 1);
        double worst = 0;
        bool exact = true;
        for (const auto& v : enumerate_directions(2, 2)) {
            const auto g = forward_direction(f, v);
            for (std::size_t i = 0; i < f.band().size(); ++i) {
                const bool keep = dot(f.band().frequency(i), v.vec()) == 0;
                exact = exact && g.coeffs()[i] == (keep ? f.coeffs()[i] : Complex{});
            }
            const std::vector<double> x{0.125, 0.375};
            const int nodes = static_cast<int>(2 * K * (std::abs(v[0]) + std::abs(v[1])) + 1);
            worst = std::max(worst, std::abs(quadrature_line_integral(f, GeodesicSpec(x, v), nodes) - evaluate(g, x)));
        }
        return std::pair{exact && worst < 1e-10, "quadrature gap " + format_double(worst)};
    });

    check("slice reconstruction", [] {
        const int K = 4;
        const auto f = detail::selftest_field(2, K, 2);
        const auto g = forward_sinogram(f, direction_cover(K));
        const double gap = coeff_gap(reconstruct_from_slices(g), f);
        return std::pair{gap < 1e-10, "max coefficient error " + format_double(gap)};
    });

    check("unitarity", [] {
        const int K = 5;
        const auto f = detail::selftest_field(2, K, 3);
        const auto fam = family_from_directions(direction_cover(K), K);
        const auto g = forward_sinogram(f, fam);
        double worst = 0;
        for (double s : {-1.0, 0.0, 1.0, 2.0}) worst = std::max(worst, std::abs(unweighted_norm(g, s) / sobolev_norm(f, s) - 1));
        return std::pair{worst < 1e-12, "relative gap " + format_double(worst)};
    });

    check("adjoint and filtered inverse", [] {
        double worst = 0;
        const std::pair<int, int> shapes[] = {{2, 1}, {3, 1}, {3, 2}};
        for (auto [n, d] : shapes) {
            const int K = 2;
            const auto fam = covering_family(d, n, K, complete_cover_height(d, n, K));
            for (auto kind : {WeightKind::HeightDecay, WeightKind::CanonicalSingleton}) {
                if (kind == WeightKind::CanonicalSingleton && d != n - 1) continue;
                const auto w = weight_build(kind, {}, fam);
                const auto f = detail::selftest_field(n, K, 4);
                worst = std::max(worst, coeff_gap(invert_filtered(forward_sinogram(f, fam), w), f));
            }
        }
        return std::pair{worst < 1e-12, "left-inverse gap " + format_double(worst)};
    });

    check("normalized adjoint", [] {
        const int K = 3;
        const auto w = weight_build(WeightKind::HeightDecay, {}, 1, 3, 2, K);
        const auto g = forward_sinogram(detail::selftest_field(3, K, 5), w.family());
        const auto f = detail::selftest_field(3, K, 5);
        const double gap = coeff_gap(adjoint_normalized(g, w), f);
        return std::pair{gap < 1e-12, "gap " + format_double(gap)};
    });

    check("summation inversion", [] {
        const int K = 3;
        auto f = detail::selftest_field(3, K, 6);
        f.coeffs()[f.band().zero_index()] = 0;
        const auto fam = covering_family(2, 3, K, complete_cover_height(2, 3, K));
        const double gap = coeff_gap(invert_sum(forward_sinogram(f, fam)), f);
        return std::pair{gap < 1e-10, "gap " + format_double(gap)};
    });

    check("tikhonov closed form", [] {
        const int K = 4;
        const auto f = detail::selftest_field(2, K, 7);
        const double alpha = 0.25;
        const auto rec = tikhonov_reconstruct(forward_sinogram(f, direction_cover(K)), 1.0, 1.0, alpha);
        const double gap = coeff_gap(rec, (1.0 / (1.0 + alpha)) * f);
        return std::pair{gap < 1e-10 && strategy_constant(0.5) == 0.5, "gap " + format_double(gap)};
    });

    check("convergence bound", [] {
        ExperimentConfig c;
        c.phantom_kind = PhantomKind::Rough;
        c.phantom.smoothness = 2.05;
        c.K = 12;
        c.reg = {0.0, 2.0, 0.0, 2.0, 1.0, 0.0};
        c.alpha_mode = AlphaMode::Optimal;
        c.eps = {1e-1, 1e-2, 1e-3, 1e-4};
        const auto s = run_sweep(c);
        return std::pair{s.ok(), "slope " + format_double(s.slope) + " target " + format_double(s.target_slope)};
    });

    check("bridge", [] {
        const int K = 6;
        const double rho = 0.3;
        const auto dirs = direction_cover(K);
        const auto fam = family_from_directions(dirs, K);
        const auto w = weight_build(WeightKind::CanonicalSingleton, {}, fam);
        PhantomParams p;
        p.radius = rho;
        const auto truth = phantom(PhantomKind::Disk, p, K, 2 * K + 2).field;
        const auto rec = invert_filtered(bridge_ingest(disk_sinogram(dirs, 128, rho), fam, w), w);
        const double rel = sobolev_norm(rec - truth, 0.0) / sobolev_norm(truth, 0.0);
        return std::pair{rel < 0.05, "relative L2 error " + format_double(rel)};
    });

    check("noise determinism", [] {
        const int K = 4;
        const auto g = forward_sinogram(detail::selftest_field(2, K, 8), direction_cover(K));
        const auto a = add_noise(g, 1e-2, 0.0, 11);
        const auto b = add_noise(g, 1e-2, 0.0, 11);
        const double norm = unweighted_norm(a - g, 0.0);
        return std::pair{a.slices() == b.slices() && std::abs(norm - 1e-2) < 1e-14, "noise norm " + format_double(norm)};
    });
    return out;
}

inline bool print_checks(std::ostream& os, const std::vector<CheckResult>& checks) {
    bool ok = true;
    for (const auto& c : checks) {
        os << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
        ok = ok && c.pass;
    }
    return ok;
}

}  // namespace torotomo
