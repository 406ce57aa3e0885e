#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "torotomo/sinogram.hpp"
#include "torotomo/torus_field.hpp"
#include "torotomo/weight.hpp"

namespace torotomo {

/// splitmix64 step; per-task seeds are splitmix64(master + index) so serial
/// and parallel runs draw the same streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) { return splitmix64(master + index); }

/// Standard normal deviates from mt19937_64 via Box-Muller with an explicit
/// 53-bit uniform, so streams are identical across standard libraries.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

    double operator()() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0;
        while (u1 == 0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
        has_spare_ = true;
        return r * std::cos(2.0 * std::numbers::pi * u2);
    }

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
    double spare_ = 0;
    bool has_spare_ = false;
};

/// Random real field on the band: Hermitian Gaussian coefficients.
inline TorusField gaussian_field(const Band& band, std::uint64_t seed) {
    GaussianStream gauss(seed);
    TorusField f(band, std::vector<Complex>(band.size()), true);
    auto c = f.coeffs();
    const auto zero = band.zero_index();
    for (std::size_t i = 0; i < zero; ++i) {
        const double re = gauss();
        const double im = gauss();
        c[i] = {re, im};
        c[band.negated(i)] = {re, -im};
    }
    c[zero] = gauss();
    return f;
}

namespace detail {
/// Noise shaped like transform data: one Hermitian value per frequency, copied
/// into every slice whose support holds it, and a single shared mean.
inline TorusSinogram structured_noise(const FamilyPtr& family, std::uint64_t seed) {
    const auto eta = gaussian_field(family->band(), seed);
    std::vector<SliceData> slices(family->size());
    for (std::size_t m = 0; m < family->size(); ++m)
        for (auto k : family->support(m)) slices[m].push_back({k, eta.coeffs()[k]});
    return TorusSinogram(family, eta.mean(), std::move(slices));
}

inline TorusSinogram add_scaled(const TorusSinogram& g, TorusSinogram noise, double eps, double norm) {
    if (!(norm > 0)) return g;
    noise *= Complex(eps / norm);
    TorusSinogram out = g;
    out += noise;
    return out;
}
}  // namespace detail

/// The noise alone, scaled to unweighted H^t data norm exactly eps.
inline TorusSinogram make_noise(const FamilyPtr& family, double eps, double t, std::uint64_t seed) {
    if (!(eps >= 0)) throw Error(ErrorKind::BadParams, "noise level must be nonnegative");
    auto noise = detail::structured_noise(family, seed);
    const double norm = unweighted_norm(noise, t);
    if (eps == 0 || !(norm > 0)) return TorusSinogram(family);
    noise *= Complex(eps / norm);
    return noise;
}

/// g plus noise of unweighted H^t data norm exactly eps; eps = 0 returns g.
inline TorusSinogram add_noise(const TorusSinogram& g, double eps, double t, std::uint64_t seed) {
    if (!(eps >= 0)) throw Error(ErrorKind::BadParams, "noise level must be nonnegative");
    if (eps == 0) return g;
    auto noise = detail::structured_noise(g.family(), seed);
    return detail::add_scaled(g, noise, eps, unweighted_norm(noise, t));
}

/// As above with the noise norm measured in L^{2,2}_t(w).
inline TorusSinogram add_noise(const TorusSinogram& g, double eps, double t, std::uint64_t seed, const WeightRule& w) {
    if (!(eps >= 0)) throw Error(ErrorKind::BadParams, "noise level must be nonnegative");
    if (eps == 0) return g;
    auto noise = detail::structured_noise(g.family(), seed);
    return detail::add_scaled(g, noise, eps, sinogram_norm(noise, t, w));
}

}  // namespace torotomo
