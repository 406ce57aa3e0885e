// End-to-end run on T^2: disk phantom -> X-ray data -> noise -> filtered and
// Tikhonov reconstructions, then the summation inversion on T^3.

#include <cstdio>

#include "torotomo/experiment.hpp"

using namespace torotomo;

int main() {
    const int K = 16;
    PhantomParams params;
    params.radius = 0.3;
    const auto disk = phantom(PhantomKind::Disk, params, K, 2 * K + 2);
    std::printf("disk: mean %.6f (analytic %.6f), truncation residual %.3e\n", disk.field.mean().real(), disk.analytic_mean,
                disk.truncation_residual);

    const auto family = family_from_directions(direction_cover(K), K);
    const auto w = weight_build(WeightKind::CanonicalSingleton, {}, family);
    const auto clean = forward_sinogram(disk.field, family);
    std::printf("family: %zu directions, c_w %.3f, C_w %.3f\n", family->size(), w.lower_constant(), w.upper_constant());

    const double exact = sobolev_norm(invert_filtered(clean, w) - disk.field, 0.0);
    std::printf("noiseless filtered inverse: L2 error %.3e\n", exact);

    const double r = 0, s = 1, t = 0, delta = 1;
    std::printf("%8s %10s %12s %12s %12s\n", "eps", "alpha", "filtered", "tikhonov", "bound");
    for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
        const auto data = add_noise(clean, eps, t, derive_seed(1, static_cast<std::uint64_t>(-std::log10(eps))));
        const double alpha = alpha_schedule(eps, delta, s, Schedule::Strategy);
        const double filtered = sobolev_norm(invert_filtered(data, w) - disk.field, r);
        const double tik = sobolev_norm(tikhonov_reconstruct(data, r, s, alpha) - disk.field, r);
        const double bound = error_bound(alpha, eps, delta, s, sobolev_norm(disk.field, r + delta));
        std::printf("%8.0e %10.3e %12.4e %12.4e %12.4e\n", eps, alpha, filtered, tik, bound);
    }

    const int K3 = 3;
    PhantomParams rough;
    rough.dim = 3;
    rough.smoothness = 1.5;
    auto f3 = phantom(PhantomKind::Rough, rough, K3, 2 * K3 + 2).field;
    f3.coeffs()[f3.band().zero_index()] = 0;
    const auto planes = covering_family(2, 3, K3, complete_cover_height(2, 3, K3));
    const auto summed = invert_sum(forward_sinogram(f3, planes));
    std::printf("T^3 plane transform, %zu planes: summation inverse L2 error %.3e\n", planes->size(),
                sobolev_norm(summed - f3, 0.0));
    return 0;
}
