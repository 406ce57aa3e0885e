// torotomo: phantoms, forward data, reconstructions, sweeps and the
// Euclidean bridge from the command line.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "torotomo/bridge.hpp"
#include "torotomo/experiment.hpp"
#include "torotomo/io.hpp"
#include "torotomo/selftest.hpp"

namespace fs = std::filesystem;
using namespace torotomo;

namespace {

/// Relative output paths live under $TOROTOMO_OUT (default: working directory).
fs::path output_path(const std::string& p) {
    const fs::path path(p);
    if (path.is_absolute()) return path;
    const char* root = std::getenv("TOROTOMO_OUT");
    return root && *root ? fs::path(root) / path : path;
}

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot read " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::ConfigInvalid, path + ": " + e.what());
    }
}

/// Command-line flags that mirror config keys; any flag given overrides the file.
struct ConfigFlags {
    std::string config;
    std::string phantom, method, weight, schedule, output;
    int K = 0, N = 0, d = 0, n = 0, cover = 0;
    std::int64_t H = 0;
    double r = 0, s = 0, t = 0, delta = 0, alpha = 0, radius = 0, smoothness = 0;
    std::vector<double> eps, norms, center;
    std::vector<std::int64_t> k;
    std::uint64_t seed = 0;
    bool no_images = false;
    std::vector<std::pair<CLI::Option*, std::function<void(Json&)>>> bindings;

    void attach(CLI::App* app) {
        app->add_option("--config", config, "JSON experiment config");
        bind(app->add_option("--phantom", phantom, "harmonic | disk | multi-bump | rough"), [this](Json& j) { j["phantom"]["kind"] = phantom; });
        bind(app->add_option("--k", k, "harmonic phantom frequency")->delimiter(','), [this](Json& j) {
            j["phantom"]["terms"] = Json::array({{{"k", k}, {"re", 1.0}, {"im", 0.0}}});
        });
        bind(app->add_option("--radius", radius, "disk radius"), [this](Json& j) { j["phantom"]["radius"] = radius; });
        bind(app->add_option("--center", center, "disk centre")->delimiter(','), [this](Json& j) { j["phantom"]["center"] = center; });
        bind(app->add_option("--smoothness", smoothness, "rough phantom smoothness"), [this](Json& j) { j["phantom"]["smoothness"] = smoothness; });
        bind(app->add_option("--K", K, "band radius"), [this](Json& j) { j["K"] = K; });
        bind(app->add_option("--N", N, "grid points per axis"), [this](Json& j) { j["N"] = N; });
        bind(app->add_option("--n", n, "torus dimension"), [this](Json& j) { j["n"] = n; });
        bind(app->add_option("--d", d, "subspace dimension"), [this](Json& j) { j["family"]["d"] = d; });
        bind(app->add_option("--H", H, "family truncation height"), [this](Json& j) { j["family"]["H"] = H; });
        bind(app->add_option("--cover", cover, "direction cover radius (n = 2, d = 1)"), [this](Json& j) { j["family"]["cover"] = cover; });
        bind(app->add_option("--weight", weight, "canonical-singleton | height-decay"), [this](Json& j) { j["weight"] = weight; });
        bind(app->add_option("--method", method, "slice | filtered | normalized | sum | tikhonov"), [this](Json& j) { j["method"] = method; });
        bind(app->add_option("--r", r, "data smoothness"), [this](Json& j) { j["reg"]["r"] = r; });
        bind(app->add_option("--s", s, "penalty smoothness"), [this](Json& j) { j["reg"]["s"] = s; });
        bind(app->add_option("--t", t, "noise norm index"), [this](Json& j) { j["reg"]["t"] = t; });
        bind(app->add_option("--delta", delta, "extra smoothness of the truth"), [this](Json& j) { j["reg"]["delta"] = delta; });
        bind(app->add_option("--alpha", alpha, "regularisation parameter"), [this](Json& j) { j["reg"]["alpha"] = alpha; });
        bind(app->add_option("--schedule", schedule, "fixed | strategy | optimal"), [this](Json& j) { j["reg"]["schedule"] = schedule; });
        bind(app->add_option("--eps", eps, "noise levels")->delimiter(','), [this](Json& j) { j["eps"] = eps; });
        bind(app->add_option("--norms", norms, "Sobolev indices for error reports")->delimiter(','), [this](Json& j) { j["norms"] = norms; });
        bind(app->add_option("--seed", seed, "master seed"), [this](Json& j) { j["seed"] = seed; });
        bind(app->add_option("--out", output, "output directory (under $TOROTOMO_OUT)"), [this](Json& j) { j["output"] = output; });
        bind(app->add_flag("--no-images", no_images, "skip PGM output"), [this](Json& j) { j["images"] = !no_images; });
    }

    void bind(CLI::Option* opt, std::function<void(Json&)> apply) { bindings.emplace_back(opt, std::move(apply)); }

    [[nodiscard]] Json merged(Json base = Json::object()) const {
        Json j = config.empty() ? std::move(base) : load_json(config);
        for (const auto& [opt, apply] : bindings)
            if (opt->count() > 0) apply(j);
        return j;
    }
};

int report_checks(const std::vector<CheckResult>& checks) { return print_checks(std::cout, checks) ? 0 : 1; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral tomography on flat tori"};
    app.require_subcommand(1);

    auto* phantom_cmd = app.add_subcommand("phantom", "realise a phantom as a band-limited field");
    ConfigFlags phantom_flags;
    phantom_flags.attach(phantom_cmd);

    auto* forward_cmd = app.add_subcommand("forward", "forward data of a field file, optionally with noise");
    ConfigFlags forward_flags;
    forward_flags.attach(forward_cmd);
    std::string forward_field;
    forward_cmd->add_option("--field", forward_field, "input field file")->required();

    auto* reconstruct_cmd = app.add_subcommand("reconstruct", "run an experiment, or invert a sinogram directory");
    ConfigFlags reconstruct_flags;
    reconstruct_flags.attach(reconstruct_cmd);
    std::string sino_dir, truth_file;
    reconstruct_cmd->add_option("--sino", sino_dir, "sinogram directory to invert (instead of a full experiment)");
    reconstruct_cmd->add_option("--truth", truth_file, "field file to measure errors against");

    auto* sweep_cmd = app.add_subcommand("sweep", "Tikhonov error against noise level with the convergence bound");
    ConfigFlags sweep_flags;
    sweep_flags.attach(sweep_cmd);

    auto* bridge_cmd = app.add_subcommand("bridge", "map parallel-beam data to torus data and reconstruct");
    int bridge_K = 32, bridge_cover = 0, bridge_offsets = 256;
    double bridge_rho = 0.3;
    std::string bridge_csv, bridge_out = "bridge", bridge_write_csv;
    bridge_cmd->add_option("--K", bridge_K, "band radius");
    bridge_cmd->add_option("--cover", bridge_cover, "direction cover radius (default K)");
    bridge_cmd->add_option("--N", bridge_offsets, "offsets per angle for the analytic disk");
    bridge_cmd->add_option("--rho", bridge_rho, "object support radius about (1/2, 1/2)");
    bridge_cmd->add_option("--csv", bridge_csv, "Euclidean sinogram CSV (default: analytic disk)");
    bridge_cmd->add_option("--write-csv", bridge_write_csv, "also save the Euclidean sinogram as CSV");
    bridge_cmd->add_option("--out", bridge_out, "output directory (under $TOROTOMO_OUT)");

    auto* selftest_cmd = app.add_subcommand("selftest", "run the built-in invariant checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (phantom_cmd->parsed()) {
            const auto c = parse_config(phantom_flags.merged({{"output", "phantom"}}));
            const auto p = phantom(c.phantom_kind, c.phantom, c.K, c.grid_points());
            const auto dir = output_path(c.output);
            write_field(dir / "phantom.field", p.field);
            if (c.n == 2) write_pgm(dir / "phantom.pgm", to_samples(p.field, c.grid_points()));
            std::cout << "kind " << to_string(p.kind) << "\nmean " << detail::format_double(p.field.mean().real())
                      << "\nanalytic_mean " << detail::format_double(p.analytic_mean) << "\ntruncation_residual "
                      << detail::format_double(p.truncation_residual) << '\n';
            return 0;
        }
        if (forward_cmd->parsed()) {
            const auto f = read_field(forward_field);
            Json base = {{"output", "sinogram"}, {"K", f.radius()}, {"n", f.dim()}};
            auto c = parse_config(forward_flags.merged(base));
            if (c.K != f.radius() || c.n != f.dim()) throw Error(ErrorKind::ConfigInvalid, "K/n: must match the field file");
            const auto family = build_family(c);
            auto g = forward_sinogram(f, family);
            if (c.eps.size() != 1) throw Error(ErrorKind::ConfigInvalid, "eps: forward takes a single noise level");
            g = add_noise(g, c.eps.front(), c.reg.t, derive_seed(c.seed, 0));
            write_sinogram(output_path(c.output), g);
            std::cout << "subspaces " << family->size() << "\nmean " << detail::format_double(g.mean().real()) << '\n';
            return 0;
        }
        if (reconstruct_cmd->parsed()) {
            if (!sino_dir.empty()) {
                const auto g = read_sinogram(sino_dir);
                const auto& fam = *g.family();
                Json base = {{"output", "reconstruction"}, {"K", fam.band().radius()}, {"n", fam.ambient_dim()}, {"family", {{"d", fam.dim()}}}};
                const auto c = parse_config(reconstruct_flags.merged(base));
                const auto w = build_weight(c, g.family());
                ReconstructionReport report;
                report.method = to_string(c.method);
                const auto rec = reconstruct(c.method, g, w, c.reg, c.reg.alpha, &report.extension);
                const auto dir = output_path(c.output);
                write_field(dir / "recon.field", rec);
                if (!truth_file.empty()) {
                    report.errors = measure_errors(rec, read_field(truth_file), c.norms, c.grid_points());
                    write_report_csv(dir / "errors.csv", {report});
                }
                write_json(dir / "report.json", report.to_json());
                std::cout << report.to_json().dump(2) << '\n';
                return 0;
            }
            const auto c = parse_config(reconstruct_flags.merged());
            const auto result = run_experiment(c, output_path(c.output));
            for (const auto& r : result.reports) std::cout << r.to_json().dump() << '\n';
            return report_checks(result.checks);
        }
        if (sweep_cmd->parsed()) {
            Json base = {{"output", "sweep"}, {"phantom", {{"kind", "rough"}, {"smoothness", 2.05}}}, {"K", 32},
                         {"reg", {{"r", 0}, {"s", 2}, {"t", 0}, {"delta", 2}, {"schedule", "optimal"}}},
                         {"eps", {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}}};
            const auto c = parse_config(sweep_flags.merged(base));
            const auto s = run_sweep(c);
            write_sweep(output_path(c.output), c, s);
            return report_checks(s.checks);
        }
        if (bridge_cmd->parsed()) {
            const int R = bridge_cover > 0 ? bridge_cover : bridge_K;
            const auto dirs = direction_cover(R);
            const auto fam = family_from_directions(dirs, bridge_K);
            const auto w = weight_build(WeightKind::CanonicalSingleton, {}, fam);
            const bool analytic = bridge_csv.empty();
            const auto sino = analytic ? disk_sinogram(dirs, bridge_offsets, bridge_rho) : read_euclidean_csv(bridge_csv, bridge_rho);
            if (!bridge_write_csv.empty()) write_euclidean_csv(output_path(bridge_write_csv).string(), sino);
            const auto g = bridge_ingest(sino, fam, w);
            const auto rec = invert_filtered(g, w);
            const auto dir = output_path(bridge_out);
            write_sinogram(dir / "sinogram", g);
            write_field(dir / "recon.field", rec);
            const int points = 2 * bridge_K + 2;
            write_pgm(dir / "recon.pgm", to_samples(rec, points));
            std::cout << "directions " << dirs.size() << "\nrange_defect " << detail::format_double(range_defect(g)) << '\n';
            if (!analytic) return 0;
            PhantomParams p;
            p.radius = bridge_rho;
            const auto truth = phantom(PhantomKind::Disk, p, bridge_K, points);
            const auto err = to_samples(rec - truth.field, points);
            const double rel = grid_lp_norm(err, 2.0) / grid_lp_norm(to_samples(truth.field, points), 2.0);
            write_json(dir / "report.json", {{"relative_grid_L2", rel}, {"truncation_residual", truth.truncation_residual},
                                             {"K", bridge_K}, {"offsets", bridge_offsets}, {"rho", bridge_rho}, {"directions", dirs.size()}});
            return report_checks({{"bridge relative grid L2 < 5%", rel < 0.05, detail::format_double(rel)}});
        }
        if (selftest_cmd->parsed()) return report_checks(run_selftest());
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
