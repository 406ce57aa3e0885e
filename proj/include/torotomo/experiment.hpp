#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "torotomo/inversion.hpp"
#include "torotomo/io.hpp"
#include "torotomo/noise.hpp"
#include "torotomo/phantom.hpp"
#include "torotomo/regularize.hpp"
#include "torotomo/report.hpp"
#include "torotomo/xray.hpp"

namespace torotomo {

using Json = nlohmann::json;

enum class Method { Slice, Filtered, Normalized, Sum, Tikhonov };

inline std::string to_string(Method m) {
    switch (m) {
        case Method::Slice: return "slice";
        case Method::Filtered: return "filtered";
        case Method::Normalized: return "normalized";
        case Method::Sum: return "sum";
        case Method::Tikhonov: return "tikhonov";
    }
    return "?";
}

inline Method parse_method(const std::string& text) {
    for (auto m : {Method::Slice, Method::Filtered, Method::Normalized, Method::Sum, Method::Tikhonov})
        if (to_string(m) == text) return m;
    throw Error(ErrorKind::BadParams, "unknown method '" + text + "'");
}

/// How alpha is chosen: the configured value, or a schedule in eps.
enum class AlphaMode { Fixed, Strategy, Optimal };

struct ExperimentConfig {
    PhantomKind phantom_kind = PhantomKind::Harmonic;
    PhantomParams phantom;
    int K = 8;
    int N = 0;  // 0: 2K + 2
    int d = 1;
    int n = 2;
    std::optional<std::int64_t> height;  // truncation height H of the family
    std::optional<int> cover;            // n = 2, d = 1: direction_cover(R)
    WeightKind weight = WeightKind::CanonicalSingleton;
    double decay_base = 2.0;
    Method method = Method::Filtered;
    RegParams reg;
    AlphaMode alpha_mode = AlphaMode::Fixed;
    std::vector<double> eps{0.0};
    std::uint64_t seed = 1;
    std::vector<double> norms{0.0};
    std::string output = "run";
    bool images = true;

    [[nodiscard]] int grid_points() const { return N > 0 ? N : 2 * K + 2; }
};

namespace detail {
[[noreturn]] inline void config_error(const std::string& field, const std::string& what) {
    throw Error(ErrorKind::ConfigInvalid, field + ": " + what);
}

template <class T>
T config_value(const Json& j, const std::string& field, const std::string& key, T fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        config_error(field.empty() ? key : field + "." + key, "has the wrong type (" + std::string(j.at(key).type_name()) + ")");
    }
}

inline std::string alpha_mode_name(AlphaMode m) {
    switch (m) {
        case AlphaMode::Fixed: return "fixed";
        case AlphaMode::Strategy: return "strategy";
        case AlphaMode::Optimal: return "optimal";
    }
    return "?";
}
}  // namespace detail

/// Parses the JSON experiment config; every problem is reported as
/// ConfigInvalid naming the offending field.
inline ExperimentConfig parse_config(const Json& j) {
    using detail::config_error;
    using detail::config_value;
    if (!j.is_object()) config_error("<root>", "config must be a JSON object");
    ExperimentConfig c;

    const Json ph = j.value("phantom", Json::object());
    if (!ph.is_object()) config_error("phantom", "must be an object");
    try {
        c.phantom_kind = parse_phantom_kind(config_value<std::string>(ph, "phantom", "kind", "harmonic"));
    } catch (const Error& e) {
        config_error("phantom.kind", e.what());
    }
    c.n = config_value<int>(j, "", "n", config_value<int>(ph, "phantom", "dim", 2));
    c.phantom.dim = c.n;
    c.phantom.center = config_value<std::vector<double>>(ph, "phantom", "center", c.phantom.center);
    c.phantom.radius = config_value<double>(ph, "phantom", "radius", c.phantom.radius);
    c.phantom.smoothness = config_value<double>(ph, "phantom", "smoothness", c.phantom.smoothness);
    c.phantom.seed = config_value<std::uint64_t>(ph, "phantom", "seed", c.phantom.seed);
    if (ph.contains("terms")) {
        for (std::size_t i = 0; i < ph.at("terms").size(); ++i) {
            const auto& t = ph.at("terms").at(i);
            const std::string field = "phantom.terms[" + std::to_string(i) + "]";
            HarmonicTerm term;
            term.k = config_value<IntVec>(t, field, "k", {});
            if (static_cast<int>(term.k.size()) != c.n) config_error(field + ".k", "needs " + std::to_string(c.n) + " entries");
            term.amplitude = {config_value<double>(t, field, "re", 1.0), config_value<double>(t, field, "im", 0.0)};
            c.phantom.terms.push_back(term);
        }
    } else if (c.phantom_kind == PhantomKind::Harmonic) {
        IntVec k(static_cast<std::size_t>(c.n), 0);
        k[0] = 1;
        if (c.n > 1) k[1] = 2;
        c.phantom.terms.push_back({k, 1.0});
    }
    if (ph.contains("bumps")) {
        for (std::size_t i = 0; i < ph.at("bumps").size(); ++i) {
            const auto& b = ph.at("bumps").at(i);
            const std::string field = "phantom.bumps[" + std::to_string(i) + "]";
            c.phantom.bumps.push_back({config_value<std::vector<double>>(b, field, "center", {0.5, 0.5}),
                                       config_value<double>(b, field, "width", 0.05), config_value<double>(b, field, "amplitude", 1.0)});
        }
    }

    c.K = config_value<int>(j, "", "K", c.K);
    if (c.K < 0) config_error("K", "must be nonnegative");
    c.N = config_value<int>(j, "", "N", c.N);
    if (c.N != 0 && c.N < 2 * c.K + 2) config_error("N", "must be at least 2K + 2 = " + std::to_string(2 * c.K + 2));

    const Json fam = j.value("family", Json::object());
    c.d = config_value<int>(fam, "family", "d", c.d);
    if (!(c.d >= 1 && c.d < c.n)) config_error("family.d", "must satisfy 1 <= d < n");
    if (fam.contains("H") && !fam.at("H").is_null()) c.height = config_value<std::int64_t>(fam, "family", "H", 1);
    if (fam.contains("cover") && !fam.at("cover").is_null()) {
        if (c.n != 2 || c.d != 1) config_error("family.cover", "direction covers apply to n = 2, d = 1");
        c.cover = config_value<int>(fam, "family", "cover", c.K);
    }
    if (c.height && *c.height < 1) config_error("family.H", "must be positive");

    try {
        c.weight = parse_weight_kind(config_value<std::string>(j, "", "weight", "canonical-singleton"));
    } catch (const Error& e) {
        config_error("weight", e.what());
    }
    if (c.weight == WeightKind::CustomTable) config_error("weight", "custom tables are a library feature, not a config option");
    c.decay_base = config_value<double>(j, "", "decay_base", c.decay_base);
    try {
        c.method = parse_method(config_value<std::string>(j, "", "method", "filtered"));
    } catch (const Error& e) {
        config_error("method", e.what());
    }

    const Json reg = j.value("reg", Json::object());
    c.reg.r = config_value<double>(reg, "reg", "r", c.reg.r);
    c.reg.s = config_value<double>(reg, "reg", "s", c.reg.s);
    c.reg.t = config_value<double>(reg, "reg", "t", c.reg.t);
    c.reg.delta = config_value<double>(reg, "reg", "delta", c.reg.delta);
    c.reg.alpha = config_value<double>(reg, "reg", "alpha", c.reg.alpha);
    const auto mode = config_value<std::string>(reg, "reg", "schedule", "fixed");
    if (mode == "fixed")
        c.alpha_mode = AlphaMode::Fixed;
    else if (mode == "strategy")
        c.alpha_mode = AlphaMode::Strategy;
    else if (mode == "optimal")
        c.alpha_mode = AlphaMode::Optimal;
    else
        config_error("reg.schedule", "must be fixed, strategy or optimal");
    if (c.method == Method::Tikhonov) {
        if (c.reg.s < c.reg.r) config_error("reg.s", "must be >= reg.r");
        if (c.alpha_mode == AlphaMode::Fixed && !(c.reg.alpha > 0)) config_error("reg.alpha", "must be positive");
    }

    if (j.contains("eps")) {
        const auto& e = j.at("eps");
        c.eps = e.is_array() ? config_value<std::vector<double>>(j, "", "eps", {}) : std::vector<double>{config_value<double>(j, "", "eps", 0)};
    }
    if (c.eps.empty()) config_error("eps", "needs at least one noise level");
    for (double e : c.eps)
        if (!(e >= 0)) config_error("eps", "noise levels must be nonnegative");
    c.seed = config_value<std::uint64_t>(j, "", "seed", c.seed);
    c.norms = config_value<std::vector<double>>(j, "", "norms", c.norms);
    c.output = config_value<std::string>(j, "", "output", c.output);
    c.images = config_value<bool>(j, "", "images", c.images);

    if (c.phantom_kind == PhantomKind::Disk || c.phantom_kind == PhantomKind::MultiBump)
        if (c.n != 2) config_error("phantom.kind", to_string(c.phantom_kind) + " phantoms live on T^2");
    if (c.method == Method::Slice && (c.n != 2 || c.d != 1)) config_error("method", "slice reconstruction needs n = 2, d = 1");
    if (c.method == Method::Sum && c.d != c.n - 1) config_error("method", "summation inversion needs d = n - 1");
    return c;
}

inline Json config_to_json(const ExperimentConfig& c) {
    Json terms = Json::array();
    for (const auto& t : c.phantom.terms) terms.push_back({{"k", t.k}, {"re", t.amplitude.real()}, {"im", t.amplitude.imag()}});
    Json bumps = Json::array();
    for (const auto& b : c.phantom.bumps) bumps.push_back({{"center", b.center}, {"width", b.width}, {"amplitude", b.amplitude}});
    Json family = {{"d", c.d}};
    if (c.height) family["H"] = *c.height;
    if (c.cover) family["cover"] = *c.cover;
    return {{"phantom",
             {{"kind", to_string(c.phantom_kind)},
              {"terms", terms},
              {"center", c.phantom.center},
              {"radius", c.phantom.radius},
              {"bumps", bumps},
              {"smoothness", c.phantom.smoothness},
              {"seed", c.phantom.seed}}},
            {"n", c.n},
            {"K", c.K},
            {"N", c.grid_points()},
            {"family", family},
            {"weight", to_string(c.weight)},
            {"decay_base", c.decay_base},
            {"method", to_string(c.method)},
            {"reg",
             {{"r", c.reg.r}, {"s", c.reg.s}, {"t", c.reg.t}, {"delta", c.reg.delta}, {"alpha", c.reg.alpha},
              {"schedule", detail::alpha_mode_name(c.alpha_mode)}}},
            {"eps", c.eps},
            {"seed", c.seed},
            {"norms", c.norms},
            {"output", c.output},
            {"images", c.images}};
}

/// The subspace family a config asks for: an explicit direction cover, the
/// union of Omega_k(H), or (default) the smallest complete cover.
inline FamilyPtr build_family(const ExperimentConfig& c) {
    if (c.n == 2 && c.d == 1 && !c.height) return family_from_directions(direction_cover(c.cover.value_or(c.K)), c.K);
    return covering_family(c.d, c.n, c.K, c.height.value_or(complete_cover_height(c.d, c.n, c.K)));
}

inline WeightRule build_weight(const ExperimentConfig& c, const FamilyPtr& family) {
    WeightParams params;
    params.decay_base = c.decay_base;
    return weight_build(c.weight, params, family);
}

/// Slice-integral reconstruction on T^2: each f(k) from the cheapest slice
/// whose direction is orthogonal to k.
inline TorusField reconstruct_from_slices(const TorusSinogram& g) {
    const auto& fam = *g.family();
    const auto& band = fam.band();
    auto direction = [&](std::size_t m) {
        const auto& b = fam[m].basis();
        return primitive_reduce({b[0], b[1]});
    };
    std::vector<std::optional<TorusField>> cache(fam.size());
    TorusField f(2, band.radius(), false);
    for (std::size_t i = 0; i < band.size(); ++i) {
        std::optional<std::size_t> best;
        std::int64_t best_cost = 0;
        auto consider = [&](std::size_t m) {
            const auto v = direction(m);
            const std::int64_t cost = std::abs(v[0]) + std::abs(v[1]);
            if (!best || cost < best_cost) best = m, best_cost = cost;
        };
        if (i == band.zero_index()) {
            for (std::size_t m = 0; m < fam.size(); ++m) consider(m);
        } else {
            for (auto m : fam.omega(i)) consider(m);
        }
        if (!best) throw Error(ErrorKind::IncompleteCover, "no slice is orthogonal to some band frequency");
        if (!cache[*best]) cache[*best] = g.slice_field(*best);
        const int nodes = static_cast<int>(2 * band.radius() * best_cost + 1);
        f.coeffs()[i] = slice_reconstruct_coeff(*cache[*best], direction(*best), band.frequency(i), nodes);
    }
    return f;
}

/// Runs one reconstruction method; `extension` is set for the weighted
/// d-plane Tikhonov variant.
inline TorusField reconstruct(Method method, const TorusSinogram& g, const WeightRule& w, const RegParams& reg, double alpha,
                              bool* extension = nullptr) {
    if (extension) *extension = false;
    switch (method) {
        case Method::Slice: return reconstruct_from_slices(g);
        case Method::Filtered: return invert_filtered(g, w);
        case Method::Normalized: return adjoint_normalized(g, w);
        case Method::Sum: {
            auto f = invert_sum(without_mean(g));
            f.coeffs()[f.band().zero_index()] = g.mean();
            return f;
        }
        case Method::Tikhonov: {
            const auto& fam = *g.family();
            if (fam.ambient_dim() == 2 && fam.dim() == 1 && w.kind() == WeightKind::CanonicalSingleton)
                return tikhonov_reconstruct(g, reg.r, reg.s, alpha);
            if (extension) *extension = true;
            return tikhonov_reconstruct_weighted(g, w, reg.r, reg.s, alpha);
        }
    }
    throw Error(ErrorKind::BadParams, "unknown method");
}

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ExperimentResult {
    std::vector<ReconstructionReport> reports;
    std::vector<CheckResult> checks;
    [[nodiscard]] bool ok() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

inline double scheduled_alpha(const ExperimentConfig& c, double eps) {
    if (c.alpha_mode == AlphaMode::Fixed || eps == 0) return c.reg.alpha;
    return alpha_schedule(eps, c.reg.delta, c.reg.s, c.alpha_mode == AlphaMode::Strategy ? Schedule::Strategy : Schedule::Optimal);
}

/// forward -> noise -> reconstruction -> errors for every eps in the config,
/// writing report.json, errors.csv, field files and PGM images under `dir`.
inline ExperimentResult run_experiment(const ExperimentConfig& c, const std::filesystem::path& dir) {
    const int points = c.grid_points();
    const auto truth = phantom(c.phantom_kind, c.phantom, c.K, points);
    const auto family = build_family(c);
    const auto w = build_weight(c, family);
    const auto clean = forward_sinogram(truth.field, family);

    ExperimentResult result;
    Json runs = Json::array();
    for (std::size_t i = 0; i < c.eps.size(); ++i) {
        const double eps = c.eps[i];
        const auto start = std::chrono::steady_clock::now();
        const auto data = add_noise(clean, eps, c.reg.t, derive_seed(c.seed, i));
        const double alpha = scheduled_alpha(c, eps);
        ReconstructionReport report;
        report.method = to_string(c.method);
        const auto rec = reconstruct(c.method, data, w, c.reg, alpha, &report.extension);
        report.errors = measure_errors(rec, truth.field, c.norms, points);
        report.parameters = {{"eps", eps}, {"alpha", alpha}, {"noise_seed", derive_seed(c.seed, i)}};
        report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        const std::string tag = std::to_string(i);
        write_field(dir / ("recon_" + tag + ".field"), rec);
        if (c.images && c.n == 2) {
            write_pgm(dir / ("recon_" + tag + ".pgm"), to_samples(rec, points));
            write_pgm(dir / ("diff_" + tag + ".pgm"), to_samples(rec - truth.field, points));
        }

        if (eps == 0) {
            const double err = sobolev_norm(rec - truth.field, 0.0);
            if (c.method == Method::Tikhonov) {
                if (c.reg.s == c.reg.r && !report.extension) {
                    const double want = sobolev_norm(truth.field, c.reg.r) * alpha / (1 + alpha);
                    const double got = sobolev_norm(rec - truth.field, c.reg.r);
                    result.checks.push_back({"tikhonov s=r closed form (eps=0)", std::abs(got - want) < 1e-10,
                                             "error " + detail::format_double(got) + " vs " + detail::format_double(want)});
                }
            } else {
                result.checks.push_back({to_string(c.method) + " exact inversion (eps=0)", err < 1e-10,
                                         "H^0 error " + detail::format_double(err)});
            }
        }
        runs.push_back(report.to_json());
        result.reports.push_back(std::move(report));
    }

    write_field(dir / "truth.field", truth.field);
    if (c.images && c.n == 2) write_pgm(dir / "truth.pgm", to_samples(truth.field, points));
    write_report_csv(dir / "errors.csv", result.reports);
    Json checks = Json::array();
    for (const auto& ch : result.checks) checks.push_back({{"name", ch.name}, {"pass", ch.pass}, {"detail", ch.detail}});
    write_json(dir / "report.json", {{"config", config_to_json(c)},
                                     {"phantom", {{"analytic_mean", truth.analytic_mean}, {"truncation_residual", truth.truncation_residual}}},
                                     {"family_size", family->size()},
                                     {"runs", runs},
                                     {"checks", checks}});
    return result;
}

struct SweepRow {
    double eps = 0, alpha = 0, err = 0, bound = 0;
    [[nodiscard]] double ratio() const { return err / bound; }
};

struct SweepResult {
    std::vector<SweepRow> rows;
    double slope = 0;         // least-squares slope of log err against log eps
    double target_slope = 0;  // delta / (2s + delta)
    std::vector<CheckResult> checks;
    [[nodiscard]] bool ok() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

inline double loglog_slope(const std::vector<SweepRow>& rows) {
    double mx = 0, my = 0;
    for (const auto& r : rows) mx += std::log(r.eps), my += std::log(r.err);
    mx /= static_cast<double>(rows.size());
    my /= static_cast<double>(rows.size());
    double sxy = 0, sxx = 0;
    for (const auto& r : rows) {
        sxy += (std::log(r.eps) - mx) * (std::log(r.err) - my);
        sxx += (std::log(r.eps) - mx) * (std::log(r.eps) - mx);
    }
    return sxx > 0 ? sxy / sxx : 0.0;
}

/// Tikhonov error against the noise level along the configured schedule:
/// noise of exact H^t norm eps, error in H^r, and the quantitative bound.
inline SweepResult run_sweep(const ExperimentConfig& c) {
    const auto& reg = c.reg;
    if (c.n != 2 || c.d != 1) throw Error(ErrorKind::ConfigInvalid, "family: sweeps use the X-ray transform on T^2 (n = 2, d = 1)");
    if (c.alpha_mode == AlphaMode::Fixed) throw Error(ErrorKind::ConfigInvalid, "reg.schedule: sweeps need strategy or optimal");
    if (!(reg.s > 0) || !(reg.delta > 0 && reg.delta < 2 * reg.s))
        throw Error(ErrorKind::ConfigInvalid, "reg.delta: the bound needs 0 < delta < 2s");
    if (reg.s < reg.r || 2 * reg.s + reg.t < reg.r) throw Error(ErrorKind::ConfigInvalid, "reg: need s >= r and 2s + t >= r");
    for (double e : c.eps)
        if (!(e > 0)) throw Error(ErrorKind::ConfigInvalid, "eps: sweep levels must be positive");

    const auto truth = phantom(c.phantom_kind, c.phantom, c.K, c.grid_points()).field;
    const auto family = build_family(c);
    const auto clean = forward_sinogram(truth, family);
    const double smooth_norm = sobolev_norm(truth, reg.r + reg.delta);

    SweepResult out;
    out.target_slope = reg.delta / (2 * reg.s + reg.delta);
    bool bound_ok = true;
    for (std::size_t i = 0; i < c.eps.size(); ++i) {
        SweepRow row;
        row.eps = c.eps[i];
        row.alpha = scheduled_alpha(c, row.eps);
        if (!(row.alpha <= 2 * reg.s / reg.delta - 1))
            throw Error(ErrorKind::ConfigInvalid, "eps: alpha(" + detail::format_double(row.eps) + ") exceeds 2s/delta - 1");
        const auto data = add_noise(clean, row.eps, reg.t, derive_seed(c.seed, i));
        row.err = sobolev_norm(tikhonov_reconstruct(data, reg.r, reg.s, row.alpha) - truth, reg.r);
        row.bound = error_bound(row.alpha, row.eps, reg.delta, reg.s, smooth_norm);
        bound_ok = bound_ok && row.err <= row.bound;
        out.rows.push_back(row);
    }
    out.slope = loglog_slope(out.rows);
    out.checks.push_back({"error bound holds at every eps", bound_ok, std::to_string(out.rows.size()) + " levels"});
    if (c.alpha_mode == AlphaMode::Optimal && out.rows.size() >= 2) {
        const bool within = std::abs(out.slope - out.target_slope) <= 0.2 * out.target_slope;
        out.checks.push_back({"optimal-rate slope within 20%", within,
                              "slope " + detail::format_double(out.slope) + " target " + detail::format_double(out.target_slope)});
    }
    return out;
}

inline void write_sweep(const std::filesystem::path& dir, const ExperimentConfig& c, const SweepResult& s) {
    auto csv = detail::open_out(dir / "sweep.csv");
    csv << "eps,alpha,err_Hr,bound,ratio\n";
    for (const auto& r : s.rows)
        csv << detail::format_double(r.eps) << ',' << detail::format_double(r.alpha) << ',' << detail::format_double(r.err) << ','
            << detail::format_double(r.bound) << ',' << detail::format_double(r.ratio()) << '\n';
    Json checks = Json::array();
    for (const auto& ch : s.checks) checks.push_back({{"name", ch.name}, {"pass", ch.pass}, {"detail", ch.detail}});
    write_json(dir / "params.json", {{"config", config_to_json(c)},
                                     {"strategy_constant", strategy_constant(c.reg.delta / (2 * c.reg.s))},
                                     {"fitted_slope", s.slope},
                                     {"target_slope", s.target_slope},
                                     {"checks", checks}});
}

}  // namespace torotomo
