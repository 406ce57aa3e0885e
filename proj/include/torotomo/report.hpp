#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "torotomo/io.hpp"
#include "torotomo/torus_field.hpp"

namespace torotomo {

struct NormError {
    std::string label;  // "H^s", "grid_L2" or "grid_Linf"
    double s = 0.0;
    double value = 0.0;
};

/// Outcome of one reconstruction. Wall-clock time is kept out of the file
/// outputs so that they stay byte-stable across runs.
struct ReconstructionReport {
    std::string method;
    nlohmann::json parameters = nlohmann::json::object();
    std::vector<NormError> errors;
    double seconds = 0.0;
    bool extension = false;

    [[nodiscard]] double error(const std::string& label, double s = 0.0) const {
        for (const auto& e : errors)
            if (e.label == label && e.s == s) return e.value;
        throw Error(ErrorKind::BadParams, "report has no " + label + " error");
    }

    [[nodiscard]] nlohmann::json to_json(bool with_timing = false) const {
        nlohmann::json j = {{"method", method}, {"parameters", parameters}, {"extension", extension}};
        auto& list = j["errors"] = nlohmann::json::array();
        for (const auto& e : errors) list.push_back({{"norm", e.label}, {"s", e.s}, {"error", e.value}});
        if (with_timing) j["seconds"] = seconds;
        return j;
    }
};

/// Errors of `rec` against `truth`: H^s for every s listed, plus grid L^2
/// and L^inf on an N-grid.
inline std::vector<NormError> measure_errors(const TorusField& rec, const TorusField& truth, const std::vector<double>& sobolev,
                                             int points) {
    const auto diff = rec - truth;
    std::vector<NormError> out;
    for (double s : sobolev) out.push_back({"H^s", s, sobolev_norm(diff, s)});
    const auto grid = to_samples(diff, points);
    out.push_back({"grid_L2", 0.0, grid_lp_norm(grid, 2.0)});
    out.push_back({"grid_Linf", 0.0, grid_lp_norm(grid, std::numeric_limits<double>::infinity())});
    return out;
}

/// CSV with columns method,s,error; grid norms carry their label in the s column.
inline void write_report_csv(const std::filesystem::path& path, const std::vector<ReconstructionReport>& reports) {
    auto out = detail::open_out(path);
    out << "method,s,error\n";
    for (const auto& r : reports)
        for (const auto& e : r.errors)
            out << r.method << ',' << (e.label == "H^s" ? detail::format_double(e.s) : e.label) << ','
                << detail::format_double(e.value) << '\n';
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) { detail::open_out(path) << j.dump(2) << '\n'; }

}  // namespace torotomo
