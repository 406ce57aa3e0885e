#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "torotomo/sinogram.hpp"
#include "torotomo/torus_field.hpp"

namespace torotomo {

namespace detail {
inline void put_le64(std::ostream& out, double value) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(value);
    unsigned char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(bits >> (8 * i));
    out.write(reinterpret_cast<const char*>(bytes), 8);
}

inline double get_le64(std::istream& in) {
    unsigned char bytes[8];
    if (!in.read(reinterpret_cast<char*>(bytes), 8)) throw Error(ErrorKind::Io, "truncated coefficient data");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    return std::bit_cast<double>(bits);
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::ofstream open_out(const std::filesystem::path& path, bool binary = false) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    return out;
}
}  // namespace detail

/// One JSON header line {"K","n","real_flag"}, then interleaved little-endian
/// float64 (re, im) pairs in lexicographic k order.
inline void write_field(const std::filesystem::path& path, const TorusField& f) {
    auto out = detail::open_out(path, true);
    const nlohmann::json header = {{"n", f.dim()}, {"K", f.radius()}, {"real_flag", f.is_real()}};
    out << header.dump() << '\n';
    for (const auto& c : f.coeffs()) {
        detail::put_le64(out, c.real());
        detail::put_le64(out, c.imag());
    }
}

inline TorusField read_field(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
    std::string line;
    std::getline(in, line);
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Io, path.string() + ": bad header: " + e.what());
    }
    TorusField f(header.at("n").get<int>(), header.at("K").get<int>(), header.value("real_flag", false));
    for (auto& c : f.coeffs()) {
        const double re = detail::get_le64(in);
        c = {re, detail::get_le64(in)};
    }
    return f;
}

/// File name for a subspace: its serialization with spaces as '_' and
/// row separators as '__'.
inline std::string subspace_file_name(const RationalSubspace& a) {
    std::string out;
    for (char ch : a.serialize()) {
        out += (ch == ' ' || ch == ';') ? '_' : ch;
    }
    return out + ".field";
}

/// Directory with meta.json, mean.txt and one dense field file per subspace
/// (shared mean included), in family order.
inline void write_sinogram(const std::filesystem::path& dir, const TorusSinogram& g) {
    std::filesystem::create_directories(dir);
    const auto& fam = *g.family();
    nlohmann::json meta = {{"n", fam.ambient_dim()}, {"d", fam.dim()}, {"K", fam.band().radius()}};
    auto& members = meta["subspaces"] = nlohmann::json::array();
    for (std::size_t m = 0; m < fam.size(); ++m) {
        members.push_back({{"basis", fam[m].serialize()}, {"file", subspace_file_name(fam[m])}});
        write_field(dir / subspace_file_name(fam[m]), g.slice_field(m));
    }
    detail::open_out(dir / "meta.json") << meta.dump(2) << '\n';
    detail::open_out(dir / "mean.txt") << detail::format_double(g.mean().real()) << ' ' << detail::format_double(g.mean().imag())
                                       << '\n';
}

inline TorusSinogram read_sinogram(const std::filesystem::path& dir) {
    std::ifstream meta_in(dir / "meta.json");
    if (!meta_in) throw Error(ErrorKind::Io, "cannot read " + (dir / "meta.json").string());
    const auto meta = nlohmann::json::parse(meta_in);
    std::vector<RationalSubspace> members;
    for (const auto& entry : meta.at("subspaces")) members.push_back(parse_subspace(entry.at("basis").get<std::string>()));
    const auto family = SubspaceFamily::make(members, meta.at("K").get<int>());

    std::ifstream mean_in(dir / "mean.txt");
    double re = 0, im = 0;
    if (!(mean_in >> re >> im)) throw Error(ErrorKind::Io, "cannot read " + (dir / "mean.txt").string());

    std::vector<SliceData> slices(family->size());
    for (std::size_t m = 0; m < family->size(); ++m) {
        const auto f = read_field(dir / subspace_file_name((*family)[m]));
        if (!(f.band() == family->band())) throw Error(ErrorKind::Io, "slice band differs from meta.json");
        const auto& band = family->band();
        for (std::uint32_t k = 0; k < band.size(); ++k)
            if (k != band.zero_index() && f.coeffs()[k] != Complex{}) slices[m].push_back({k, f.coeffs()[k]});
        for (auto k : family->support(m))
            if (f.coeffs()[k] == Complex{}) slices[m].push_back({k, Complex{}});
        std::sort(slices[m].begin(), slices[m].end(), [](const SliceEntry& a, const SliceEntry& b) { return a.k < b.k; });
    }
    return TorusSinogram(family, {re, im}, std::move(slices));
}

/// Binary PGM (P5, maxval 65535, big-endian samples) of a real N x N grid,
/// scaled linearly from [min, max]; the range is recorded as a comment.
/// Row i of the image is x_1 = i / N.
inline void write_pgm(const std::filesystem::path& path, const SampleGrid& grid) {
    if (grid.n != 2) throw Error(ErrorKind::BadParams, "PGM output needs a 2-d grid");
    double lo = grid.values.front().real(), hi = lo;
    for (const auto& v : grid.values) {
        lo = std::min(lo, v.real());
        hi = std::max(hi, v.real());
    }
    auto out = detail::open_out(path, true);
    out << "P5\n# min " << detail::format_double(lo) << " max " << detail::format_double(hi) << '\n'
        << grid.points << ' ' << grid.points << "\n65535\n";
    const double span = hi > lo ? hi - lo : 1.0;
    for (const auto& v : grid.values) {
        const auto level = static_cast<std::uint16_t>(std::lround(std::clamp((v.real() - lo) / span, 0.0, 1.0) * 65535.0));
        const char bytes[2] = {static_cast<char>(level >> 8), static_cast<char>(level & 0xff)};
        out.write(bytes, 2);
    }
}

}  // namespace torotomo
