#pragma once

#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "torotomo/family.hpp"
#include "torotomo/sinogram.hpp"
#include "torotomo/weight.hpp"

namespace torotomo {

/// Parallel-beam data of an object supported in the disk of radius rho about
/// (1/2, 1/2). Row a holds the line integrals (arc length) along direction
/// angles[a] at offsets tau_j = j / N, where tau = (x - (1/2,1/2)) . nhat + 1/2
/// and nhat = (-v_y, v_x) / |v|. Angles are oriented: a row tagged -v is
/// the same line set as v with tau reversed.
struct EuclideanSinogram {
    std::vector<IntVec> angles;
    int offsets = 0;
    std::vector<std::vector<double>> values;
    double rho = 0.0;

    [[nodiscard]] double offset(int j) const { return static_cast<double>(j) / offsets; }
};

/// Analytic sinogram of the unit-density disk: chord length 2 sqrt(rho^2 - (tau - 1/2)^2).
inline EuclideanSinogram disk_sinogram(const std::vector<PrimitiveDirection>& angles, int offsets, double rho) {
    if (!(rho > 0 && rho < 0.5)) throw Error(ErrorKind::GeometryViolation, "object radius must lie in (0, 1/2)");
    if (offsets < 2) throw Error(ErrorKind::BadParams, "need at least two offsets");
    EuclideanSinogram s{{}, offsets, {}, rho};
    for (const auto& v : angles) s.angles.push_back(v.vec());
    std::vector<double> row(static_cast<std::size_t>(offsets));
    for (int j = 0; j < offsets; ++j) {
        const double u = s.offset(j) - 0.5;
        row[static_cast<std::size_t>(j)] = u * u < rho * rho ? 2.0 * std::sqrt(rho * rho - u * u) : 0.0;
    }
    s.values.assign(angles.size(), row);
    return s;
}

namespace detail {
/// int_0^1 P(tau) e^{-2 pi i xi tau} dtau for the trigonometric interpolant P
/// of samples p_j = P(j / N), with the Nyquist mode split evenly for even N.
class ProfileTransform {
public:
    explicit ProfileTransform(const std::vector<double>& samples) : n_(static_cast<int>(samples.size())) {
        lo_ = -(n_ - 1) / 2;
        hi_ = n_ / 2;
        std::vector<Complex> twiddle(static_cast<std::size_t>(n_));
        for (int j = 0; j < n_; ++j) twiddle[static_cast<std::size_t>(j)] = std::polar(1.0, -2.0 * std::numbers::pi * j / n_);
        for (int q = lo_; q <= hi_; ++q) {
            Complex acc{};
            const long long step = ((q % n_) + n_) % n_;
            for (int j = 0; j < n_; ++j) acc += samples[static_cast<std::size_t>(j)] * twiddle[static_cast<std::size_t>((step * j) % n_)];
            coeffs_.push_back(acc / static_cast<double>(n_));
        }
    }

    [[nodiscard]] Complex operator()(double xi) const {
        Complex acc{};
        for (int q = lo_; q <= hi_; ++q) {
            const Complex c = coeffs_[static_cast<std::size_t>(q - lo_)];
            if (n_ % 2 == 0 && q == hi_) {
                acc += 0.5 * c * (segment(q - xi) + segment(-q - xi));
            } else {
                acc += c * segment(q - xi);
            }
        }
        return acc;
    }

private:
    /// int_0^1 e^{2 pi i a tau} dtau.
    static Complex segment(double a) {
        if (std::abs(a) < 1e-14) return 1.0;
        const Complex z(0.0, 2.0 * std::numbers::pi * a);
        return (std::exp(z) - 1.0) / z;
    }

    int n_;
    int lo_ = 0;
    int hi_ = 0;
    std::vector<Complex> coeffs_;
};
}  // namespace detail

/// Torus data from Euclidean data. For direction v the closed geodesic
/// through x lifts to parallel lines at offsets tau(x) + m / |v|, so the
/// period-1 datum is |v|^{-1} sum_m p(tau(x) + m / |v|). Written in Fourier
/// form, the coefficient at k = m v^perp is
///   e^{2 pi i m |v| c0} int P(tau) e^{-2 pi i m |v| tau} dtau,  c0 = 1/2 - c . nhat,
/// evaluated exactly for the band-limited interpolant P of each row. Slice
/// averages are reconciled into one shared mean by the w(0, A)^2-weighted
/// average.
inline TorusSinogram bridge_ingest(const EuclideanSinogram& sino, const FamilyPtr& family, const WeightRule& w) {
    if (!(sino.rho > 0 && sino.rho < 0.5)) throw Error(ErrorKind::GeometryViolation, "object radius must lie in (0, 1/2)");
    if (family->ambient_dim() != 2 || family->dim() != 1) throw Error(ErrorKind::DimensionMismatch, "the bridge feeds lines on T^2");
    const double centre[2] = {0.5, 0.5};

    // Canonical direction -> (row, reversed); a row tagged exactly v wins over -v.
    std::map<PrimitiveDirection, std::pair<std::size_t, bool>> rows;
    for (std::size_t a = 0; a < sino.angles.size(); ++a) {
        if (sino.angles[a].size() != 2) throw Error(ErrorKind::DimensionMismatch, "Euclidean angles must be planar");
        const auto v = primitive_reduce(sino.angles[a]);
        const std::int64_t g = std::gcd(sino.angles[a][0], sino.angles[a][1]);
        const bool reversed = sino.angles[a][0] / g != v[0] || sino.angles[a][1] / g != v[1];
        auto [it, fresh] = rows.emplace(v, std::pair{a, reversed});
        if (!fresh && it->second.second && !reversed) it->second = {a, false};
    }

    const auto& band = family->band();
    RawSinogram raw{family, std::vector<Complex>(family->size()), std::vector<SliceData>(family->size())};
    for (std::size_t m = 0; m < family->size(); ++m) {
        const auto& basis = (*family)[m].basis();
        const auto v = primitive_reduce({basis[0], basis[1]});
        const auto it = rows.find(v);
        if (it == rows.end()) throw Error(ErrorKind::MissingAngle, "no Euclidean data for direction " + v.serialize());
        auto row = sino.values[it->second.first];
        if (static_cast<int>(row.size()) != sino.offsets) throw Error(ErrorKind::BadParams, "ragged sinogram row");
        // Data tagged -v: nhat flips, so tau -> 1 - tau, i.e. sample j -> N - j.
        if (it->second.second) {
            auto mirrored = row;
            for (int j = 0; j < sino.offsets; ++j)
                mirrored[static_cast<std::size_t>(j)] = row[static_cast<std::size_t>((sino.offsets - j) % sino.offsets)];
            row = std::move(mirrored);
        }
        const detail::ProfileTransform transform(row);
        const double len = v.euclidean_norm();
        const std::int64_t perp[2] = {-v[1], v[0]};
        const double c0 = 0.5 - (centre[0] * static_cast<double>(perp[0]) + centre[1] * static_cast<double>(perp[1])) / len;

        raw.slice_means[m] = transform(0.0);
        for (auto k : family->support(m)) {
            const auto freq = band.frequency(k);
            const std::int64_t mult = (freq[0] * perp[0] + freq[1] * perp[1]) / (perp[0] * perp[0] + perp[1] * perp[1]);
            const double xi = static_cast<double>(mult) * len;
            raw.slices[m].push_back({k, std::polar(1.0, 2.0 * std::numbers::pi * xi * c0) * transform(xi)});
        }
    }
    return enforce_moment_constraint(raw, w);
}

/// CSV with header `angle_vx,angle_vy,offset,value`, rows grouped by angle in
/// order of first appearance, offsets ascending.
inline void write_euclidean_csv(const std::string& path, const EuclideanSinogram& s) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
    out << "angle_vx,angle_vy,offset,value\n";
    char buf[96];
    for (std::size_t a = 0; a < s.angles.size(); ++a)
        for (int j = 0; j < s.offsets; ++j) {
            std::snprintf(buf, sizeof buf, "%lld,%lld,%.17g,%.17g\n", static_cast<long long>(s.angles[a][0]),
                          static_cast<long long>(s.angles[a][1]), s.offset(j), s.values[a][static_cast<std::size_t>(j)]);
            out << buf;
        }
}

/// Reads the CSV above; offsets must form the uniform grid j / N for every angle.
inline EuclideanSinogram read_euclidean_csv(const std::string& path, double rho) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot read " + path);
    std::string line;
    std::getline(in, line);
    if (line.rfind("angle_vx,angle_vy,offset,value", 0) != 0) throw Error(ErrorKind::ConfigInvalid, path + ": missing CSV header");
    EuclideanSinogram s;
    s.rho = rho;
    std::map<IntVec, std::size_t> index;
    std::vector<std::vector<std::pair<double, double>>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string a, b, c, d;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c, ',') || !std::getline(ss, d))
            throw Error(ErrorKind::ConfigInvalid, path + ": malformed row '" + line + "'");
        IntVec v;
        double tau = 0, value = 0;
        try {
            v = {std::stoll(a), std::stoll(b)};
            tau = std::stod(c);
            value = std::stod(d);
        } catch (const std::exception&) {
            throw Error(ErrorKind::ConfigInvalid, path + ": malformed row '" + line + "'");
        }
        const std::int64_t g = std::gcd(v[0], v[1]);
        if (g == 0) throw Error(ErrorKind::ConfigInvalid, path + ": zero direction");
        for (auto& x : v) x /= g;
        auto [it, fresh] = index.emplace(v, rows.size());
        if (fresh) {
            s.angles.push_back(v);
            rows.emplace_back();
        }
        rows[it->second].emplace_back(tau, value);
    }
    if (rows.empty()) throw Error(ErrorKind::ConfigInvalid, path + ": no data rows");
    s.offsets = static_cast<int>(rows.front().size());
    for (auto& r : rows) {
        if (static_cast<int>(r.size()) != s.offsets) throw Error(ErrorKind::ConfigInvalid, path + ": angles have different offset counts");
        std::sort(r.begin(), r.end());
        std::vector<double> values;
        for (int j = 0; j < s.offsets; ++j) {
            if (std::abs(r[static_cast<std::size_t>(j)].first - s.offset(j)) > 1e-9)
                throw Error(ErrorKind::ConfigInvalid, path + ": offsets must be the uniform grid j/N");
            values.push_back(r[static_cast<std::size_t>(j)].second);
        }
        s.values.push_back(std::move(values));
    }
    return s;
}

}  // namespace torotomo
