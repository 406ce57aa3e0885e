#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "torotomo/error.hpp"
#include "torotomo/lattice.hpp"

namespace torotomo {

using Complex = std::complex<double>;

/// The frequency box |k|_inf <= K in Z^n, indexed lexicographically with the
/// first component most significant.
class Band {
public:
    Band() = default;
    Band(int n, int radius) : n_(n), radius_(radius) {
        if (n < 1) throw Error(ErrorKind::DimensionMismatch, "band dimension must be positive");
        if (radius < 0) throw Error(ErrorKind::BadParams, "band radius must be nonnegative");
        size_ = 1;
        for (int i = 0; i < n; ++i) size_ *= width();
    }

    [[nodiscard]] int dim() const noexcept { return n_; }
    [[nodiscard]] int radius() const noexcept { return radius_; }
    [[nodiscard]] std::size_t width() const noexcept { return static_cast<std::size_t>(2 * radius_ + 1); }
    [[nodiscard]] std::size_t size() const noexcept { return size_; }

    [[nodiscard]] bool contains(std::span<const std::int64_t> k) const noexcept {
        if (static_cast<int>(k.size()) != n_) return false;
        return sup_norm(k) <= radius_;
    }

    [[nodiscard]] std::size_t index(std::span<const std::int64_t> k) const {
        if (!contains(k)) throw Error(ErrorKind::BandTooLarge, "frequency outside the band");
        std::size_t idx = 0;
        for (auto x : k) idx = idx * width() + static_cast<std::size_t>(x + radius_);
        return idx;
    }

    [[nodiscard]] IntVec frequency(std::size_t idx) const {
        IntVec k(static_cast<std::size_t>(n_));
        for (int i = n_ - 1; i >= 0; --i) {
            k[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(idx % width()) - radius_;
            idx /= width();
        }
        return k;
    }

    [[nodiscard]] std::size_t zero_index() const { return (size_ - 1) / 2; }

    /// Index of -k, which is the mirror of idx in this layout.
    [[nodiscard]] std::size_t negated(std::size_t idx) const noexcept { return size_ - 1 - idx; }

    friend bool operator==(const Band&, const Band&) = default;

private:
    int n_ = 0;
    int radius_ = 0;
    std::size_t size_ = 0;
};

/// <k> = (1 + |k|^2)^{1/2}, returned squared to avoid the root where possible.
inline double bracket_sq(std::span<const std::int64_t> k) {
    double s = 1.0;
    for (auto x : k) s += static_cast<double>(x) * static_cast<double>(x);
    return s;
}

/// Band-limited field on T^n given by its Fourier coefficients.
class TorusField {
public:
    TorusField() = default;
    TorusField(int n, int radius, bool real = false) : band_(n, radius), coeffs_(band_.size()), real_(real) {}
    TorusField(Band band, std::vector<Complex> coeffs, bool real = false)
        : band_(band), coeffs_(std::move(coeffs)), real_(real) {
        if (coeffs_.size() != band_.size()) throw Error(ErrorKind::DimensionMismatch, "coefficient count does not match band");
    }

    [[nodiscard]] const Band& band() const noexcept { return band_; }
    [[nodiscard]] int dim() const noexcept { return band_.dim(); }
    [[nodiscard]] int radius() const noexcept { return band_.radius(); }
    [[nodiscard]] bool is_real() const noexcept { return real_; }
    void set_real(bool real) noexcept { real_ = real; }

    [[nodiscard]] std::span<const Complex> coeffs() const noexcept { return coeffs_; }
    [[nodiscard]] std::span<Complex> coeffs() noexcept { return coeffs_; }

    [[nodiscard]] Complex operator[](std::span<const std::int64_t> k) const {
        return band_.contains(k) ? coeffs_[band_.index(k)] : Complex{};
    }
    [[nodiscard]] Complex at(std::initializer_list<std::int64_t> k) const {
        return (*this)[std::span<const std::int64_t>(k.begin(), k.size())];
    }
    void set(std::span<const std::int64_t> k, Complex value) { coeffs_[band_.index(k)] = value; }
    void set(std::initializer_list<std::int64_t> k, Complex value) {
        set(std::span<const std::int64_t>(k.begin(), k.size()), value);
    }

    [[nodiscard]] Complex mean() const { return coeffs_[band_.zero_index()]; }

    /// Largest |f(-k) - conj(f(k))| over the band.
    [[nodiscard]] double hermitian_defect() const {
        double worst = 0;
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            worst = std::max(worst, std::abs(coeffs_[band_.negated(i)] - std::conj(coeffs_[i])));
        return worst;
    }

    TorusField& operator+=(const TorusField& other) {
        check_same_band(other);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
        real_ = real_ && other.real_;
        return *this;
    }
    TorusField& operator-=(const TorusField& other) {
        check_same_band(other);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
        real_ = real_ && other.real_;
        return *this;
    }
    TorusField& operator*=(Complex a) {
        for (auto& c : coeffs_) c *= a;
        real_ = real_ && a.imag() == 0.0;
        return *this;
    }
    friend TorusField operator+(TorusField a, const TorusField& b) { return a += b; }
    friend TorusField operator-(TorusField a, const TorusField& b) { return a -= b; }
    friend TorusField operator*(Complex s, TorusField a) { return a *= s; }

private:
    void check_same_band(const TorusField& other) const {
        if (!(band_ == other.band_)) throw Error(ErrorKind::DimensionMismatch, "fields live on different bands");
    }

    Band band_;
    std::vector<Complex> coeffs_;
    bool real_ = false;
};

/// Samples on the uniform grid x_j = j / N of T^n, first axis most significant.
struct SampleGrid {
    int n = 0;
    int points = 0;
    std::vector<Complex> values;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
};

namespace detail {

inline Complex unit_root(std::int64_t numerator, std::int64_t denominator) {
    const std::int64_t r = ((numerator % denominator) + denominator) % denominator;
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(denominator));
}

// Contracts one axis of a row-major tensor with a dense (out_len x in_len) matrix.
inline std::vector<Complex> apply_axis(const std::vector<Complex>& in, std::vector<std::size_t>& shape, std::size_t axis,
                                       const std::vector<Complex>& mat, std::size_t out_len) {
    const std::size_t in_len = shape[axis];
    std::size_t outer = 1, inner = 1;
    for (std::size_t a = 0; a < axis; ++a) outer *= shape[a];
    for (std::size_t a = axis + 1; a < shape.size(); ++a) inner *= shape[a];
    std::vector<Complex> out(outer * out_len * inner);
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t r = 0; r < out_len; ++r) {
            Complex* dst = out.data() + (o * out_len + r) * inner;
            for (std::size_t i = 0; i < in_len; ++i) {
                const Complex m = mat[r * in_len + i];
                if (m == Complex{}) continue;
                const Complex* src = in.data() + (o * in_len + i) * inner;
                for (std::size_t j = 0; j < inner; ++j) dst[j] += m * src[j];
            }
        }
    shape[axis] = out_len;
    return out;
}

inline void require_grid(int points, int radius) {
    if (points < 2 * radius + 2)
        throw Error(ErrorKind::BandTooLarge,
                    "grid of " + std::to_string(points) + " points cannot carry band radius " + std::to_string(radius));
}

}  // namespace detail

inline SampleGrid to_samples(const TorusField& f, int points) {
    detail::require_grid(points, f.radius());
    const int radius = f.radius();
    const auto width = f.band().width();
    const auto n_pts = static_cast<std::size_t>(points);
    std::vector<Complex> synth(n_pts * width);
    for (std::size_t j = 0; j < n_pts; ++j)
        for (std::size_t m = 0; m < width; ++m)
            synth[j * width + m] = detail::unit_root((static_cast<std::int64_t>(m) - radius) * static_cast<std::int64_t>(j), points);

    std::vector<std::size_t> shape(static_cast<std::size_t>(f.dim()), width);
    std::vector<Complex> data(f.coeffs().begin(), f.coeffs().end());
    for (std::size_t a = 0; a < shape.size(); ++a) data = detail::apply_axis(data, shape, a, synth, n_pts);
    return SampleGrid{f.dim(), points, std::move(data)};
}

inline TorusField to_coefficients(const SampleGrid& grid, int radius, bool real = false) {
    detail::require_grid(grid.points, radius);
    std::size_t expected = 1;
    for (int i = 0; i < grid.n; ++i) expected *= static_cast<std::size_t>(grid.points);
    if (grid.values.size() != expected) throw Error(ErrorKind::DimensionMismatch, "grid value count is not N^n");

    const Band band(grid.n, radius);
    const auto width = band.width();
    const auto n_pts = static_cast<std::size_t>(grid.points);
    const double scale = 1.0 / static_cast<double>(grid.points);
    std::vector<Complex> analysis(width * n_pts);
    for (std::size_t m = 0; m < width; ++m)
        for (std::size_t j = 0; j < n_pts; ++j)
            analysis[m * n_pts + j] =
                scale * detail::unit_root(-(static_cast<std::int64_t>(m) - radius) * static_cast<std::int64_t>(j), grid.points);

    std::vector<std::size_t> shape(static_cast<std::size_t>(grid.n), n_pts);
    std::vector<Complex> data = grid.values;
    for (std::size_t a = 0; a < shape.size(); ++a) data = detail::apply_axis(data, shape, a, analysis, width);
    TorusField f(band, std::move(data), real);
    if (real) {
        // Discard the roundoff-level antisymmetric part so the flag holds exactly.
        auto c = f.coeffs();
        for (std::size_t i = 0; i <= band.zero_index(); ++i) {
            const auto j = band.negated(i);
            const Complex avg = 0.5 * (c[i] + std::conj(c[j]));
            c[i] = avg;
            c[j] = std::conj(avg);
        }
    }
    return f;
}

/// Direct evaluation of the truncated series at one point.
inline Complex evaluate(const TorusField& f, std::span<const double> x) {
    if (static_cast<int>(x.size()) != f.dim()) throw Error(ErrorKind::DimensionMismatch, "point dimension differs from field");
    const int radius = f.radius();
    const auto width = f.band().width();
    std::vector<std::size_t> shape(x.size(), width);
    std::vector<Complex> data(f.coeffs().begin(), f.coeffs().end());
    for (std::size_t a = 0; a < x.size(); ++a) {
        std::vector<Complex> row(width);
        for (std::size_t m = 0; m < width; ++m)
            row[m] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(static_cast<int>(m) - radius) * x[a]);
        data = detail::apply_axis(data, shape, a, row, 1);
    }
    return data.front();
}

inline double grid_lp_norm(const SampleGrid& grid, double p) {
    if (grid.values.empty()) return 0.0;
    const double cell = 1.0 / static_cast<double>(grid.values.size());
    if (std::isinf(p)) {
        double m = 0;
        for (const auto& v : grid.values) m = std::max(m, std::abs(v));
        return m;
    }
    if (p == 1.0) {
        double s = 0;
        for (const auto& v : grid.values) s += std::abs(v);
        return s * cell;
    }
    if (p == 2.0) {
        double s = 0;
        for (const auto& v : grid.values) s += std::norm(v);
        return std::sqrt(s * cell);
    }
    throw Error(ErrorKind::BadParams, "only p in {1, 2, inf} is supported");
}

/// ||f||_{H^s} = (sum <k>^{2s} |f(k)|^2)^{1/2} over the band.
inline double sobolev_norm(const TorusField& f, double s) {
    const auto& band = f.band();
    double acc = 0;
    for (std::size_t i = 0; i < band.size(); ++i) {
        const auto c = f.coeffs()[i];
        if (c == Complex{}) continue;
        acc += std::pow(bracket_sq(band.frequency(i)), s) * std::norm(c);
    }
    return std::sqrt(acc);
}

inline Complex sobolev_inner(const TorusField& f, const TorusField& g, double s) {
    if (!(f.band() == g.band())) throw Error(ErrorKind::DimensionMismatch, "fields live on different bands");
    const auto& band = f.band();
    Complex acc{};
    for (std::size_t i = 0; i < band.size(); ++i) {
        const auto a = f.coeffs()[i];
        const auto b = g.coeffs()[i];
        if (a == Complex{} || b == Complex{}) continue;
        acc += std::pow(bracket_sq(band.frequency(i)), s) * a * std::conj(b);
    }
    return acc;
}

/// Applies the multiplier <k>^s coefficientwise.
inline TorusField bessel_potential(const TorusField& f, double s) {
    TorusField out = f;
    const auto& band = f.band();
    for (std::size_t i = 0; i < band.size(); ++i) out.coeffs()[i] *= std::pow(bracket_sq(band.frequency(i)), 0.5 * s);
    return out;
}

/// Discrete L^p norm of the Bessel potential <k>^s f on the N-grid.
inline double bessel_norm(const TorusField& f, double s, double p, int points) {
    return grid_lp_norm(to_samples(bessel_potential(f, s), points), p);
}

}  // namespace torotomo
