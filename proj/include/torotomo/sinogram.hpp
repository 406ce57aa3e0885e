#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "torotomo/family.hpp"
#include "torotomo/torus_field.hpp"
#include "torotomo/weight.hpp"

namespace torotomo {

struct SliceEntry {
    std::uint32_t k;  // band index
    Complex value;

    friend bool operator==(const SliceEntry&, const SliceEntry&) = default;
};

/// Sparse Fourier data of one slice g(., A), sorted by band index, never
/// holding k = 0 (the mean is shared across slices).
using SliceData = std::vector<SliceEntry>;

inline bool same_family(const FamilyPtr& a, const FamilyPtr& b) {
    if (a == b) return true;
    return a && b && a->band() == b->band() && a->members() == b->members();
}

namespace detail {

inline void validate_slice(const SliceData& s, const Band& band) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i].k >= band.size()) throw Error(ErrorKind::BandTooLarge, "slice entry outside the band");
        if (s[i].k == band.zero_index()) throw Error(ErrorKind::BadParams, "slice entries must not hold k = 0");
        if (i && s[i].k <= s[i - 1].k) throw Error(ErrorKind::BadParams, "slice entries must be strictly ascending");
    }
}

template <class Op>
SliceData merge(const SliceData& a, const SliceData& b, Op op) {
    SliceData out;
    out.reserve(std::max(a.size(), b.size()));
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].k < b[j].k)) {
            out.push_back({a[i].k, op(a[i].value, Complex{})});
            ++i;
        } else if (i == a.size() || b[j].k < a[i].k) {
            out.push_back({b[j].k, op(Complex{}, b[j].value)});
            ++j;
        } else {
            out.push_back({a[i].k, op(a[i].value, b[j].value)});
            ++i;
            ++j;
        }
    }
    return out;
}

}  // namespace detail

/// Data g on T^n x (family): one shared mean plus sparse per-subspace slices.
class TorusSinogram {
public:
    explicit TorusSinogram(FamilyPtr family) : family_(std::move(family)), slices_(family_->size()) {}
    TorusSinogram(FamilyPtr family, Complex mean, std::vector<SliceData> slices)
        : family_(std::move(family)), mean_(mean), slices_(std::move(slices)) {
        if (slices_.size() != family_->size()) throw Error(ErrorKind::DimensionMismatch, "one slice per family member expected");
        for (const auto& s : slices_) detail::validate_slice(s, family_->band());
    }

    [[nodiscard]] const FamilyPtr& family() const noexcept { return family_; }
    [[nodiscard]] const Band& band() const noexcept { return family_->band(); }
    [[nodiscard]] Complex mean() const noexcept { return mean_; }
    void set_mean(Complex m) noexcept { mean_ = m; }
    [[nodiscard]] std::size_t size() const noexcept { return slices_.size(); }
    [[nodiscard]] const SliceData& slice(std::size_t member) const { return slices_[member]; }
    [[nodiscard]] const std::vector<SliceData>& slices() const noexcept { return slices_; }

    void set_slice(std::size_t member, SliceData data) {
        detail::validate_slice(data, band());
        slices_[member] = std::move(data);
    }

    [[nodiscard]] Complex entry(std::size_t member, std::size_t k) const {
        if (k == band().zero_index()) return mean_;
        const auto& s = slices_[member];
        const auto it = std::lower_bound(s.begin(), s.end(), k, [](const SliceEntry& e, std::size_t key) { return e.k < key; });
        return (it != s.end() && it->k == k) ? it->value : Complex{};
    }

    /// Dense field of slice A including the shared mean.
    [[nodiscard]] TorusField slice_field(std::size_t member) const {
        TorusField f(band().dim(), band().radius());
        f.coeffs()[band().zero_index()] = mean_;
        for (const auto& e : slices_[member]) f.coeffs()[e.k] = e.value;
        return f;
    }

    [[nodiscard]] Complex evaluate_slice(std::size_t member, std::span<const double> x) const {
        Complex acc = mean_;
        for (const auto& e : slices_[member]) {
            const auto k = band().frequency(e.k);
            double phase = 0;
            for (std::size_t i = 0; i < k.size(); ++i) phase += static_cast<double>(k[i]) * x[i];
            acc += e.value * std::polar(1.0, 2.0 * std::numbers::pi * phase);
        }
        return acc;
    }

    TorusSinogram& operator+=(const TorusSinogram& o) { return combine(o, [](Complex a, Complex b) { return a + b; }); }
    TorusSinogram& operator-=(const TorusSinogram& o) { return combine(o, [](Complex a, Complex b) { return a - b; }); }
    TorusSinogram& operator*=(Complex a) {
        mean_ *= a;
        for (auto& s : slices_)
            for (auto& e : s) e.value *= a;
        return *this;
    }
    friend TorusSinogram operator+(TorusSinogram a, const TorusSinogram& b) { return a += b; }
    friend TorusSinogram operator-(TorusSinogram a, const TorusSinogram& b) { return a -= b; }
    friend TorusSinogram operator*(Complex s, TorusSinogram a) { return a *= s; }

private:
    template <class Op>
    TorusSinogram& combine(const TorusSinogram& o, Op op) {
        if (!same_family(family_, o.family_)) throw Error(ErrorKind::DimensionMismatch, "sinograms live on different families");
        mean_ = op(mean_, o.mean_);
        for (std::size_t i = 0; i < slices_.size(); ++i) slices_[i] = detail::merge(slices_[i], o.slices_[i], op);
        return *this;
    }

    FamilyPtr family_;
    Complex mean_{};
    std::vector<SliceData> slices_;
};

/// How far g is from range(R_d) on the band: the largest off-support entry
/// (k not orthogonal to A) and the largest spread of g(k, .) across Omega_k,
/// where range data must agree. Zero exactly for transform outputs.
inline double range_defect(const TorusSinogram& g) {
    const auto& fam = *g.family();
    double defect = 0;
    for (std::size_t m = 0; m < g.size(); ++m) {
        const auto sup = fam.support(m);
        for (const auto& e : g.slice(m))
            if (!std::binary_search(sup.begin(), sup.end(), e.k)) defect = std::max(defect, std::abs(e.value));
    }
    for (std::size_t k = 0; k < fam.band().size(); ++k) {
        const auto om = fam.omega(k);
        if (om.size() < 2) continue;
        const Complex ref = g.entry(om.front(), k);
        for (auto m : om) defect = std::max(defect, std::abs(g.entry(m, k) - ref));
    }
    return defect;
}

inline bool in_range(const TorusSinogram& g, double tol = 0.0) { return range_defect(g) <= tol; }

namespace detail {
inline void require_weight_family(const TorusSinogram& g, const WeightRule& w) {
    if (!same_family(g.family(), w.family()))
        throw Error(ErrorKind::WeightUndefined, "sinogram slices do not live on the weight's subspace family");
}
}  // namespace detail

/// Inner product of L^{2,2}_s(X; w): W_0 m_g conj(m_h) plus
/// sum_A sum_{k != 0} <k>^{2s} w(k, A)^2 g(k, A) conj(h(k, A)).
inline Complex sinogram_inner(const TorusSinogram& g, const TorusSinogram& h, double s, const WeightRule& w) {
    detail::require_weight_family(g, w);
    if (!same_family(g.family(), h.family())) throw Error(ErrorKind::DimensionMismatch, "sinograms live on different families");
    const auto& band = g.band();
    Complex acc = w.normal(band.zero_index()) * g.mean() * std::conj(h.mean());
    for (std::size_t m = 0; m < g.size(); ++m) {
        const auto& a = g.slice(m);
        const auto& b = h.slice(m);
        std::size_t j = 0;
        for (const auto& e : a) {
            while (j < b.size() && b[j].k < e.k) ++j;
            if (j == b.size()) break;
            if (b[j].k != e.k) continue;
            const double wk = w.weight(e.k, m);
            acc += std::pow(bracket_sq(band.frequency(e.k)), s) * wk * wk * e.value * std::conj(b[j].value);
        }
    }
    return acc;
}

/// Norm of L^{p,l}_s(X; w). Each slice g(., A), shared mean included, is
/// weighted by w(., A) and measured in L^p_s (grid quadrature on `points`
/// nodes per axis when p != 2); the per-slice norms are combined in l^l.
inline double sinogram_norm(const TorusSinogram& g, double s, const WeightRule& w, double p = 2.0, double l = 2.0,
                            int points = 0) {
    detail::require_weight_family(g, w);
    const auto& band = g.band();
    const auto zero = band.zero_index();
    const bool l_inf = std::isinf(l);
    if (!(l == 1.0 || l == 2.0 || l_inf)) throw Error(ErrorKind::BadParams, "only l in {1, 2, inf} is supported");
    if (points == 0) points = 2 * band.radius() + 2;

    double acc = 0;
    for (std::size_t m = 0; m < g.size(); ++m) {
        double slice_norm = 0;
        if (p == 2.0) {
            double sq = std::pow(w.weight(zero, m), 2) * std::norm(g.mean());
            for (const auto& e : g.slice(m))
                sq += std::pow(bracket_sq(band.frequency(e.k)), s) * std::pow(w.weight(e.k, m), 2) * std::norm(e.value);
            slice_norm = std::sqrt(sq);
        } else {
            TorusField f(band.dim(), band.radius());
            f.coeffs()[zero] = w.weight(zero, m) * g.mean();
            for (const auto& e : g.slice(m))
                f.coeffs()[e.k] = std::pow(bracket_sq(band.frequency(e.k)), 0.5 * s) * w.weight(e.k, m) * e.value;
            slice_norm = grid_lp_norm(to_samples(f, points), p);
        }
        if (l_inf)
            acc = std::max(acc, slice_norm);
        else
            acc += std::pow(slice_norm, l);
    }
    return l_inf ? acc : std::pow(acc, 1.0 / l);
}

/// The unweighted data norm of H^s(T^2 x Q) generalised to any family:
/// |mean|^2 + sum over every stored entry of <k>^{2s} |g(k, A)|^2.
inline double unweighted_norm(const TorusSinogram& g, double s) {
    const auto& band = g.band();
    double sq = std::norm(g.mean());
    for (const auto& slice : g.slices())
        for (const auto& e : slice) sq += std::pow(bracket_sq(band.frequency(e.k)), s) * std::norm(e.value);
    return std::sqrt(sq);
}

/// Measured data whose slices still carry their own averages m_A.
struct RawSinogram {
    FamilyPtr family;
    std::vector<Complex> slice_means;
    std::vector<SliceData> slices;
};

/// p = l = 2 weighted norm of raw data, each slice with its own mean.
inline double raw_norm(const RawSinogram& g, double s, const WeightRule& w) {
    if (!same_family(g.family, w.family())) throw Error(ErrorKind::WeightUndefined, "raw data and weight differ in family");
    const auto& band = g.family->band();
    double sq = 0;
    for (std::size_t m = 0; m < g.slices.size(); ++m) {
        sq += std::pow(w.weight(band.zero_index(), m), 2) * std::norm(g.slice_means[m]);
        for (const auto& e : g.slices[m])
            sq += std::pow(bracket_sq(band.frequency(e.k)), s) * std::pow(w.weight(e.k, m), 2) * std::norm(e.value);
    }
    return std::sqrt(sq);
}

inline RawSinogram to_raw(const TorusSinogram& g) {
    return RawSinogram{g.family(), std::vector<Complex>(g.size(), g.mean()), g.slices()};
}

/// Projects raw data onto the shared-mean constraint: the common mean is the
/// w(0, A)^2-weighted average of the slice means, the minimiser of the
/// p = l = 2 distance.
inline TorusSinogram enforce_moment_constraint(const RawSinogram& raw, const WeightRule& w) {
    if (!same_family(raw.family, w.family())) throw Error(ErrorKind::WeightUndefined, "raw data and weight differ in family");
    if (raw.slice_means.size() != raw.family->size() || raw.slices.size() != raw.family->size())
        throw Error(ErrorKind::DimensionMismatch, "raw data needs one mean and one slice per family member");
    const auto zero = raw.family->band().zero_index();
    Complex num{};
    double den = 0;
    for (std::size_t m = 0; m < raw.slice_means.size(); ++m) {
        const double w2 = std::pow(w.weight(zero, m), 2);
        num += w2 * raw.slice_means[m];
        den += w2;
    }
    return TorusSinogram(raw.family, num / den, raw.slices);
}

}  // namespace torotomo
