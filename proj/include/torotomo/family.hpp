#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "torotomo/lattice.hpp"
#include "torotomo/torus_field.hpp"

namespace torotomo {

/// A finite set of rational subspaces (the truncated Grassmannian a sinogram
/// or weight lives on) together with its incidence against a frequency band:
/// for each member the band frequencies k != 0 orthogonal to it, and for each
/// frequency the members orthogonal to it. Immutable once built; shared by
/// pointer between sinograms and weights.
class SubspaceFamily {
public:
    static std::shared_ptr<const SubspaceFamily> make(std::vector<RationalSubspace> members, int radius) {
        return std::shared_ptr<const SubspaceFamily>(new SubspaceFamily(std::move(members), radius));
    }

    [[nodiscard]] int ambient_dim() const noexcept { return n_; }
    [[nodiscard]] int dim() const noexcept { return d_; }
    [[nodiscard]] const Band& band() const noexcept { return band_; }
    [[nodiscard]] std::size_t size() const noexcept { return members_.size(); }
    [[nodiscard]] const std::vector<RationalSubspace>& members() const noexcept { return members_; }
    [[nodiscard]] const RationalSubspace& operator[](std::size_t i) const { return members_[i]; }

    [[nodiscard]] std::optional<std::size_t> find(const RationalSubspace& a) const {
        const auto it = std::lower_bound(members_.begin(), members_.end(), a);
        if (it == members_.end() || !(*it == a)) return std::nullopt;
        return static_cast<std::size_t>(it - members_.begin());
    }

    /// Band indices k != 0 with k orthogonal to member i, ascending.
    [[nodiscard]] std::span<const std::uint32_t> support(std::size_t member) const {
        return {support_.data() + support_offsets_[member], support_offsets_[member + 1] - support_offsets_[member]};
    }

    /// Members orthogonal to the band frequency with index `k`, ascending.
    /// Empty for k = 0, where every member contributes.
    [[nodiscard]] std::span<const std::uint32_t> omega(std::size_t k) const {
        return {omega_.data() + omega_offsets_[k], omega_offsets_[k + 1] - omega_offsets_[k]};
    }

    /// Band frequencies k != 0 with no orthogonal member.
    [[nodiscard]] std::vector<IntVec> uncovered() const {
        std::vector<IntVec> out;
        for (std::size_t k = 0; k < band_.size(); ++k)
            if (k != band_.zero_index() && omega(k).empty()) out.push_back(band_.frequency(k));
        return out;
    }

    [[nodiscard]] bool covers_band() const {
        for (std::size_t k = 0; k < band_.size(); ++k)
            if (k != band_.zero_index() && omega(k).empty()) return false;
        return true;
    }

private:
    SubspaceFamily(std::vector<RationalSubspace> members, int radius) : members_(std::move(members)) {
        if (members_.empty()) throw Error(ErrorKind::BadParams, "subspace family is empty");
        std::sort(members_.begin(), members_.end());
        members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
        n_ = members_.front().ambient_dim();
        d_ = members_.front().dim();
        for (const auto& a : members_)
            if (a.ambient_dim() != n_ || a.dim() != d_)
                throw Error(ErrorKind::DimensionMismatch, "family mixes subspaces of different shapes");
        band_ = Band(n_, radius);
        build_incidence();
    }

    void build_incidence() {
        const std::size_t zero = band_.zero_index();
        std::vector<std::vector<std::uint32_t>> per_member(members_.size());
        for (std::size_t m = 0; m < members_.size(); ++m) {
            const auto& a = members_[m];
            auto& sup = per_member[m];
            if (d_ == n_ - 1) {
                // The orthogonal frequencies are the multiples of the primitive normal.
                detail::IntMatrix<detail::BigInt> rows;
                for (int i = 0; i < d_; ++i) {
                    const auto r = a.row(i);
                    rows.emplace_back(r.begin(), r.end());
                }
                const auto kernel = detail::integer_kernel(rows, static_cast<std::size_t>(n_));
                IntVec normal;
                for (const auto& x : kernel.front()) normal.push_back(detail::to_int64(x));
                const auto h = sup_norm(normal);
                for (std::int64_t mult = -band_.radius() / h; mult <= band_.radius() / h; ++mult) {
                    if (mult == 0) continue;
                    IntVec k = normal;
                    for (auto& x : k) x *= mult;
                    sup.push_back(static_cast<std::uint32_t>(band_.index(k)));
                }
                std::sort(sup.begin(), sup.end());
            } else {
                for (std::size_t k = 0; k < band_.size(); ++k)
                    if (k != zero && a.orthogonal_to(band_.frequency(k))) sup.push_back(static_cast<std::uint32_t>(k));
            }
        }
        support_offsets_.assign(1, 0);
        for (const auto& s : per_member) {
            support_.insert(support_.end(), s.begin(), s.end());
            support_offsets_.push_back(support_.size());
        }
        std::vector<std::size_t> counts(band_.size() + 1, 0);
        for (const auto& s : per_member)
            for (auto k : s) ++counts[k + 1];
        omega_offsets_.assign(band_.size() + 1, 0);
        for (std::size_t k = 0; k < band_.size(); ++k) omega_offsets_[k + 1] = omega_offsets_[k] + counts[k + 1];
        omega_.resize(omega_offsets_.back());
        std::vector<std::size_t> fill(omega_offsets_.begin(), omega_offsets_.end() - 1);
        for (std::size_t m = 0; m < per_member.size(); ++m)
            for (auto k : per_member[m]) omega_[fill[k]++] = static_cast<std::uint32_t>(m);
    }

    std::vector<RationalSubspace> members_;
    int n_ = 0;
    int d_ = 0;
    Band band_;
    std::vector<std::uint32_t> support_;
    std::vector<std::size_t> support_offsets_;
    std::vector<std::uint32_t> omega_;
    std::vector<std::size_t> omega_offsets_;
};

using FamilyPtr = std::shared_ptr<const SubspaceFamily>;

inline FamilyPtr family_from_directions(const std::vector<PrimitiveDirection>& directions, int radius) {
    std::vector<RationalSubspace> members;
    members.reserve(directions.size());
    for (const auto& v : directions) members.push_back(as_subspace(v));
    return SubspaceFamily::make(std::move(members), radius);
}

/// Union of the height-H sets Omega_k over the punctured band |k|_inf <= K.
/// This is the part of the truncated Grassmannian that carries any nonzero
/// frequency; subspaces outside it only ever see the shared mean.
inline FamilyPtr covering_family(int d, int n, int radius, std::int64_t height) {
    const Band band(n, radius);
    std::vector<RationalSubspace> members;
    if (d == 1) {
        for (const auto& v : enumerate_directions(n, height)) {
            bool hit = false;
            for (std::size_t k = 0; k < band.size() && !hit; ++k)
                hit = k != band.zero_index() && dot(v.vec(), band.frequency(k)) == 0;
            if (hit) members.push_back(as_subspace(v));
        }
    } else {
        for (std::size_t k = 0; k < band.size(); ++k) {
            if (k == band.zero_index()) continue;
            const auto freq = band.frequency(k);
            // Only primitive frequencies need enumerating; multiples share Omega_k.
            if (primitive_reduce(freq).vec() != freq) continue;
            for (auto& a : omega_k(freq, d, n, height)) members.push_back(std::move(a));
        }
    }
    if (members.empty()) throw Error(ErrorKind::IncompleteCover, "no subspace of the requested height meets the band");
    return SubspaceFamily::make(std::move(members), radius);
}

/// Smallest height H for which covering_family(d, n, K, H) meets every k != 0.
inline std::int64_t complete_cover_height(int d, int n, int radius) {
    const Band band(n, radius);
    if (d == n - 1) {
        std::int64_t h = 1;
        for (std::size_t k = 0; k < band.size(); ++k)
            if (k != band.zero_index()) h = std::max(h, orthogonal_hyperplane(band.frequency(k)).height());
        return h;
    }
    for (std::int64_t h = 1;; ++h) {
        bool ok = true;
        for (std::size_t k = 0; k < band.size() && ok; ++k) {
            if (k == band.zero_index()) continue;
            ok = !omega_k(band.frequency(k), d, n, h).empty();
        }
        if (ok) return h;
    }
}

}  // namespace torotomo
