#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <map>
#include <vector>

#include "torotomo/family.hpp"

namespace torotomo {

enum class WeightKind { CanonicalSingleton, HeightDecay, CustomTable };

inline std::string to_string(WeightKind kind) {
    switch (kind) {
        case WeightKind::CanonicalSingleton: return "canonical-singleton";
        case WeightKind::HeightDecay: return "height-decay";
        case WeightKind::CustomTable: return "custom-table";
    }
    return "unknown";
}

inline WeightKind parse_weight_kind(const std::string& text) {
    if (text == "canonical-singleton" || text == "canonical") return WeightKind::CanonicalSingleton;
    if (text == "height-decay") return WeightKind::HeightDecay;
    if (text == "custom-table") return WeightKind::CustomTable;
    throw Error(ErrorKind::BadParams, "unknown weight kind '" + text + "'");
}

struct WeightParams {
    /// Height-decay uses w(k, A) = base^{-h(A)}.
    double decay_base = 2.0;
    /// Custom-table entries keyed by (band index of k, member index of A).
    std::map<std::pair<std::size_t, std::size_t>, double> table;
};

/// Lower bound w(k, A) >= c <k>^{-m} for a fixed subspace.
struct DecayBound {
    double c = 0;
    double m = 0;
};

/// The weight w(k, A) on a subspace family together with the normal-operator
/// symbol W_k = sum_{A in Omega_k} w(k, A)^2 and the constants
/// C_w = max sqrt(W_k), c_w = min sqrt(W_k), both taken over the whole band
/// including k = 0 (where every member of the family contributes).
class WeightRule {
public:
    [[nodiscard]] WeightKind kind() const noexcept { return kind_; }
    [[nodiscard]] const FamilyPtr& family() const noexcept { return family_; }
    [[nodiscard]] const Band& band() const noexcept { return family_->band(); }

    [[nodiscard]] bool defined(std::size_t k, std::size_t member) const {
        if (kind_ != WeightKind::CustomTable) return true;
        return params_.table.contains({k, member});
    }

    /// w(k, A) for the band index k and family member index A.
    [[nodiscard]] double weight(std::size_t k, std::size_t member) const {
        switch (kind_) {
            case WeightKind::CanonicalSingleton:
                return k == band().zero_index() ? zero_weight_ : 1.0;
            case WeightKind::HeightDecay:
                return height_weight_[member];
            case WeightKind::CustomTable: {
                const auto it = params_.table.find({k, member});
                if (it == params_.table.end())
                    throw Error(ErrorKind::WeightUndefined, "no weight for k=" + std::to_string(k) + ", subspace " +
                                                                (*family_)[member].serialize());
                return it->second;
            }
        }
        return 0.0;
    }

    /// w~(k, A) = w(k, A) / sqrt(W_k); sums of squares over Omega_k equal 1.
    [[nodiscard]] double normalized_weight(std::size_t k, std::size_t member) const {
        return weight(k, member) / std::sqrt(normal_[k]);
    }

    [[nodiscard]] double normal(std::size_t k) const { return normal_[k]; }
    [[nodiscard]] std::span<const double> normal_symbol() const noexcept { return normal_; }
    [[nodiscard]] double upper_constant() const noexcept { return upper_; }
    [[nodiscard]] double lower_constant() const noexcept { return lower_; }

    [[nodiscard]] DecayBound decay_bound(std::size_t member) const {
        switch (kind_) {
            case WeightKind::CanonicalSingleton: return {std::min(1.0, zero_weight_), 0.0};
            case WeightKind::HeightDecay: return {height_weight_[member], 0.0};
            case WeightKind::CustomTable: {
                double c = std::numeric_limits<double>::infinity();
                for (const auto& [key, w] : params_.table)
                    if (key.second == member) c = std::min(c, w);
                return {std::isinf(c) ? 0.0 : c, 0.0};
            }
        }
        return {};
    }

    friend WeightRule weight_build(WeightKind kind, WeightParams params, FamilyPtr family);

private:
    WeightKind kind_ = WeightKind::CanonicalSingleton;
    WeightParams params_;
    FamilyPtr family_;
    double zero_weight_ = 1.0;
    std::vector<double> height_weight_;
    std::vector<double> normal_;
    double upper_ = 0;
    double lower_ = 0;
};

inline WeightRule weight_build(WeightKind kind, WeightParams params, FamilyPtr family) {
    if (!family) throw Error(ErrorKind::BadParams, "weight needs a subspace family");
    WeightRule w;
    w.kind_ = kind;
    w.params_ = std::move(params);
    w.family_ = std::move(family);
    const auto& fam = *w.family_;
    const auto& band = fam.band();

    switch (kind) {
        case WeightKind::CanonicalSingleton:
            if (fam.dim() != fam.ambient_dim() - 1)
                throw Error(ErrorKind::BadParams, "canonical-singleton weight requires d = n - 1");
            w.zero_weight_ = 1.0 / std::sqrt(static_cast<double>(fam.size()));
            break;
        case WeightKind::HeightDecay:
            if (!(w.params_.decay_base > 1.0)) throw Error(ErrorKind::BadParams, "height-decay base must exceed 1");
            for (const auto& a : fam.members())
                w.height_weight_.push_back(std::pow(w.params_.decay_base, -static_cast<double>(a.height())));
            break;
        case WeightKind::CustomTable:
            for (const auto& [key, value] : w.params_.table) {
                if (key.first >= band.size() || key.second >= fam.size())
                    throw Error(ErrorKind::BadParams, "custom weight entry outside the band or family");
                if (!(value > 0)) throw Error(ErrorKind::BadParams, "weights must be positive");
            }
            break;
    }

    w.normal_.assign(band.size(), 0.0);
    for (std::size_t k = 0; k < band.size(); ++k) {
        double acc = 0;
        if (k == band.zero_index()) {
            for (std::size_t m = 0; m < fam.size(); ++m)
                if (w.defined(k, m)) acc += std::pow(w.weight(k, m), 2);
        } else {
            for (auto m : fam.omega(k))
                if (w.defined(k, m)) acc += std::pow(w.weight(k, m), 2);
        }
        w.normal_[k] = acc;
    }
    w.upper_ = 0;
    w.lower_ = std::numeric_limits<double>::infinity();
    for (double v : w.normal_) {
        w.upper_ = std::max(w.upper_, std::sqrt(v));
        w.lower_ = std::min(w.lower_, std::sqrt(v));
    }
    if (!(w.lower_ > 0)) throw Error(ErrorKind::DegenerateWeight, "W_k vanishes somewhere on the band; c_w = 0");
    return w;
}

/// Builds the weight on covering_family(d, n, K, H).
inline WeightRule weight_build(WeightKind kind, WeightParams params, int d, int n, std::int64_t height, int radius) {
    return weight_build(kind, std::move(params), covering_family(d, n, radius, height));
}

}  // namespace torotomo
