#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace torotomo {

enum class ErrorKind {
    ZeroVector,
    RankMismatch,
    DimensionMismatch,
    BandTooLarge,
    WeightUndefined,
    DegenerateWeight,
    QuadratureTooCoarse,
    AxisDegenerate,
    SingularFilter,
    NonzeroMean,
    IncompleteCover,
    ParamViolation,
    BadParams,
    GeometryViolation,
    MissingAngle,
    ConfigInvalid,
    Io,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::ZeroVector: return "ZeroVector";
        case ErrorKind::RankMismatch: return "RankMismatch";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::BandTooLarge: return "BandTooLarge";
        case ErrorKind::WeightUndefined: return "WeightUndefined";
        case ErrorKind::DegenerateWeight: return "DegenerateWeight";
        case ErrorKind::QuadratureTooCoarse: return "QuadratureTooCoarse";
        case ErrorKind::AxisDegenerate: return "AxisDegenerate";
        case ErrorKind::SingularFilter: return "SingularFilter";
        case ErrorKind::NonzeroMean: return "NonzeroMean";
        case ErrorKind::IncompleteCover: return "IncompleteCover";
        case ErrorKind::ParamViolation: return "ParamViolation";
        case ErrorKind::BadParams: return "BadParams";
        case ErrorKind::GeometryViolation: return "GeometryViolation";
        case ErrorKind::MissingAngle: return "MissingAngle";
        case ErrorKind::ConfigInvalid: return "ConfigInvalid";
        case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so
/// callers (and tests) can branch on the cause rather than on message text.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace torotomo
