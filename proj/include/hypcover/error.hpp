#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hypcover {

enum class ErrorKind {
    NonPositiveDeterminant,
    AmbiguousTrace,
    NotHyperbolic,
    CoincidentPoints,
    DegenerateClip,
    DegeneratePolygon,
    NonConvergent,
    Unbounded,
    ReductionBudgetExceeded,
    ZonesOverlap,
    NoCusps,
    NotACusp,
    VertexHit,
    BoundaryGeodesic,
    TraceNotClosed,
    OnCellBoundary,
    BaseMismatch,
    NotFundamental,
    NegativeDiscriminant,
    InvalidDiscriminant,
    NoCoprimeValue,
    NonCoprimeResidue,
    BudgetExceeded,
    EmptyPartition,
    ZeroVolumeCovering,
    EmptyPacket,
    Disconnected,
    InvalidInput,
};

constexpr std::string_view to_string(ErrorKind k) {
    switch (k) {
    case ErrorKind::NonPositiveDeterminant: return "NonPositiveDeterminant";
    case ErrorKind::AmbiguousTrace: return "AmbiguousTrace";
    case ErrorKind::NotHyperbolic: return "NotHyperbolic";
    case ErrorKind::CoincidentPoints: return "CoincidentPoints";
    case ErrorKind::DegenerateClip: return "DegenerateClip";
    case ErrorKind::DegeneratePolygon: return "DegeneratePolygon";
    case ErrorKind::NonConvergent: return "NonConvergent";
    case ErrorKind::Unbounded: return "Unbounded";
    case ErrorKind::ReductionBudgetExceeded: return "ReductionBudgetExceeded";
    case ErrorKind::ZonesOverlap: return "ZonesOverlap";
    case ErrorKind::NoCusps: return "NoCusps";
    case ErrorKind::NotACusp: return "NotACusp";
    case ErrorKind::VertexHit: return "VertexHit";
    case ErrorKind::BoundaryGeodesic: return "BoundaryGeodesic";
    case ErrorKind::TraceNotClosed: return "TraceNotClosed";
    case ErrorKind::OnCellBoundary: return "OnCellBoundary";
    case ErrorKind::BaseMismatch: return "BaseMismatch";
    case ErrorKind::NotFundamental: return "NotFundamental";
    case ErrorKind::NegativeDiscriminant: return "NegativeDiscriminant";
    case ErrorKind::InvalidDiscriminant: return "InvalidDiscriminant";
    case ErrorKind::NoCoprimeValue: return "NoCoprimeValue";
    case ErrorKind::NonCoprimeResidue: return "NonCoprimeResidue";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::EmptyPartition: return "EmptyPartition";
    case ErrorKind::ZeroVolumeCovering: return "ZeroVolumeCovering";
    case ErrorKind::EmptyPacket: return "EmptyPacket";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::InvalidInput: return "InvalidInput";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace hypcover
