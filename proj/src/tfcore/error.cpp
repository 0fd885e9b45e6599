#include "gridcert/error.hpp"

namespace gridcert {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::PoleHit: return "PoleHit";
        case ErrorKind::ZeroInverse: return "ZeroInverse";
        case ErrorKind::NoConverge: return "NoConverge";
        case ErrorKind::Improper: return "Improper";
        case ErrorKind::DegenerateGeometry: return "DegenerateGeometry";
        case ErrorKind::NonPositiveRho: return "NonPositiveRho";
        case ErrorKind::Disconnected: return "Disconnected";
        case ErrorKind::SingularInterior: return "SingularInterior";
        case ErrorKind::ZeroGamma: return "ZeroGamma";
        case ErrorKind::DegenerateXi: return "DegenerateXi";
        case ErrorKind::StepTooLarge: return "StepTooLarge";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::InvalidConfig: return "InvalidConfig";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::ValidationError: return "ValidationError";
    }
    return "Unknown";
}

}  // namespace gridcert
