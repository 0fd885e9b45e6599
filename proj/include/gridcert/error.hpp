#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gridcert {

enum class ErrorKind {
    PoleHit,
    ZeroInverse,
    NoConverge,
    Improper,
    DegenerateGeometry,
    NonPositiveRho,
    Disconnected,
    SingularInterior,
    ZeroGamma,
    DegenerateXi,
    StepTooLarge,
    InvalidArgument,
    InvalidConfig,
    ParseError,
    ValidationError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace gridcert
