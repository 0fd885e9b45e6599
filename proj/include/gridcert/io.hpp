#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "gridcert/certify.hpp"
#include "gridcert/network.hpp"

namespace gridcert {

/// Optional [certify] section; frequencies in Hz as written in the file.
struct CertifyOverrides {
    std::optional<double> delta_hz;
    std::optional<double> omega1_hz;
    std::optional<double> omega2_hz;
    std::optional<double> grid_lo_hz;
    std::optional<double> grid_hi_hz;
    std::optional<int> grid_n;
    std::optional<double> rho_floor;
};

struct NetworkFile {
    int format_version = 1;
    std::string name;
    NetworkSpec spec;
    CertifyOverrides certify;
};

/// Parses and validates a network description. Throws ParseError (with line
/// and column) for malformed text and ValidationError for a well-formed file
/// that breaks a model invariant. `rho_floor_override` replaces the file's
/// rho_floor when set.
[[nodiscard]] NetworkFile parse_network(const std::string& text, std::optional<double> rho_floor_override = {});
[[nodiscard]] NetworkFile load_network(const std::filesystem::path& path, std::optional<double> rho_floor_override = {});

/// Applies file overrides (Hz) onto a configuration (rad/s).
void apply_overrides(const CertifyOverrides& o, CertificationConfig& cfg);

}  // namespace gridcert
