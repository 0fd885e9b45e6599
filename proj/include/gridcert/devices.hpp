#pragma once

#include <string_view>
#include <variant>

#include "gridcert/rational_tf.hpp"

namespace gridcert {

/// d-axis damper circuit in per-unit, plus the electrical base used to turn
/// the per-unit damper coefficient into seconds.
struct DamperCircuitParams {
    double L_Dd = 0.0;
    double R_Dd = 0.0;
    double L_ad_sub = 0.0;  // L''_ad
    double L_aq_sub = 0.0;  // L''_aq
    double omega_base = 0.0;
};

struct XiSM {
    double per_unit = 0.0;  // value of the circuit formula in per-unit time
    double seconds = 0.0;   // per_unit / omega_base
};

/// Damper-winding coefficient of a salient-pole machine.
/// Throws DegenerateGeometry when L_Dd <= L''_ad or L''_aq == L''_ad.
[[nodiscard]] XiSM damper_coefficient(const DamperCircuitParams& p);
[[nodiscard]] inline double xi_sm(const DamperCircuitParams& p) { return damper_coefficient(p).seconds; }

struct MachineParams {
    double H = 0.0;      // s
    double T_G = 0.0;    // s, turbine time constant (unused for condensers)
    double k_g = 0.0;    // p.u. governor gain (unused for condensers)
    double xi_sm = 0.0;  // s
    double omega0 = 0.0; // rad/s
    bool is_condenser = false;

    void validate() const;
};

struct ConverterParams {
    double m_p = 0.0;    // p.u.
    double T_p = 0.0;    // s
    double xi_c = 0.0;   // s; 0 for plain droop
    double omega0 = 0.0; // rad/s

    void validate() const;
};

struct LineDynamicsParams {
    double rho = 0.0;
    double omega0 = 0.0;
};

using Device = std::variant<MachineParams, ConverterParams>;

enum class DeviceKind { generator, condenser, droop, pd_droop };

[[nodiscard]] DeviceKind kind_of(const Device& d);
[[nodiscard]] std::string_view to_string(DeviceKind k);
[[nodiscard]] bool is_machine(const Device& d);
/// Coefficient of the P_dist = P_load / (1 + xi s) input filter; 0 for converters.
[[nodiscard]] double disturbance_filter_xi(const Device& d);

/// Frequency response from -(P_dist + P_net) to bus frequency:
///   generator  w0 (1 + xi s)(1 + T_G s) / (2 H T_G s^2 + 2 H s + k_g)
///   condenser  w0 (1 + xi s) / (2 H s)
///   droop      m_p w0 / (T_p s + 1)
///   PD droop   m_p w0 (1 + xi_C s) / (T_p s + 1)
[[nodiscard]] RationalTF bus_transfer(const MachineParams& m);
[[nodiscard]] RationalTF bus_transfer(const ConverterParams& c);
[[nodiscard]] RationalTF bus_transfer(const Device& d);

/// Series-RL line dynamics with uniform R/X ratio:
///   mu(s) = w0^2 / (s^2 + 2 w0 rho s + w0^2 (1 + rho^2)).
/// Throws NonPositiveRho for rho <= 0.
[[nodiscard]] RationalTF line_mu(const LineDynamicsParams& p);

/// Peak-magnitude frequency w0 sqrt(1 - rho^2) (requires rho < 1).
[[nodiscard]] double resonant_frequency(double rho, double omega0);
/// Natural frequency w0 sqrt(1 + rho^2).
[[nodiscard]] double natural_frequency(double rho, double omega0);

}  // namespace gridcert
