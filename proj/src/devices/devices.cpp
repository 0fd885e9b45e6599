#include "gridcert/devices.hpp"

#include <cmath>

#include "gridcert/error.hpp"

namespace gridcert {

XiSM damper_coefficient(const DamperCircuitParams& p) {
    if (!(p.L_Dd > 0.0 && p.R_Dd > 0.0 && p.L_ad_sub >= 0.0 && p.L_aq_sub > 0.0 && p.omega_base > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "damper circuit parameters must be positive");
    }
    if (p.L_Dd <= p.L_ad_sub) {
        throw Error(ErrorKind::DegenerateGeometry, "L_Dd must exceed L''_ad");
    }
    if (p.L_aq_sub == p.L_ad_sub) {
        throw Error(ErrorKind::DegenerateGeometry, "L''_aq equals L''_ad (round rotor); supply xi_sm directly");
    }
    const double num = p.L_Dd * p.L_ad_sub * p.L_ad_sub;
    const double den = p.R_Dd * (p.L_Dd - p.L_ad_sub) * (p.L_aq_sub - p.L_ad_sub);
    XiSM out;
    out.per_unit = num / den;
    out.seconds = out.per_unit / p.omega_base;
    return out;
}

void MachineParams::validate() const {
    if (!(H > 0.0)) throw Error(ErrorKind::ValidationError, "machine inertia H must be > 0");
    if (!(omega0 > 0.0)) throw Error(ErrorKind::ValidationError, "omega0 must be > 0");
    if (!(xi_sm >= 0.0)) throw Error(ErrorKind::ValidationError, "xi_sm must be >= 0");
    if (!is_condenser) {
        if (!(T_G > 0.0)) throw Error(ErrorKind::ValidationError, "generator T_G must be > 0");
        if (!(k_g > 0.0)) throw Error(ErrorKind::ValidationError, "generator k_g must be > 0");
    }
}

void ConverterParams::validate() const {
    if (!(m_p > 0.0)) throw Error(ErrorKind::ValidationError, "droop coefficient m_p must be > 0");
    if (!(T_p >= 0.0)) throw Error(ErrorKind::ValidationError, "T_p must be >= 0");
    if (!(xi_c >= 0.0)) throw Error(ErrorKind::ValidationError, "xi_c must be >= 0");
    if (!(omega0 > 0.0)) throw Error(ErrorKind::ValidationError, "omega0 must be > 0");
}

DeviceKind kind_of(const Device& d) {
    if (const auto* m = std::get_if<MachineParams>(&d)) {
        return m->is_condenser ? DeviceKind::condenser : DeviceKind::generator;
    }
    return std::get<ConverterParams>(d).xi_c > 0.0 ? DeviceKind::pd_droop : DeviceKind::droop;
}

std::string_view to_string(DeviceKind k) {
    switch (k) {
        case DeviceKind::generator: return "sg";
        case DeviceKind::condenser: return "sc";
        case DeviceKind::droop: return "droop";
        case DeviceKind::pd_droop: return "pd";
    }
    return "?";
}

bool is_machine(const Device& d) { return std::holds_alternative<MachineParams>(d); }

double disturbance_filter_xi(const Device& d) {
    if (const auto* m = std::get_if<MachineParams>(&d)) return m->xi_sm;
    return 0.0;
}

RationalTF bus_transfer(const MachineParams& m) {
    const Polynomial damper{1.0, m.xi_sm};
    if (m.is_condenser) {
        return {damper.scaled(m.omega0), Polynomial{0.0, 2.0 * m.H}};
    }
    const Polynomial turbine{1.0, m.T_G};
    return {(damper * turbine).scaled(m.omega0), Polynomial{m.k_g, 2.0 * m.H, 2.0 * m.H * m.T_G}};
}

RationalTF bus_transfer(const ConverterParams& c) {
    return {Polynomial{1.0, c.xi_c}.scaled(c.m_p * c.omega0), Polynomial{1.0, c.T_p}};
}

RationalTF bus_transfer(const Device& d) {
    return std::visit([](const auto& p) { return bus_transfer(p); }, d);
}

RationalTF line_mu(const LineDynamicsParams& p) {
    if (!(p.rho > 0.0)) {
        throw Error(ErrorKind::NonPositiveRho, "line R/X ratio must be > 0 for the certificate to apply");
    }
    const double w2 = p.omega0 * p.omega0;
    return {Polynomial::constant(w2), Polynomial{w2 * (1.0 + p.rho * p.rho), 2.0 * p.omega0 * p.rho, 1.0}};
}

double resonant_frequency(double rho, double omega0) {
    if (!(rho < 1.0)) throw Error(ErrorKind::InvalidArgument, "no real resonant frequency for rho >= 1");
    return omega0 * std::sqrt(1.0 - rho * rho);
}

double natural_frequency(double rho, double omega0) { return omega0 * std::sqrt(1.0 + rho * rho); }

}  // namespace gridcert
