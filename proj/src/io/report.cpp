#include "gridcert/report.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "gridcert/error.hpp"

namespace gridcert {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

const char* yn(bool b) { return b ? "1" : "0"; }
const char* verdict(bool b) { return b ? "PASS" : "FAIL"; }

std::string fmt_c(Complex z) {
    std::ostringstream os;
    os << fmt(z.real()) << (z.imag() < 0 ? " - j" : " + j") << fmt(std::abs(z.imag()));
    return os.str();
}

std::string kind_name(const Device& d) { return std::string(to_string(kind_of(d))); }

}  // namespace

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

void write_report_txt(std::ostream& os, const NetworkFile& file, const Plant& plant, const CertificationReport& rep,
                      const CertificationConfig& cfg) {
    os << "gridcert certification report\n";
    if (!file.name.empty()) os << "network: " << file.name << "\n";
    os << "nominal frequency: " << fmt(plant.omega0 / kTwoPi) << " Hz\n";
    os << "kept nodes: " << plant.network.size() << ", lambda2(L') = " << fmt(rep.lambda2) << "\n";
    os << "R/X range: rho_min = " << fmt(plant.rho.min) << ", rho_max = " << fmt(plant.rho.max) << "\n";
    os << "grid: " << fmt(cfg.omega_lo) << " .. " << fmt(cfg.omega_hi) << " rad/s, " << cfg.grid_points << " points\n\n";
    for (std::size_t n = 0; n < rep.nodes.size(); ++n) {
        os << "  node " << rep.nodes[n] << " (" << kind_name(plant.devices[n]) << "), gamma = " << fmt(rep.gamma[n]) << "\n";
    }
    if (rep.error) {
        os << "\nERROR: " << *rep.error << "\n";
        os << "\nverdict: NOT CERTIFIED\n";
        return;
    }
    for (const auto& run : rep.runs) {
        os << "\n== rho = " << fmt(run.rho) << " ==\n";
        if (run.trivial) {
            os << "single node: no network coupling; bus poles " << verdict(run.condition2_poles[0].pass) << "\n";
            os << "result at rho = " << fmt(run.rho) << ": " << verdict(run.pass) << "\n";
            continue;
        }
        const auto& c1 = run.condition1;
        os << "Condition 1 (synchronous and coherent dynamics): " << verdict(c1.pass) << "\n";
        os << "  synchronous dynamics stable: " << (c1.synchronous_stable ? "yes" : "no") << "\n";
        for (auto p : c1.unstable_poles) os << "  unstable pole: " << fmt_c(p) << "\n";
        os << "  M1 = " << fmt(c1.M1) << ", M2 = " << fmt(c1.M2) << ", delta = " << fmt(c1.delta) << " rad/s after "
           << c1.halvings << " halvings\n";
        os << "  worst |s/mu| / bound = " << fmt(c1.worst_ratio) << " at s = " << fmt_c(c1.witness) << "\n";
        if (!c1.failure.empty()) os << "  failure: " << c1.failure << "\n";

        os << "Condition 2.1 (no transient poles outside S_delta):\n";
        for (std::size_t n = 0; n < run.condition2_poles.size(); ++n) {
            const auto& v = run.condition2_poles[n];
            os << "  " << rep.nodes[n] << ": " << verdict(v.pass);
            if (v.witness) os << " (pole " << fmt_c(*v.witness) << ")";
            os << "\n";
        }
        const auto& c2 = run.condition2;
        os << "Condition 2.2 (half-plane feasibility): " << verdict(c2.pass) << " over " << c2.samples.size()
           << " boundary samples";
        if (c2.failures > 0) os << ", " << c2.failures << " infeasible";
        os << "\n";
        if (c2.first_failure) {
            os << "  first infeasible sample: s = " << fmt_c(c2.first_failure->s);
            if (c2.first_failure->result.blocking >= 0) {
                os << ", blocking node " << rep.nodes[static_cast<std::size_t>(c2.first_failure->result.blocking)];
            }
            os << "\n";
        } else if (!c2.samples.empty()) {
            double narrow = 1e300;
            const InteropSample* at = nullptr;
            for (const auto& s : c2.samples) {
                if (s.result.width() < narrow) {
                    narrow = s.result.width();
                    at = &s;
                }
            }
            if (at) {
                os << "  narrowest phi-interval: (" << fmt(at->result.lo * 180.0 / std::numbers::pi) << ", "
                   << fmt(at->result.hi * 180.0 / std::numbers::pi) << ") deg at s = " << fmt_c(at->s) << "\n";
            }
        }
        const auto& c3 = run.condition3;
        os << "Condition 3 (interpretable interoperability): " << verdict(c3.pass) << ", omega1 = " << fmt(c3.omega1)
           << " rad/s (" << fmt(c3.omega1 / kTwoPi) << " Hz), omega2 = " << fmt(c3.omega2) << " rad/s ("
           << fmt(c3.omega2 / kTwoPi) << " Hz)\n";
        for (std::size_t n = 0; n < c3.buses.size(); ++n) {
            const auto& b = c3.buses[n];
            os << "  " << rep.nodes[n] << ": region1 " << verdict(b.region1.pass);
            if (!b.region1.pass) os << (b.region1.on_arc ? " (arc |s| = " : " (at ") << fmt(b.region1.fail_omega) << " rad/s)";
            os << ", region2 " << verdict(b.region2.pass);
            if (!b.region2.pass) os << " (at " << fmt(b.region2.fail_omega) << " rad/s)";
            os << ", region3 " << verdict(b.region3.pass);
            if (!b.region3.pass) os << " (at " << fmt(b.region3.fail_omega) << " rad/s)";
            os << "\n";
        }
        os << "Stability margins M(g, mu) > gamma:\n";
        for (const auto& m : run.margins) {
            os << "  " << m.bus << ": omega_c = " << fmt(m.omega_c) << " rad/s (" << fmt(m.omega_c / kTwoPi)
               << " Hz), M = " << fmt(m.margin) << ", gamma = " << fmt(m.gamma) << " -> " << verdict(m.pass);
            if (m.resonance.applicable) {
                os << "; resonance " << fmt(m.resonance.value) << " < 1/gamma " << verdict(m.resonance.pass);
            }
            if (!m.notes.empty()) os << " [" << m.notes << "]";
            os << "\n";
        }
        os << "result at rho = " << fmt(run.rho) << ": " << verdict(run.pass) << "\n";
    }
    os << "\nverdict: " << (rep.certified ? "CERTIFIED" : "NOT CERTIFIED") << "\n";
}

void write_report_csv(std::ostream& os, const Plant& plant, const CertificationReport& rep) {
    os << "bus,kind,gamma,rho,omega_c_rad_s,omega_c_hz,margin,margin_pass,resonance_applicable,resonance_pass,"
          "pole_pass,region1_pass,region1_fail_rad_s,region2_pass,region2_fail_rad_s,region3_pass,region3_fail_rad_s,"
          "rho_pass\n";
    for (const auto& run : rep.runs) {
        for (std::size_t n = 0; n < run.margins.size(); ++n) {
            const auto& m = run.margins[n];
            os << m.bus << ',' << kind_name(plant.devices[n]) << ',' << fmt(rep.gamma[n]) << ',' << fmt(run.rho) << ','
               << fmt(m.omega_c) << ',' << fmt(m.omega_c / kTwoPi) << ',' << fmt(m.margin) << ',' << yn(m.pass) << ','
               << yn(m.resonance.applicable) << ',' << yn(m.resonance.pass) << ','
               << yn(n < run.condition2_poles.size() ? run.condition2_poles[n].pass : true) << ',';
            if (n < run.condition3.buses.size()) {
                const auto& b = run.condition3.buses[n];
                auto reg = [&](const RegionVerdict& v) {
                    os << yn(v.pass) << ',' << (v.pass ? std::string() : fmt(v.fail_omega)) << ',';
                };
                reg(b.region1);
                reg(b.region2);
                reg(b.region3);
            } else {
                os << "1,,1,,1,,";
            }
            os << yn(run.pass) << '\n';
        }
    }
}

void write_sweep_csv(std::ostream& os, const Plant& plant, int bus, double rho, const CertificationConfig& cfg) {
    const RationalTF mu = line_mu({rho, plant.omega0});
    const RationalTF g = bus_transfer(plant.devices[static_cast<std::size_t>(bus)]);
    const double gamma = plant.network.gamma(bus);
    const RationalTF gn = scale(g, gamma);
    const auto w = cfg.grid();
    const RationalTF loop = mul(mu, g);
    const ContinuousPhase ph(loop, cfg.omega_lo);
    const Margin m = stability_margin(g, mu, cfg);
    const double deg = 180.0 / std::numbers::pi;

    os << "row,omega_rad_s,freq_hz,gain_mu_g_over_w,gain_mu_gnorm_over_w,phase_deg,region1_ok,region2_ok,region3_ok,"
          "omega_c_rad_s,margin,gamma\n";
    for (double x : w) {
        const Complex v = loop.at_jw(x);
        const double G = std::abs(v) / x;
        const double Gn = G * gamma;
        const double p = ph(x) * deg;
        const bool r1 = v.real() > cfg.guard * std::abs(v);
        const bool r3 = Gn < 1.0 - cfg.guard;
        bool r2 = false;
        for (int a = 90; a >= 1 && !r2; --a) r2 = kernels::region2_bus_ok(Gn, p, a, cfg.guard);
        os << "data," << fmt(x) << ',' << fmt(x / kTwoPi) << ',' << fmt(G) << ',' << fmt(Gn) << ',' << fmt(p) << ','
           << yn(r1) << ',' << yn(r2) << ',' << yn(r3) << ",,,\n";
    }
    os << "summary,,,,,,,,," << fmt(m.omega_c) << ',' << fmt(m.M) << ',' << fmt(gamma) << '\n';
}

void write_sim_csv(std::ostream& os, const Plant& plant, const ClosedLoop& cl, const SimResult& r, int stride) {
    if (stride < 1) stride = 1;
    os << "t_s";
    for (const auto& n : plant.network.nodes) os << ",omega_" << n << "_rad_s";
    for (const auto& e : cl.layout.edges) {
        os << ",power_" << plant.network.nodes[static_cast<std::size_t>(e.a)] << '_'
           << plant.network.nodes[static_cast<std::size_t>(e.b)] << "_pu";
    }
    os << '\n';
    const Eigen::Index K = r.omega.rows();
    for (Eigen::Index k = 0; k < K; ++k) {
        if (k % stride != 0 && k + 1 != K) continue;
        os << fmt(r.t[static_cast<std::size_t>(k)]);
        for (Eigen::Index n = 0; n < r.omega.cols(); ++n) os << ',' << fmt(r.omega(k, n));
        for (Eigen::Index e = 0; e < r.power.cols(); ++e) os << ',' << fmt(r.power(k, e));
        os << '\n';
    }
}

void write_design_csv(std::ostream& os, const Plant& plant, const CertificationConfig& cfg) {
    os << "bus,kind,rho,gamma,omega_c_numeric_rad_s,omega_c_closed_rad_s,Tp_s,Tp_min_s,Tp_gate_s,bound_applies,"
          "meets_bound,Xi,omega_c_no_dw_rad_s,M_no_dw,M_dw,xi_lo_s,xi_hi_s,xi_s,xi_in_interval,governor_ratio,"
          "line_ratio\n";
    std::vector<double> rhos{plant.rho.min};
    if (plant.rho.max != plant.rho.min) rhos.push_back(plant.rho.max);
    for (double rho : rhos) {
        if (!(rho > 0.0)) continue;
        const RationalTF mu = line_mu({rho, plant.omega0});
        for (int n = 0; n < plant.network.size(); ++n) {
            const auto& dev = plant.devices[static_cast<std::size_t>(n)];
            const double gamma = plant.network.gamma(n);
            const double wc = crossover_frequency(bus_transfer(dev), mu, cfg);
            os << plant.network.nodes[static_cast<std::size_t>(n)] << ',' << kind_name(dev) << ',' << fmt(rho) << ','
               << fmt(gamma) << ',' << fmt(wc) << ',';
            if (const auto* c = std::get_if<ConverterParams>(&dev); c && rho < 1.0) {
                const DroopDesign d = droop_design(*c, rho, gamma);
                os << fmt(d.omega_c_closed) << ',' << fmt(c->T_p) << ',' << fmt(d.Tp_min) << ',' << fmt(d.Tp_gate) << ','
                   << yn(d.bound_applies) << ',' << yn(d.meets_bound) << ',' << fmt(d.Xi) << ",,,,,,,,,\n";
            } else if (const auto* m = std::get_if<MachineParams>(&dev); m && !m->is_condenser && rho < 1.0) {
                MachineParams m0 = *m;
                m0.xi_sm = 0.0;
                const double wc0 = crossover_frequency(bus_transfer(m0), mu, cfg);
                os << ",,,,,,,";
                SgMarginEstimate e;
                bool have_dw = m->xi_sm > 0.0;
                if (have_dw) {
                    e = sg_margin_estimates(*m, rho, wc0);
                } else {
                    MachineParams tmp = *m;
                    tmp.xi_sm = 1.0;
                    e = sg_margin_estimates(tmp, rho, wc0);
                }
                os << fmt(wc0) << ',' << fmt(e.M_no_dw) << ',' << (have_dw ? fmt(e.M_dw) : std::string()) << ','
                   << fmt(e.xi_lo) << ',' << fmt(e.xi_hi) << ',' << fmt(m->xi_sm) << ',' << yn(e.in_interval(m->xi_sm))
                   << ',' << fmt(e.governor_ratio) << ',' << fmt(e.line_ratio) << '\n';
            } else {
                os << ",,,,,,,,,,,,,,,\n";
            }
        }
    }
}

}  // namespace gridcert
