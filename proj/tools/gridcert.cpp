#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>

#include "gridcert/certify.hpp"
#include "gridcert/error.hpp"
#include "gridcert/io.hpp"
#include "gridcert/report.hpp"
#include "gridcert/sim.hpp"

namespace fs = std::filesystem;
using namespace gridcert;

namespace {

constexpr int kCertified = 0;
constexpr int kNotCertified = 1;
constexpr int kError = 2;

struct Options {
    std::string input;
    std::string out = ".";
    std::optional<double> delta_hz, grid_lo_hz, grid_hi_hz, omega1_hz, omega2_hz, rho_floor;
    std::optional<int> grid_n;
    std::string rho_policy = "extremes";
    bool serial = false;

    std::string step_bus;
    double step_pu = 0.5;
    double t_end = 10.0;
    double dt = 0.0;
    int every = 0;
    std::optional<double> rho;
};

void add_common(CLI::App* sub, Options& o) {
    sub->add_option("file", o.input, "network description")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--delta", o.delta_hz, "coherence radius delta [Hz]");
    sub->add_option("--grid-lo", o.grid_lo_hz, "lowest grid frequency [Hz]");
    sub->add_option("--grid-hi", o.grid_hi_hz, "highest grid frequency [Hz]");
    sub->add_option("--grid-n", o.grid_n, "grid points");
    sub->add_option("--omega1", o.omega1_hz, "Region 1/2 boundary [Hz]");
    sub->add_option("--omega2", o.omega2_hz, "Region 2/3 boundary [Hz]");
    sub->add_option("--rho-policy", o.rho_policy, "heterogeneous R/X policy")->check(CLI::IsMember({"extremes"}));
    sub->add_option("--rho-floor", o.rho_floor, "lift line R/X ratios below this value");
    sub->add_flag("--serial", o.serial, "run sweeps on one thread");
}

struct Loaded {
    NetworkFile file;
    Plant plant;
    CertificationConfig cfg;
};

Loaded load(const Options& o) {
    Loaded l;
    l.file = load_network(o.input, o.rho_floor);
    l.plant = build_plant(l.file.spec);
    apply_overrides(l.file.certify, l.cfg);
    CertifyOverrides cli;
    cli.delta_hz = o.delta_hz;
    cli.grid_lo_hz = o.grid_lo_hz;
    cli.grid_hi_hz = o.grid_hi_hz;
    cli.grid_n = o.grid_n;
    cli.omega1_hz = o.omega1_hz;
    cli.omega2_hz = o.omega2_hz;
    apply_overrides(cli, l.cfg);
    l.cfg.exec = o.serial ? kernels::Exec::serial : kernels::Exec::parallel;
    return l;
}

std::ofstream open_out(const Options& o, const std::string& name) {
    fs::create_directories(o.out);
    const fs::path p = fs::path(o.out) / name;
    std::ofstream f(p);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + p.string());
    return f;
}

std::string rho_tag(double rho) {
    std::string s = fmt(rho);
    for (char& c : s) {
        if (c == '.') c = 'p';
    }
    return s;
}

int run_certify(const Options& o) {
    auto l = load(o);
    const auto rep = certify(l.plant, l.cfg);
    {
        auto f = open_out(o, "report.txt");
        write_report_txt(f, l.file, l.plant, rep, l.cfg);
    }
    {
        auto f = open_out(o, "report.csv");
        write_report_csv(f, l.plant, rep);
    }
    if (rep.error) {
        std::cerr << "error: " << *rep.error << "\n";
        return kError;
    }
    std::cout << (rep.certified ? "CERTIFIED" : "NOT CERTIFIED") << "\n";
    for (const auto& run : rep.runs) {
        for (const auto& m : run.margins) {
            if (!m.pass || !m.resonance.pass) {
                std::cout << "  rho " << fmt(run.rho) << ": margin failure at " << m.bus << " (M = " << fmt(m.margin)
                          << ", gamma = " << fmt(m.gamma) << ")\n";
            }
        }
    }
    return rep.certified ? kCertified : kNotCertified;
}

int run_margin(const Options& o) {
    auto l = load(o);
    bool all = true;
    std::cout << "bus,kind,rho,gamma,omega_c_rad_s,margin,pass\n";
    std::vector<double> rhos{l.plant.rho.min};
    if (l.plant.rho.max != l.plant.rho.min) rhos.push_back(l.plant.rho.max);
    for (double rho : rhos) {
        const RationalTF mu = line_mu({rho, l.plant.omega0});
        for (int n = 0; n < l.plant.network.size(); ++n) {
            const auto& dev = l.plant.devices[static_cast<std::size_t>(n)];
            const double gamma = l.plant.network.gamma(n);
            const Margin m = stability_margin(bus_transfer(dev), mu, l.cfg);
            const bool pass = m.M > gamma * (1.0 + l.cfg.guard);
            all = all && pass;
            std::cout << l.plant.network.nodes[static_cast<std::size_t>(n)] << ',' << to_string(kind_of(dev)) << ','
                      << fmt(rho) << ',' << fmt(gamma) << ',' << fmt(m.omega_c) << ',' << fmt(m.M) << ','
                      << (pass ? 1 : 0) << '\n';
        }
    }
    return all ? kCertified : kNotCertified;
}

int run_sweep(const Options& o) {
    auto l = load(o);
    std::vector<double> rhos{l.plant.rho.min};
    if (l.plant.rho.max != l.plant.rho.min) rhos.push_back(l.plant.rho.max);
    for (double rho : rhos) {
        for (int n = 0; n < l.plant.network.size(); ++n) {
            const std::string name =
                "sweep_" + l.plant.network.nodes[static_cast<std::size_t>(n)] + "_rho" + rho_tag(rho) + ".csv";
            auto f = open_out(o, name);
            write_sweep_csv(f, l.plant, n, rho, l.cfg);
            std::cout << (fs::path(o.out) / name).string() << "\n";
        }
    }
    return kCertified;
}

int run_simulate(const Options& o) {
    auto l = load(o);
    const auto& nodes = l.plant.network.nodes;
    int bus = 0;
    if (!o.step_bus.empty()) {
        auto it = std::find(nodes.begin(), nodes.end(), o.step_bus);
        if (it == nodes.end()) throw Error(ErrorKind::InvalidArgument, "unknown or passive step bus '" + o.step_bus + "'");
        bus = static_cast<int>(it - nodes.begin());
    }
    const double rho = o.rho.value_or(l.plant.rho.max);
    const ClosedLoop cl = assemble(l.plant.network, l.plant.devices, rho, l.plant.omega0);
    const SimResult r = step_response(cl, bus, o.step_pu, o.t_end, o.dt);
    const std::string stem = fs::path(o.input).stem().string();
    {
        auto f = open_out(o, "sim_" + stem + ".csv");
        const int stride = o.every > 0 ? o.every : static_cast<int>((r.t.size() + 4999) / 5000);
        write_sim_csv(f, l.plant, cl, r, stride);
    }
    const auto eig = eigenvalues(cl);
    std::cout << "states: " << cl.A.rows() << "\n";
    std::cout << "max non-drift Re(lambda): " << fmt(max_nondrift_real(eig)) << "\n";
    std::cout << "dominant observable eigenvalue: " << fmt(r.dominant.real()) << " + j" << fmt(r.dominant.imag()) << "\n";
    if (cl.buses >= 2) {
        const auto m = oscillation_metric(r);
        std::cout << "spread: " << fmt(m.spread) << " rad/s, growth rate: " << fmt(m.growth_rate)
                  << " 1/s, frequency: " << fmt(m.dominant_freq_hz) << " Hz\n";
    }
    return kCertified;
}

int run_design(const Options& o) {
    auto l = load(o);
    auto f = open_out(o, "design.csv");
    write_design_csv(f, l.plant, l.cfg);
    std::cout << (fs::path(o.out) / "design.csv").string() << "\n";
    return kCertified;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decentralized small-signal stability certificates for grids of machines and converters"};
    app.require_subcommand(1);
    Options o;
    auto* c = app.add_subcommand("certify", "check Conditions 1-3 and margins at rho_min and rho_max");
    auto* m = app.add_subcommand("margin", "per-bus crossover frequency and relative stability margin");
    auto* s = app.add_subcommand("sweep", "write Bode data of mu g / omega per bus and rho");
    auto* sim = app.add_subcommand("simulate", "load-step response of the closed-loop state-space model");
    auto* d = app.add_subcommand("design", "droop and damper-winding design formulas");
    for (auto* sub : {c, m, s, sim, d}) add_common(sub, o);
    sim->add_option("--step-bus", o.step_bus, "bus receiving the load step (default: first dynamic bus)");
    sim->add_option("--step-pu", o.step_pu, "step size [p.u.]");
    sim->add_option("--t-end", o.t_end, "horizon [s]");
    sim->add_option("--dt", o.dt, "RK4 step [s], 0 = automatic");
    sim->add_option("--every", o.every, "write every n-th sample (default: at most 5000 rows)");
    sim->add_option("--rho", o.rho, "uniform R/X used for the lines (default rho_max)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kError;
    }
    try {
        if (*c) return run_certify(o);
        if (*m) return run_margin(o);
        if (*s) return run_sweep(o);
        if (*sim) return run_simulate(o);
        if (*d) return run_design(o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kError;
    }
    return kError;
}
