#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gridcert/devices.hpp"
#include "gridcert/halfplane.hpp"
#include "gridcert/kernels.hpp"
#include "gridcert/network.hpp"
#include "gridcert/rational_tf.hpp"

namespace gridcert {

struct CertificationConfig {
    double delta = 1e-2;        // rad/s
    double omega_lo = 1e-3;     // rad/s
    double omega_hi = 1e5;      // rad/s
    int grid_points = 4000;
    int arc_samples = 64;
    int segment_samples = 64;
    std::optional<double> omega1;  // rad/s; auto from crossovers when empty
    std::optional<double> omega2;
    double guard = 1e-6;        // relative band for strict inequalities
    double refine_band = 0.05;  // refine samples whose slack is below this fraction
    int max_delta_halvings = 20;
    double pole_tol = 1e-9;
    kernels::Exec exec = kernels::Exec::parallel;

    /// Throws InvalidConfig. `omega_n` is the natural frequency of mu.
    void validate(double omega_n) const;
    [[nodiscard]] std::vector<double> grid() const;
};

/// Samples of the S_delta boundary inside the closed right half-plane: the
/// quarter arc delta e^{j theta}, theta in [0, pi/2], then the segment [0, j delta].
[[nodiscard]] std::vector<Complex> sdelta_arc(double delta, int samples);
[[nodiscard]] std::vector<Complex> sdelta_segment(double delta, int samples);

/// Harmonic mean [ (1/N) sum 1/g_n ]^{-1} over a common denominator.
[[nodiscard]] RationalTF synchronous_dynamics(std::span<const RationalTF> g_norm);

struct Condition1Result {
    bool synchronous_stable = false;
    std::vector<Complex> unstable_poles;
    double M1 = 0.0;
    double M2 = 0.0;
    double delta = 0.0;      // radius actually used
    int halvings = 0;
    bool coherence_ok = false;
    double worst_ratio = 0.0;  // max over samples of |s/mu| / bound
    Complex witness{};         // sample attaining worst_ratio
    bool pass = false;
    std::string failure;       // UnstableSynchronousDynamics, UnboundedInverse, NoFeasibleDelta
};

[[nodiscard]] Condition1Result check_condition1(const RationalTF& gbar, std::span<const RationalTF> g_norm,
                                                const RationalTF& mu, double lambda2, const CertificationConfig& cfg);

struct PoleVerdict {
    bool pass = true;
    std::optional<Complex> witness;
};

[[nodiscard]] std::vector<PoleVerdict> check_condition2_poles(std::span<const RationalTF> g_norm, double delta,
                                                              const CertificationConfig& cfg);

struct InteropSample {
    Complex s{};
    HalfplaneResult result;
};

struct Condition2Result {
    bool pass = false;
    std::vector<InteropSample> samples;
    std::optional<InteropSample> first_failure;
    int failures = 0;
};

[[nodiscard]] Condition2Result check_condition2_interop(std::span<const RationalTF> g_norm, const RationalTF& mu,
                                                        double delta, const CertificationConfig& cfg);

struct RegionVerdict {
    bool pass = true;
    double fail_omega = 0.0;  // rad/s; for arc failures the |s| = delta sample
    bool on_arc = false;
};

struct BusRegions {
    RegionVerdict region1;
    RegionVerdict region2;
    RegionVerdict region3;
};

struct Condition3Result {
    double omega1 = 0.0;
    double omega2 = 0.0;
    std::vector<BusRegions> buses;
    std::vector<double> region2_omega;
    std::vector<int> region2_alpha_deg;
    bool pass = false;
};

/// Regions 1-3. Crossovers of g_norm are used for the automatic omega1/omega2.
[[nodiscard]] Condition3Result check_condition3(std::span<const RationalTF> g_norm, const RationalTF& mu, double delta,
                                                const CertificationConfig& cfg);

/// First downward crossing of the continuous phase of mu g through -90 deg.
/// Returns 0 when the phase is already at or below -90 deg at the grid start,
/// +inf when there is no crossing below the grid top.
[[nodiscard]] double crossover_frequency(const RationalTF& g, const RationalTF& mu, const CertificationConfig& cfg = {});

struct Margin {
    double omega_c = 0.0;
    double M = 0.0;
};
[[nodiscard]] Margin stability_margin(const RationalTF& g, const RationalTF& mu, const CertificationConfig& cfg = {});

struct ResonanceVerdict {
    bool applicable = false;  // rho < 1 and omega_c < omega_r
    bool pass = true;
    double omega_r = 0.0;
    double value = 0.0;       // |mu g|(j omega_r) / omega_r
    std::string note;
};
[[nodiscard]] ResonanceVerdict resonance_check(const RationalTF& g, const RationalTF& mu, double rho, double omega0,
                                               double gamma, double omega_c);

struct DroopDesign {
    double omega_c_closed = 0.0;  // rad/s
    double Tp_min = 0.0;          // s
    double Tp_gate = 0.0;         // bound applies when T_p exceeds this
    bool bound_applies = false;
    bool meets_bound = true;
    double Xi = 0.0;
};
[[nodiscard]] DroopDesign droop_design(const ConverterParams& params, double rho, double gamma);

struct SgMarginEstimate {
    double omega_c_no_dw = 0.0;
    double M_no_dw = 0.0;
    double M_dw = 0.0;
    double xi_lo = 0.0;
    double xi_hi = 0.0;
    double governor_ratio = 0.0;  // omega_c / sqrt(k_g / (2 H T_G)), expected >> 1
    double line_ratio = 0.0;      // omega_c / (omega0 sqrt(1 + rho^2)), expected << 1

    [[nodiscard]] bool in_interval(double xi) const noexcept { return xi > xi_lo && xi < xi_hi; }
};
/// Throws DegenerateXi when mach.xi_sm == 0.
[[nodiscard]] SgMarginEstimate sg_margin_estimates(const MachineParams& mach, double rho, double omega_c_no_dw);

struct MarginReport {
    std::string bus;
    double omega_c = 0.0;
    double margin = 0.0;
    double gamma = 0.0;
    bool pass = false;
    ResonanceVerdict resonance;
    std::string notes;
};

struct RhoReport {
    double rho = 0.0;
    Condition1Result condition1;
    std::vector<PoleVerdict> condition2_poles;
    Condition2Result condition2;
    Condition3Result condition3;
    std::vector<MarginReport> margins;
    bool trivial = false;  // single node, no coupling
    bool pass = false;
};

struct CertificationReport {
    std::vector<std::string> nodes;
    std::vector<double> gamma;
    double lambda2 = 0.0;
    std::vector<RhoReport> runs;
    bool certified = false;
    std::optional<std::string> error;
};

/// G'_n = gamma_n g_n for every node.
[[nodiscard]] std::vector<RationalTF> normalized_dynamics(const ReducedNetwork& net, std::span<const Device> devices);

[[nodiscard]] RhoReport certify_at(const ReducedNetwork& net, std::span<const Device> devices, double rho,
                                   double omega0, const CertificationConfig& cfg);
/// Runs at plant.rho.min and plant.rho.max; module errors are caught into report.error.
[[nodiscard]] CertificationReport certify(const Plant& plant, const CertificationConfig& cfg);

}  // namespace gridcert
