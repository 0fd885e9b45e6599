#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "gridcert/devices.hpp"
#include "gridcert/network.hpp"

namespace gridcert {

/// Where each block's states sit in the closed-loop state vector.
struct StateLayout {
    std::vector<int> device_offset;  // realization of the proper part of g_n
    std::vector<int> device_states;
    std::vector<int> angle;          // integrator state; theta_n = x[angle] + q1_n u_n
    std::vector<int> filter;         // P_dist filter state, -1 when absent
    std::vector<int> edge_offset;    // two mu states per edge
    std::vector<Edge> edges;
    int total = 0;
};

/// Linear closed loop of bus dynamics, angle integrators and line dynamics.
/// Input is the per-bus load step P_load; outputs below are
/// y = C x + D P_load.
struct ClosedLoop {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
    Eigen::MatrixXd C_omega;
    Eigen::MatrixXd D_omega;
    Eigen::MatrixXd C_theta;
    Eigen::MatrixXd D_theta;
    Eigen::MatrixXd C_power;  // branch power per edge, a -> b
    StateLayout layout;
    int buses = 0;

    /// theta(s) per unit P_load(s): C_theta (sI - A)^{-1} B + D_theta.
    [[nodiscard]] Eigen::MatrixXcd angle_response(Complex s) const;
    /// omega(s) per unit P_load(s).
    [[nodiscard]] Eigen::MatrixXcd frequency_response(Complex s) const;
};

/// Throws Improper if some g_n / s is improper.
[[nodiscard]] ClosedLoop assemble(const ReducedNetwork& net, std::span<const Device> devices, double rho, double omega0);

/// Full spectrum sorted by real part, descending. Throws NoConverge.
[[nodiscard]] std::vector<Complex> eigenvalues(const ClosedLoop& cl);
[[nodiscard]] std::vector<Complex> eigenvalues(const Eigen::MatrixXd& A);

/// Index of the eigenvalue closest to the origin (the uniform-angle drift mode).
[[nodiscard]] std::size_t drift_index(std::span<const Complex> eig);

/// Largest real part over all eigenvalues except the drift mode.
[[nodiscard]] double max_nondrift_real(std::span<const Complex> eig);

struct SimResult {
    std::vector<double> t;
    Eigen::MatrixXd omega;  // samples x buses, rad/s deviation
    Eigen::MatrixXd power;  // samples x edges, p.u.
    Complex dominant{};     // dominant eigenvalue observable in the inter-bus spread
    int step_bus = 0;
};

/// Fixed-step RK4 response to a load step at t = 0. dt <= 0 selects
/// 0.05 / max|lambda|. Throws StepTooLarge if dt > 0.1 / max|lambda|.
[[nodiscard]] SimResult step_response(const ClosedLoop& cl, int bus, double magnitude, double t_end, double dt);

/// Largest-real-part eigenvalue whose mode shows up in omega_a - omega_b for
/// a step at `bus` (residue relative to the largest above 1e-6).
[[nodiscard]] Complex dominant_observable(const ClosedLoop& cl, int bus, int a, int b);

struct SignalFit {
    double growth_rate = 0.0;   // 1/s
    double frequency_hz = 0.0;
};

/// Least-squares growth of log peak magnitude over the last half of the
/// record. Frequency comes from the peak spacing, or from zero crossings of
/// the linearly detrended signal when fewer than three peaks are found.
[[nodiscard]] SignalFit fit_oscillation(std::span<const double> t, std::span<const double> x);

struct OscillationMetric {
    double spread = 0.0;  // max over t of max_n omega_n - min_n omega_n
    double growth_rate = 0.0;
    double dominant_freq_hz = 0.0;
    int pair_a = 0;       // bus pair whose difference was fitted
    int pair_b = 1;
};
[[nodiscard]] OscillationMetric oscillation_metric(const SimResult& r);

}  // namespace gridcert
