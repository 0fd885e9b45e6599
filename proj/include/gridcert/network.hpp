#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "gridcert/devices.hpp"

namespace gridcert {

struct LineParams {
    std::string from;
    std::string to;
    double r_pu = 0.0;
    double l_pu = 0.0;  // per-unit inductance; equals per-unit reactance at w0
};

struct BusSpec {
    std::string id;
    std::optional<Device> device;  // empty for passive buses
    std::optional<XiSM> damper;    // set when xi_sm came from a damper circuit
};

struct NetworkSpec {
    std::vector<BusSpec> buses;
    std::vector<LineParams> lines;
    double omega0 = 0.0;  // rad/s
    double base_mva = 100.0;
    double base_kv = 0.0;
    /// Lines with R/X below this are lifted to it for certification (0 = refuse).
    double rho_floor = 0.0;

    [[nodiscard]] std::optional<std::size_t> bus_index(const std::string& id) const;
};

/// r / (w0 l) in per-unit, i.e. r_pu / x_pu.
[[nodiscard]] double line_rho(const LineParams& line);

struct RhoRange {
    double min = 0.0;
    double max = 0.0;
};
/// Extrema of line_rho over all branches after the spec's rho floor is applied.
/// Throws NonPositiveRho if a branch is lossless and no floor is set.
[[nodiscard]] RhoRange rho_range(const NetworkSpec& spec);

/// Weighted Laplacian over all buses (weights 1/l_pu; parallel lines add).
/// Throws Disconnected if the graph has more than one component.
[[nodiscard]] Eigen::MatrixXd build_laplacian(const NetworkSpec& spec);

/// Schur complement onto `keep` (indices into L_tot). The result is
/// symmetrised and its diagonal reset to minus the off-diagonal row sums.
/// Throws SingularInterior if the eliminated block is singular.
[[nodiscard]] Eigen::MatrixXd kron_reduce(const Eigen::MatrixXd& L_tot, const std::vector<int>& keep);

struct Normalized {
    Eigen::MatrixXd Lnorm;
    Eigen::VectorXd spectrum;  // ascending
    double lambda2 = 0.0;
};

/// Gamma^{-1/2} L Gamma^{-1/2} and its spectrum. Throws ZeroGamma for a
/// non-positive entry of gamma.
[[nodiscard]] Normalized normalize(const Eigen::MatrixXd& L, const Eigen::VectorXd& gamma);

/// gamma_n = 2 * sum of incident edge weights of a Laplacian.
[[nodiscard]] Eigen::VectorXd connectivity_weights(const Eigen::MatrixXd& L);

struct Edge {
    int a = 0;
    int b = 0;
    double weight = 0.0;
};

struct ReducedNetwork {
    std::vector<std::string> nodes;
    Eigen::MatrixXd L;
    Eigen::VectorXd gamma;
    Eigen::MatrixXd Lnorm;
    Eigen::VectorXd spectrum;
    double lambda2 = 0.0;

    [[nodiscard]] int size() const noexcept { return static_cast<int>(nodes.size()); }
    /// Off-diagonal couplings above round-off, as undirected edges a < b.
    [[nodiscard]] std::vector<Edge> edges() const;
};

/// Kron-reduce onto the non-passive buses and normalise. Single-node
/// networks get gamma = 0 and L' = [0] without calling normalize().
[[nodiscard]] ReducedNetwork reduce(const NetworkSpec& spec);

/// A reduced network together with its per-node devices and line R/X range.
struct Plant {
    ReducedNetwork network;
    std::vector<Device> devices;  // aligned with network.nodes
    RhoRange rho;
    double omega0 = 0.0;
};

[[nodiscard]] Plant build_plant(const NetworkSpec& spec);

}  // namespace gridcert
