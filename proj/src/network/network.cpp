#include "gridcert/network.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "gridcert/error.hpp"

namespace gridcert {

std::optional<std::size_t> NetworkSpec::bus_index(const std::string& id) const {
    for (std::size_t i = 0; i < buses.size(); ++i) {
        if (buses[i].id == id) return i;
    }
    return std::nullopt;
}

double line_rho(const LineParams& line) {
    if (!(line.l_pu > 0.0)) throw Error(ErrorKind::InvalidArgument, "line inductance must be > 0");
    return line.r_pu / line.l_pu;
}

RhoRange rho_range(const NetworkSpec& spec) {
    if (spec.lines.empty()) throw Error(ErrorKind::InvalidArgument, "network has no lines");
    RhoRange r{std::numeric_limits<double>::infinity(), 0.0};
    for (const auto& line : spec.lines) {
        double rho = line_rho(line);
        if (rho < spec.rho_floor) rho = spec.rho_floor;
        if (!(rho > 0.0)) {
            throw Error(ErrorKind::NonPositiveRho, "line " + line.from + "-" + line.to +
                                                       " is lossless; set a rho floor to certify");
        }
        r.min = std::min(r.min, rho);
        r.max = std::max(r.max, rho);
    }
    return r;
}

Eigen::MatrixXd build_laplacian(const NetworkSpec& spec) {
    const auto n = static_cast<Eigen::Index>(spec.buses.size());
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    std::vector<std::vector<Eigen::Index>> adj(static_cast<std::size_t>(n));
    for (const auto& line : spec.lines) {
        const auto i = spec.bus_index(line.from);
        const auto k = spec.bus_index(line.to);
        if (!i || !k) throw Error(ErrorKind::ValidationError, "line references unknown bus");
        if (*i == *k) throw Error(ErrorKind::ValidationError, "line " + line.from + " connects a bus to itself");
        if (!(line.l_pu > 0.0)) throw Error(ErrorKind::ValidationError, "line inductance must be > 0");
        const double w = 1.0 / line.l_pu;
        const auto a = static_cast<Eigen::Index>(*i);
        const auto b = static_cast<Eigen::Index>(*k);
        L(a, b) -= w;
        L(b, a) -= w;
        L(a, a) += w;
        L(b, b) += w;
        adj[*i].push_back(b);
        adj[*k].push_back(a);
    }
    if (n > 0) {
        std::vector<bool> seen(static_cast<std::size_t>(n), false);
        std::queue<Eigen::Index> q;
        q.push(0);
        seen[0] = true;
        Eigen::Index count = 1;
        while (!q.empty()) {
            const auto u = q.front();
            q.pop();
            for (auto v : adj[static_cast<std::size_t>(u)]) {
                if (!seen[static_cast<std::size_t>(v)]) {
                    seen[static_cast<std::size_t>(v)] = true;
                    ++count;
                    q.push(v);
                }
            }
        }
        if (count != n) throw Error(ErrorKind::Disconnected, "network graph has more than one component");
    }
    return L;
}

Eigen::MatrixXd kron_reduce(const Eigen::MatrixXd& L_tot, const std::vector<int>& keep) {
    const auto n = static_cast<int>(L_tot.rows());
    std::vector<bool> kept(static_cast<std::size_t>(n), false);
    for (int k : keep) {
        if (k < 0 || k >= n || kept[static_cast<std::size_t>(k)]) {
            throw Error(ErrorKind::InvalidArgument, "invalid or duplicate kept index");
        }
        kept[static_cast<std::size_t>(k)] = true;
    }
    std::vector<int> elim;
    for (int i = 0; i < n; ++i) {
        if (!kept[static_cast<std::size_t>(i)]) elim.push_back(i);
    }
    const auto nk = static_cast<Eigen::Index>(keep.size());
    const auto ne = static_cast<Eigen::Index>(elim.size());
    Eigen::MatrixXd Lkk(nk, nk), Lke(nk, ne), Lee(ne, ne);
    for (Eigen::Index i = 0; i < nk; ++i) {
        for (Eigen::Index j = 0; j < nk; ++j) Lkk(i, j) = L_tot(keep[i], keep[j]);
        for (Eigen::Index j = 0; j < ne; ++j) Lke(i, j) = L_tot(keep[i], elim[j]);
    }
    for (Eigen::Index i = 0; i < ne; ++i) {
        for (Eigen::Index j = 0; j < ne; ++j) Lee(i, j) = L_tot(elim[i], elim[j]);
    }
    Eigen::MatrixXd L = Lkk;
    if (ne > 0) {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(Lee);
        const double scale = std::max(1.0, Lee.cwiseAbs().maxCoeff());
        lu.setThreshold(1e-12);
        if (lu.rank() < ne || lu.maxPivot() < 1e-12 * scale) {
            throw Error(ErrorKind::SingularInterior, "eliminated block is singular");
        }
        L -= Lke * lu.solve(Lke.transpose());
    }
    L = 0.5 * (L + L.transpose()).eval();
    const double wmax = std::max(1.0, L.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < nk; ++i) {
        double s = 0.0;
        for (Eigen::Index j = 0; j < nk; ++j) {
            if (i == j) continue;
            if (L(i, j) > 0.0 && L(i, j) < 1e-12 * wmax) L(i, j) = 0.0;
            s += L(i, j);
        }
        L(i, i) = -s;
    }
    return L;
}

Eigen::VectorXd connectivity_weights(const Eigen::MatrixXd& L) {
    Eigen::VectorXd gamma = Eigen::VectorXd::Zero(L.rows());
    for (Eigen::Index i = 0; i < L.rows(); ++i) {
        for (Eigen::Index j = 0; j < L.cols(); ++j) {
            if (i != j) gamma(i) -= L(i, j);
        }
        gamma(i) *= 2.0;
    }
    return gamma;
}

Normalized normalize(const Eigen::MatrixXd& L, const Eigen::VectorXd& gamma) {
    for (Eigen::Index i = 0; i < gamma.size(); ++i) {
        if (!(gamma(i) > 0.0)) throw Error(ErrorKind::ZeroGamma, "isolated node after reduction");
    }
    const Eigen::VectorXd inv_sqrt = gamma.cwiseSqrt().cwiseInverse();
    Normalized out;
    out.Lnorm = inv_sqrt.asDiagonal() * L * inv_sqrt.asDiagonal();
    out.Lnorm = 0.5 * (out.Lnorm + out.Lnorm.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.Lnorm, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::NoConverge, "symmetric eigensolver failed");
    out.spectrum = es.eigenvalues();
    out.lambda2 = out.spectrum.size() > 1 ? out.spectrum(1) : 0.0;
    return out;
}

std::vector<Edge> ReducedNetwork::edges() const {
    std::vector<Edge> out;
    const double wmax = L.size() > 0 ? L.cwiseAbs().maxCoeff() : 0.0;
    for (int a = 0; a < size(); ++a) {
        for (int b = a + 1; b < size(); ++b) {
            const double w = -L(a, b);
            if (w > 1e-12 * wmax) out.push_back({a, b, w});
        }
    }
    return out;
}

ReducedNetwork reduce(const NetworkSpec& spec) {
    const Eigen::MatrixXd L_tot = build_laplacian(spec);
    ReducedNetwork net;
    std::vector<int> keep;
    for (std::size_t i = 0; i < spec.buses.size(); ++i) {
        if (spec.buses[i].device) {
            keep.push_back(static_cast<int>(i));
            net.nodes.push_back(spec.buses[i].id);
        }
    }
    if (keep.empty()) throw Error(ErrorKind::ValidationError, "network has no dynamic (non-passive) bus");
    net.L = kron_reduce(L_tot, keep);
    net.gamma = connectivity_weights(net.L);
    if (net.size() == 1) {
        net.Lnorm = Eigen::MatrixXd::Zero(1, 1);
        net.spectrum = Eigen::VectorXd::Zero(1);
        net.lambda2 = 0.0;
        return net;
    }
    auto norm = normalize(net.L, net.gamma);
    net.Lnorm = std::move(norm.Lnorm);
    net.spectrum = std::move(norm.spectrum);
    net.lambda2 = norm.lambda2;
    return net;
}

Plant build_plant(const NetworkSpec& spec) {
    Plant plant;
    plant.network = reduce(spec);
    plant.omega0 = spec.omega0;
    for (const auto& bus : spec.buses) {
        if (bus.device) plant.devices.push_back(*bus.device);
    }
    if (spec.lines.empty()) {
        plant.rho = {0.0, 0.0};
    } else {
        plant.rho = rho_range(spec);
    }
    return plant;
}

}  // namespace gridcert
