#include "gridcert/sim.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>

#include "gridcert/error.hpp"

namespace gridcert {

namespace {

struct BusBlock {
    StateSpace proper;  // realization of g - q1 s
    double q1 = 0.0;
    double filter_xi = 0.0;
};

BusBlock split_bus(const Device& dev) {
    const RationalTF g = bus_transfer(dev);
    BusBlock b;
    b.filter_xi = disturbance_filter_xi(dev);
    const int dn = g.num().degree();
    const int dd = g.den().degree();
    if (dn > dd + 1) throw Error(ErrorKind::Improper, "g/s is improper");
    if (dn == dd + 1) {
        // den is monic, so the s^{dn} coefficient of num is the slope.
        b.q1 = g.num().leading();
        const Polynomial rest = g.num() - Polynomial({0.0, b.q1}) * g.den();
        b.proper = realize(RationalTF(rest, g.den()));
    } else {
        b.proper = realize(g);
    }
    return b;
}

}  // namespace

ClosedLoop assemble(const ReducedNetwork& net, std::span<const Device> devices, double rho, double omega0) {
    const int N = net.size();
    if (static_cast<int>(devices.size()) != N) throw Error(ErrorKind::InvalidArgument, "device list does not match nodes");
    const StateSpace mu = realize(line_mu({rho, omega0}));

    std::vector<BusBlock> blocks;
    for (const auto& d : devices) blocks.push_back(split_bus(d));

    ClosedLoop cl;
    cl.buses = N;
    auto& lay = cl.layout;
    lay.edges = net.edges();
    int off = 0;
    for (int n = 0; n < N; ++n) {
        const auto& b = blocks[static_cast<std::size_t>(n)];
        lay.device_offset.push_back(off);
        lay.device_states.push_back(static_cast<int>(b.proper.states()));
        off += static_cast<int>(b.proper.states());
        lay.angle.push_back(off++);
        lay.filter.push_back(b.filter_xi > 0.0 ? off++ : -1);
    }
    for (std::size_t e = 0; e < lay.edges.size(); ++e) {
        lay.edge_offset.push_back(off);
        off += static_cast<int>(mu.states());
    }
    lay.total = off;
    const int nx = off;
    const int E = static_cast<int>(lay.edges.size());
    const int m = static_cast<int>(mu.states());

    // u = U x + Up P, theta = T x + Tp P
    Eigen::MatrixXd U = Eigen::MatrixXd::Zero(N, nx);
    Eigen::MatrixXd Up = Eigen::MatrixXd::Zero(N, N);
    cl.C_power = Eigen::MatrixXd::Zero(E, nx);
    for (int n = 0; n < N; ++n) {
        if (lay.filter[static_cast<std::size_t>(n)] >= 0) {
            U(n, lay.filter[static_cast<std::size_t>(n)]) = -1.0;
        } else {
            Up(n, n) = -1.0;
        }
    }
    for (int e = 0; e < E; ++e) {
        const auto& ed = lay.edges[static_cast<std::size_t>(e)];
        const int eo = lay.edge_offset[static_cast<std::size_t>(e)];
        const Eigen::RowVectorXd row = ed.weight * mu.C.row(0);
        cl.C_power.block(e, eo, 1, m) = row;
        U.block(ed.a, eo, 1, m) -= row;
        U.block(ed.b, eo, 1, m) += row;
    }
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(N, nx);
    Eigen::MatrixXd Tp = Eigen::MatrixXd::Zero(N, N);
    for (int n = 0; n < N; ++n) {
        const double q1 = blocks[static_cast<std::size_t>(n)].q1;
        T(n, lay.angle[static_cast<std::size_t>(n)]) = 1.0;
        T.row(n) += q1 * U.row(n);
        Tp.row(n) = q1 * Up.row(n);
    }

    cl.A = Eigen::MatrixXd::Zero(nx, nx);
    cl.B = Eigen::MatrixXd::Zero(nx, N);
    for (int n = 0; n < N; ++n) {
        const auto& b = blocks[static_cast<std::size_t>(n)];
        const int d0 = lay.device_offset[static_cast<std::size_t>(n)];
        const int dn = lay.device_states[static_cast<std::size_t>(n)];
        const int ai = lay.angle[static_cast<std::size_t>(n)];
        if (dn > 0) {
            cl.A.block(d0, d0, dn, dn) += b.proper.A;
            cl.A.middleRows(d0, dn) += b.proper.B * U.row(n);
            cl.B.middleRows(d0, dn) += b.proper.B * Up.row(n);
            cl.A.block(ai, d0, 1, dn) += b.proper.C;
        }
        const double D = b.proper.D(0, 0);
        cl.A.row(ai) += D * U.row(n);
        cl.B.row(ai) += D * Up.row(n);
        if (const int f = lay.filter[static_cast<std::size_t>(n)]; f >= 0) {
            cl.A(f, f) = -1.0 / b.filter_xi;
            cl.B(f, n) = 1.0 / b.filter_xi;
        }
    }
    for (int e = 0; e < E; ++e) {
        const auto& ed = lay.edges[static_cast<std::size_t>(e)];
        const int eo = lay.edge_offset[static_cast<std::size_t>(e)];
        cl.A.block(eo, eo, m, m) += mu.A;
        cl.A.middleRows(eo, m) += mu.B * (T.row(ed.a) - T.row(ed.b));
        cl.B.middleRows(eo, m) += mu.B * (Tp.row(ed.a) - Tp.row(ed.b));
    }
    cl.C_theta = T;
    cl.D_theta = Tp;
    cl.C_omega = T * cl.A;
    cl.D_omega = T * cl.B;
    return cl;
}

Eigen::MatrixXcd ClosedLoop::angle_response(Complex s) const {
    const auto n = A.rows();
    const Eigen::MatrixXcd M = s * Eigen::MatrixXcd::Identity(n, n) - A.cast<Complex>();
    const Eigen::MatrixXcd X = M.partialPivLu().solve(B.cast<Complex>());
    return C_theta.cast<Complex>() * X + D_theta.cast<Complex>();
}

Eigen::MatrixXcd ClosedLoop::frequency_response(Complex s) const {
    const auto n = A.rows();
    const Eigen::MatrixXcd M = s * Eigen::MatrixXcd::Identity(n, n) - A.cast<Complex>();
    const Eigen::MatrixXcd X = M.partialPivLu().solve(B.cast<Complex>());
    return C_omega.cast<Complex>() * X + D_omega.cast<Complex>();
}

std::vector<Complex> eigenvalues(const Eigen::MatrixXd& A) {
    if (!A.allFinite()) throw Error(ErrorKind::InvalidArgument, "state matrix has non-finite entries");
    std::vector<Complex> out;
    if (A.rows() == 0) return out;
    Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::NoConverge, "closed-loop eigenvalue iteration failed");
    const auto ev = es.eigenvalues();
    out.assign(ev.data(), ev.data() + ev.size());
    std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
    return out;
}

std::vector<Complex> eigenvalues(const ClosedLoop& cl) { return eigenvalues(cl.A); }

std::size_t drift_index(std::span<const Complex> eig) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < eig.size(); ++i) {
        if (std::abs(eig[i]) < std::abs(eig[best])) best = i;
    }
    return best;
}

double max_nondrift_real(std::span<const Complex> eig) {
    const std::size_t d = drift_index(eig);
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < eig.size(); ++i) {
        if (i != d) m = std::max(m, eig[i].real());
    }
    return m;
}

Complex dominant_observable(const ClosedLoop& cl, int bus, int a, int b) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(cl.A, true);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::NoConverge, "closed-loop eigenvalue iteration failed");
    const Eigen::MatrixXcd V = es.eigenvectors();
    const Eigen::MatrixXcd W = V.partialPivLu().inverse();
    const Eigen::RowVectorXcd c = (cl.C_omega.row(a) - cl.C_omega.row(b)).cast<Complex>();
    const Eigen::VectorXcd bv = cl.B.col(bus).cast<Complex>();
    const auto n = cl.A.rows();
    std::vector<double> res(static_cast<std::size_t>(n));
    double rmax = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        res[static_cast<std::size_t>(i)] = std::abs((c * V.col(i))(0) * (W.row(i) * bv)(0));
        rmax = std::max(rmax, res[static_cast<std::size_t>(i)]);
    }
    Complex best(-std::numeric_limits<double>::infinity(), 0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (res[static_cast<std::size_t>(i)] <= 1e-6 * rmax) continue;
        const Complex l = es.eigenvalues()(i);
        if (l.real() > best.real() || (l.real() == best.real() && l.imag() > best.imag())) best = l;
    }
    return best;
}

SimResult step_response(const ClosedLoop& cl, int bus, double magnitude, double t_end, double dt) {
    if (bus < 0 || bus >= cl.buses) throw Error(ErrorKind::InvalidArgument, "step bus out of range");
    if (!(t_end > 0.0)) throw Error(ErrorKind::InvalidArgument, "t_end must be > 0");
    const auto eig = eigenvalues(cl);
    double lmax = 0.0;
    for (auto l : eig) lmax = std::max(lmax, std::abs(l));
    const double bound = lmax > 0.0 ? 0.1 / lmax : t_end;
    if (dt <= 0.0) dt = 0.5 * bound;
    if (dt > bound * (1.0 + 1e-12)) {
        throw Error(ErrorKind::StepTooLarge, "dt must be <= 0.1/max|lambda| = " + std::to_string(bound));
    }
    const auto steps = static_cast<long>(std::ceil(t_end / dt - 1e-9));
    const double h = t_end / static_cast<double>(steps);

    const Eigen::Index nx = cl.A.rows();
    Eigen::VectorXd P = Eigen::VectorXd::Zero(cl.buses);
    P(bus) = magnitude;
    const Eigen::VectorXd f = cl.B * P;
    // One RK4 step of x' = A x + f, written out for the linear case.
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(nx, nx);
    const Eigen::MatrixXd hA = h * cl.A;
    const Eigen::MatrixXd hA2 = hA * hA;
    const Eigen::MatrixXd Phi = I + hA + hA2 / 2.0 + hA2 * hA / 6.0 + hA2 * hA2 / 24.0;
    const Eigen::VectorXd Gf = h * (I + hA / 2.0 + hA2 / 6.0 + hA2 * hA / 24.0) * f;

    SimResult r;
    r.step_bus = bus;
    const auto K = static_cast<Eigen::Index>(steps + 1);
    r.t.resize(static_cast<std::size_t>(K));
    r.omega.resize(K, cl.buses);
    r.power.resize(K, cl.C_power.rows());
    const Eigen::VectorXd dw = cl.D_omega * P;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(nx);
    for (Eigen::Index k = 0; k < K; ++k) {
        r.t[static_cast<std::size_t>(k)] = h * static_cast<double>(k);
        r.omega.row(k) = (cl.C_omega * x + dw).transpose();
        r.power.row(k) = (cl.C_power * x).transpose();
        if (k + 1 < K) x = Phi * x + Gf;
    }

    if (cl.buses >= 2 && magnitude != 0.0) {
        const auto om = oscillation_metric(r);
        r.dominant = dominant_observable(cl, bus, om.pair_a, om.pair_b);
    } else if (!eig.empty()) {
        const std::size_t d = drift_index(eig);
        r.dominant = eig[d == 0 && eig.size() > 1 ? 1 : 0];
    }
    return r;
}

SignalFit fit_oscillation(std::span<const double> t, std::span<const double> x) {
    SignalFit out;
    const std::size_t n = std::min(t.size(), x.size());
    if (n < 8) return out;
    const std::size_t k0 = n / 2;
    auto linfit = [](const std::vector<double>& xs, const std::vector<double>& ys) {
        const double m = static_cast<double>(xs.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sx += xs[i];
            sy += ys[i];
            sxx += xs[i] * xs[i];
            sxy += xs[i] * ys[i];
        }
        const double den = m * sxx - sx * sx;
        const double slope = den != 0.0 ? (m * sxy - sx * sy) / den : 0.0;
        return std::pair{slope, (sy - slope * sx) / m};
    };

    std::vector<double> pt, pl;
    for (std::size_t i = std::max<std::size_t>(k0, 1); i + 1 < n; ++i) {
        const double a = std::abs(x[i]);
        if (a > 0.0 && a >= std::abs(x[i - 1]) && a > std::abs(x[i + 1])) {
            pt.push_back(t[i]);
            pl.push_back(std::log(a));
        }
    }
    const std::size_t peaks = pt.size();
    const std::vector<double> peak_t = pt;
    if (pt.size() < 3) {
        pt.clear();
        pl.clear();
        for (std::size_t i = k0; i < n; ++i) {
            if (std::abs(x[i]) > 0.0) {
                pt.push_back(t[i]);
                pl.push_back(std::log(std::abs(x[i])));
            }
        }
    }
    if (pt.size() >= 2) out.growth_rate = linfit(pt, pl).first;
    if (peaks >= 3) {
        // Peaks of |x| are half a period apart.
        out.frequency_hz = static_cast<double>(peaks - 1) / (2.0 * (peak_t.back() - peak_t.front()));
        return out;
    }

    std::vector<double> wt(t.begin() + static_cast<long>(k0), t.begin() + static_cast<long>(n));
    std::vector<double> wx(x.begin() + static_cast<long>(k0), x.begin() + static_cast<long>(n));
    const auto [slope, icept] = linfit(wt, wx);
    int crossings = 0;
    double prev = wx[0] - (slope * wt[0] + icept);
    for (std::size_t i = 1; i < wt.size(); ++i) {
        const double cur = wx[i] - (slope * wt[i] + icept);
        if ((prev < 0.0 && cur >= 0.0) || (prev > 0.0 && cur <= 0.0)) ++crossings;
        if (cur != 0.0) prev = cur;
    }
    const double span = wt.back() - wt.front();
    if (span > 0.0) out.frequency_hz = crossings / (2.0 * span);
    return out;
}

OscillationMetric oscillation_metric(const SimResult& r) {
    const auto N = r.omega.cols();
    if (N < 2) throw Error(ErrorKind::InvalidArgument, "oscillation metric needs at least two buses");
    OscillationMetric m;
    for (Eigen::Index k = 0; k < r.omega.rows(); ++k) {
        m.spread = std::max(m.spread, r.omega.row(k).maxCoeff() - r.omega.row(k).minCoeff());
    }
    double best = -1.0;
    for (Eigen::Index a = 0; a < N; ++a) {
        for (Eigen::Index b = a + 1; b < N; ++b) {
            const double d = (r.omega.col(a) - r.omega.col(b)).cwiseAbs().maxCoeff();
            if (d > best) {
                best = d;
                m.pair_a = static_cast<int>(a);
                m.pair_b = static_cast<int>(b);
            }
        }
    }
    const Eigen::VectorXd d = r.omega.col(m.pair_a) - r.omega.col(m.pair_b);
    const auto fit = fit_oscillation(r.t, std::span<const double>(d.data(), static_cast<std::size_t>(d.size())));
    m.growth_rate = fit.growth_rate;
    m.dominant_freq_hz = fit.frequency_hz;
    return m;
}

}  // namespace gridcert
