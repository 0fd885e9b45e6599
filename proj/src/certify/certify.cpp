#include "gridcert/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gridcert/error.hpp"

namespace gridcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kHalfPi = std::numbers::pi / 2.0;

bool stable_root(Complex r, double tol) { return r.real() < -tol * std::max(1.0, std::abs(r)); }

double safe_abs(const RationalTF& tf, Complex s) {
    try {
        return std::abs(tf(s));
    } catch (const Error&) {
        return kInf;
    }
}

/// Golden-section minimisation of f on [a, b]; returns the best abscissa seen.
template <class F>
std::pair<double, double> golden_min(F&& f, double a, double b) {
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double best_x = a;
    double best_f = f(a);
    if (const double fb = f(b); fb < best_f) {
        best_x = b;
        best_f = fb;
    }
    double c = b - r * (b - a);
    double d = a + r * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < 60 && b - a > 1e-12 * b; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
        if (fc < best_f) {
            best_f = fc;
            best_x = c;
        }
        if (fd < best_f) {
            best_f = fd;
            best_x = d;
        }
    }
    return {best_x, best_f};
}

/// Scan slack(w) > 0 over sorted frequencies in [lo, hi), refining near-violations
/// between neighbours. Returns the first failing frequency, if any.
template <class F>
std::optional<double> scan_slack(const std::vector<double>& w, double lo, double hi, bool hi_inclusive, double band,
                                 F&& slack) {
    auto inside = [&](double x) { return x >= lo && (hi_inclusive ? x <= hi : x < hi); };
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (!inside(w[k])) continue;
        const double f = slack(w[k]);
        if (!(f > 0.0)) return w[k];
        if (f < band) {
            const double a = std::max(lo, k > 0 ? w[k - 1] : w[k]);
            double b = k + 1 < w.size() ? w[k + 1] : w[k];
            b = std::min(b, hi);
            if (b > a) {
                auto [x, fx] = golden_min(slack, a, b);
                if (!(fx > 0.0) && inside(x)) return x;
            }
        }
    }
    return std::nullopt;
}

std::vector<double> evaluation_grid(const CertificationConfig& cfg, std::initializer_list<double> extra) {
    std::vector<double> w = cfg.grid();
    for (double e : extra) {
        if (std::isfinite(e) && e > 0.0) w.push_back(e);
    }
    std::sort(w.begin(), w.end());
    w.erase(std::unique(w.begin(), w.end()), w.end());
    return w;
}

}  // namespace

void CertificationConfig::validate(double omega_n) const {
    auto fail = [](const std::string& m) { throw Error(ErrorKind::InvalidConfig, m); };
    if (!(delta > 0.0)) fail("delta must be > 0");
    if (!(omega_lo > 0.0) || !(omega_hi > omega_lo)) fail("grid bounds must satisfy 0 < lo < hi");
    if (grid_points < 2) fail("grid needs at least 2 points");
    if (arc_samples < 2 || segment_samples < 1) fail("too few S_delta boundary samples");
    if (omega_lo > delta) fail("grid must start at or below delta");
    if (omega_hi < 10.0 * omega_n) fail("grid must extend to 10x the line natural frequency");
    if (omega1 && *omega1 < delta) fail("omega1 must be >= delta");
    if (omega1 && omega2 && *omega2 < *omega1) fail("omega2 must be >= omega1");
    if (omega2 && *omega2 < delta) fail("omega2 must be >= delta");
    if (!(guard >= 0.0 && guard < 1.0)) fail("guard band must lie in [0, 1)");
}

std::vector<double> CertificationConfig::grid() const {
    std::vector<double> w(static_cast<std::size_t>(std::max(grid_points, 2)));
    const double a = std::log10(omega_lo);
    const double b = std::log10(omega_hi);
    const auto n = static_cast<double>(w.size() - 1);
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = std::pow(10.0, a + (b - a) * static_cast<double>(k) / n);
    w.front() = omega_lo;
    w.back() = omega_hi;
    return w;
}

std::vector<Complex> sdelta_arc(double delta, int samples) {
    std::vector<Complex> s;
    s.reserve(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        const double th = kHalfPi * i / (samples - 1);
        s.push_back(std::polar(delta, th));
    }
    s.back() = Complex(0.0, delta);
    return s;
}

std::vector<Complex> sdelta_segment(double delta, int samples) {
    std::vector<Complex> s;
    for (int i = 0; i <= samples; ++i) s.emplace_back(0.0, delta * i / samples);
    return s;
}

RationalTF synchronous_dynamics(std::span<const RationalTF> g_norm) {
    if (g_norm.empty()) throw Error(ErrorKind::InvalidArgument, "no bus dynamics");
    for (const auto& g : g_norm) {
        if (g.is_zero()) throw Error(ErrorKind::ZeroInverse, "bus dynamics is the zero function");
    }
    Polynomial prod_num = Polynomial::constant(static_cast<double>(g_norm.size()));
    Polynomial den;
    for (std::size_t n = 0; n < g_norm.size(); ++n) {
        prod_num = prod_num * g_norm[n].num();
        Polynomial term = g_norm[n].den();
        for (std::size_t m = 0; m < g_norm.size(); ++m) {
            if (m != n) term = term * g_norm[m].num();
        }
        den = den + term;
    }
    return {prod_num, den};
}

Condition1Result check_condition1(const RationalTF& gbar, std::span<const RationalTF> g_norm, const RationalTF& mu,
                                  double lambda2, const CertificationConfig& cfg) {
    Condition1Result r;
    r.delta = cfg.delta;
    r.synchronous_stable = true;
    for (const Complex& p : poles(gbar)) {
        if (!stable_root(p, cfg.pole_tol)) {
            r.synchronous_stable = false;
            r.unstable_poles.push_back(p);
        }
    }
    if (!r.synchronous_stable) {
        r.M1 = kInf;
        r.failure = "UnstableSynchronousDynamics";
        return r;
    }
    r.M1 = std::max(safe_abs(gbar, Complex(0.0, 0.0)), std::abs(gbar.high_frequency_gain()));
    for (double w : cfg.grid()) r.M1 = std::max(r.M1, safe_abs(gbar, Complex(0.0, w)));

    std::vector<RationalTF> inv;
    inv.reserve(g_norm.size());
    for (const auto& g : g_norm) inv.push_back(invert(g));

    double delta = cfg.delta;
    for (int h = 0; h <= cfg.max_delta_halvings; ++h, delta *= 0.5) {
        std::vector<Complex> samples = sdelta_arc(delta, cfg.arc_samples);
        const auto seg = sdelta_segment(delta, cfg.segment_samples);
        samples.insert(samples.end(), seg.begin(), seg.end());
        double M2 = 0.0;
        for (const auto& gi : inv) {
            for (const Complex& s : samples) M2 = std::max(M2, safe_abs(gi, s));
        }
        r.delta = delta;
        r.halvings = h;
        r.M2 = M2;
        if (!std::isfinite(M2) || !std::isfinite(r.M1) || !(lambda2 > 0.0)) {
            r.worst_ratio = kInf;
            continue;
        }
        const double bound = lambda2 / (M2 + r.M1 * M2 * M2);
        r.worst_ratio = 0.0;
        for (const Complex& s : samples) {
            double lhs = 0.0;
            if (std::abs(s) > 0.0) lhs = std::abs(s) / safe_abs(mu, s);
            const double ratio = lhs / bound;
            if (ratio > r.worst_ratio || (ratio == r.worst_ratio && std::abs(s) > std::abs(r.witness))) {
                r.worst_ratio = ratio;
                r.witness = s;
            }
        }
        if (r.worst_ratio < 1.0 - cfg.guard) {
            r.coherence_ok = true;
            r.pass = true;
            return r;
        }
    }
    r.failure = std::isfinite(r.M2) ? "NoFeasibleDelta" : "UnboundedInverse";
    return r;
}

std::vector<PoleVerdict> check_condition2_poles(std::span<const RationalTF> g_norm, double delta,
                                                const CertificationConfig& cfg) {
    std::vector<PoleVerdict> out;
    for (const auto& g : g_norm) {
        PoleVerdict v;
        for (const Complex& p : poles(g)) {
            if (stable_root(p, cfg.pole_tol) || std::abs(p) < delta) continue;
            v.pass = false;
            v.witness = p;
            break;
        }
        out.push_back(v);
    }
    return out;
}

Condition2Result check_condition2_interop(std::span<const RationalTF> g_norm, const RationalTF& mu, double delta,
                                          const CertificationConfig& cfg) {
    Condition2Result r;
    std::vector<Complex> s = sdelta_arc(delta, cfg.arc_samples);
    const std::size_t arc = s.size();
    for (double w : evaluation_grid(cfg, {delta})) {
        if (w > delta) s.emplace_back(0.0, w);
    }
    const auto res = kernels::interop_scan(g_norm, mu, s, cfg.exec);
    r.samples.reserve(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) r.samples.push_back({s[k], res[k]});

    auto width_at = [&](double w) {
        const Complex sk(0.0, w);
        const auto one = kernels::interop_scan_serial(g_norm, mu, std::span<const Complex>(&sk, 1));
        return one[0].width();
    };
    std::vector<InteropSample> extra;
    for (std::size_t k = 0; k < s.size(); ++k) {
        const auto& hr = res[k];
        if (!hr.feasible()) continue;
        if (k < arc || hr.width() >= cfg.refine_band * kHalfPi) continue;
        const double a = k > arc ? s[k - 1].imag() : s[k].imag();
        const double b = k + 1 < s.size() ? s[k + 1].imag() : s[k].imag();
        if (!(b > a)) continue;
        auto [x, fx] = golden_min(width_at, a, b);
        if (!(fx > 0.0)) {
            const Complex sx(0.0, x);
            extra.push_back({sx, kernels::interop_scan_serial(g_norm, mu, std::span<const Complex>(&sx, 1))[0]});
        }
    }
    r.samples.insert(r.samples.end(), extra.begin(), extra.end());
    for (const auto& smp : r.samples) {
        if (smp.result.feasible()) continue;
        ++r.failures;
        if (!r.first_failure || std::abs(smp.s) < std::abs(r.first_failure->s)) r.first_failure = smp;
    }
    r.pass = r.failures == 0;
    return r;
}

Condition3Result check_condition3(std::span<const RationalTF> g_norm, const RationalTF& mu, double delta,
                                  const CertificationConfig& cfg) {
    Condition3Result r;
    const int N = static_cast<int>(g_norm.size());
    double wc_min = kInf;
    double wc_max = 0.0;
    for (const auto& g : g_norm) {
        const double wc = crossover_frequency(g, mu, cfg);
        wc_min = std::min(wc_min, wc);
        wc_max = std::max(wc_max, wc);
    }
    r.omega1 = cfg.omega1 ? *cfg.omega1 : (std::isfinite(wc_min) ? std::max(delta, 0.99 * wc_min) : cfg.omega_hi);
    r.omega2 = cfg.omega2 ? *cfg.omega2 : (std::isfinite(wc_max) ? std::min(cfg.omega_hi, 1.01 * wc_max) : cfg.omega_hi);
    r.omega1 = std::min(r.omega1, cfg.omega_hi);
    r.omega2 = std::max(r.omega2, r.omega1);

    const std::vector<double> w = evaluation_grid(cfg, {delta, r.omega1, r.omega2});
    const auto table = kernels::sweep_response(g_norm, mu, w, cfg.exec);
    const std::size_t K = w.size();
    std::vector<double> phase(static_cast<std::size_t>(N) * K);
    std::vector<RationalTF> loop;
    for (int n = 0; n < N; ++n) {
        loop.push_back(mul(mu, g_norm[static_cast<std::size_t>(n)]));
        const ContinuousPhase ph(loop.back(), cfg.omega_lo);
        for (std::size_t k = 0; k < K; ++k) phase[static_cast<std::size_t>(n) * K + k] = ph(w[k]) * 180.0 / std::numbers::pi;
    }
    const auto arc = sdelta_arc(delta, cfg.arc_samples);

    r.buses.resize(static_cast<std::size_t>(N));
    for (int n = 0; n < N; ++n) {
        const auto& L = loop[static_cast<std::size_t>(n)];
        auto& bus = r.buses[static_cast<std::size_t>(n)];
        auto r1 = [&](Complex s) {
            try {
                const Complex v = L(s);
                const double m = std::abs(v);
                return m > 0.0 ? v.real() / m - cfg.guard : -1.0;
            } catch (const Error&) {
                return -1.0;
            }
        };
        for (std::size_t i = 0; i < arc.size(); ++i) {
            if (!(r1(arc[i]) > 0.0)) {
                bus.region1 = {false, delta, true};
                break;
            }
        }
        if (bus.region1.pass) {
            auto fail = scan_slack(w, delta, r.omega1, false, cfg.refine_band, [&](double x) { return r1(Complex(0.0, x)); });
            if (fail) bus.region1 = {false, *fail, false};
        }
        auto r3 = [&](double x) {
            try {
                return 1.0 - cfg.guard - std::abs(L(Complex(0.0, x))) / x;
            } catch (const Error&) {
                return -1.0;
            }
        };
        if (auto fail = scan_slack(w, r.omega2, cfg.omega_hi, true, cfg.refine_band, r3)) bus.region3 = {false, *fail, false};
    }

    std::size_t kb = 0;
    while (kb < K && w[kb] < r.omega1) ++kb;
    std::size_t ke = kb;
    while (ke < K && w[ke] < r.omega2) ++ke;
    const auto r2 = kernels::region2_scan(table, phase, kb, ke, cfg.guard, cfg.exec);
    for (std::size_t k = kb; k < ke; ++k) {
        const auto& smp = r2[k - kb];
        r.region2_omega.push_back(w[k]);
        r.region2_alpha_deg.push_back(smp.alpha_deg);
        if (smp.alpha_deg == 0) {
            const int b = smp.blocking >= 0 ? smp.blocking : 0;
            auto& v = r.buses[static_cast<std::size_t>(b)].region2;
            if (v.pass) v = {false, w[k], false};
        }
    }

    r.pass = true;
    for (const auto& b : r.buses) r.pass = r.pass && b.region1.pass && b.region2.pass && b.region3.pass;
    return r;
}

double crossover_frequency(const RationalTF& g, const RationalTF& mu, const CertificationConfig& cfg) {
    const RationalTF loop = mul(mu, g);
    const ContinuousPhase ph(loop, cfg.omega_lo);
    auto f = [&](double w) { return ph(w) + kHalfPi; };
    const auto w = cfg.grid();
    double prev = f(w[0]);
    if (!(prev > 0.0)) return 0.0;
    for (std::size_t k = 1; k < w.size(); ++k) {
        const double cur = f(w[k]);
        if (cur <= 0.0) {
            double a = w[k - 1];
            double b = w[k];
            // A 1e-10 bracket keeps every sign decision far above round-off,
            // so positive rescaling of g returns the same bits.
            for (int it = 0; it < 200 && b - a > 1e-10 * b; ++it) {
                const double m = 0.5 * (a + b);
                if (f(m) > 0.0) {
                    a = m;
                } else {
                    b = m;
                }
            }
            return 0.5 * (a + b);
        }
        prev = cur;
    }
    return kInf;
}

Margin stability_margin(const RationalTF& g, const RationalTF& mu, const CertificationConfig& cfg) {
    Margin m;
    m.omega_c = crossover_frequency(g, mu, cfg);
    if (m.omega_c == 0.0) {
        m.M = 0.0;
    } else if (!std::isfinite(m.omega_c)) {
        m.M = kInf;
    } else {
        const Complex s(0.0, m.omega_c);
        m.M = m.omega_c / std::abs(mu(s) * g(s));
    }
    return m;
}

ResonanceVerdict resonance_check(const RationalTF& g, const RationalTF& mu, double rho, double omega0, double gamma,
                                 double omega_c) {
    ResonanceVerdict v;
    if (!(rho < 1.0)) {
        v.note = "rho >= 1: no resonant peak, check skipped";
        return v;
    }
    v.omega_r = resonant_frequency(rho, omega0);
    if (!(omega_c < v.omega_r)) {
        v.note = "crossover at or above resonance";
        return v;
    }
    v.applicable = true;
    const Complex s(0.0, v.omega_r);
    v.value = std::abs(mu(s) * g(s)) / v.omega_r;
    v.pass = gamma <= 0.0 || v.value * gamma < 1.0 - 1e-6;
    return v;
}

DroopDesign droop_design(const ConverterParams& p, double rho, double gamma) {
    if (!(rho > 0.0)) throw Error(ErrorKind::NonPositiveRho, "droop design requires rho > 0");
    if (!(rho < 1.0)) throw Error(ErrorKind::InvalidArgument, "droop design requires rho < 1");
    const double w0 = p.omega0;
    const double Tp = p.T_p;
    DroopDesign d;
    d.omega_c_closed = w0 * std::sqrt((1.0 + rho * rho) / (1.0 + 2.0 * rho * w0 * Tp));
    const double q = 1.0 - rho * rho;
    const double rad = gamma * gamma * p.m_p * p.m_p - 4.0 * rho * rho * q;
    d.Tp_min = rad > 0.0 ? std::sqrt(rad) / (2.0 * rho * q * w0) : 0.0;
    d.Tp_gate = rho / (w0 * q);
    d.bound_applies = Tp > d.Tp_gate;
    d.meets_bound = !d.bound_applies || Tp > d.Tp_min;
    const double wn = natural_frequency(rho, w0);
    const double wr = resonant_frequency(rho, w0);
    const double a = 1.0 + 2.0 * rho * w0 * Tp;
    const double b = Tp * Tp * wn * wn + 2.0 * rho * w0 * Tp + 1.0;
    d.Xi = a * a - std::sqrt(2.0 * wn * wn * b * b / (wr * wr * (Tp * Tp * wr * wr + 1.0)));
    return d;
}

SgMarginEstimate sg_margin_estimates(const MachineParams& m, double rho, double omega_c_no_dw) {
    if (!(rho > 0.0 && rho < 1.0)) throw Error(ErrorKind::InvalidArgument, "margin estimates need 0 < rho < 1");
    SgMarginEstimate e;
    const double w0 = m.omega0;
    const double p2 = 1.0 + rho * rho;
    const double q = std::sqrt(1.0 - rho * rho);
    const double wc = omega_c_no_dw;
    e.omega_c_no_dw = wc;
    e.M_no_dw = 2.0 * m.H * p2 * wc * wc / w0;
    e.xi_lo = 1.0 / (w0 * std::sqrt(p2));
    e.xi_hi = 2.0 * rho * w0 * q / (wc * wc * p2);
    if (m.T_G > 0.0 && m.k_g > 0.0) e.governor_ratio = wc / std::sqrt(m.k_g / (2.0 * m.H * m.T_G));
    e.line_ratio = wc / (w0 * std::sqrt(p2));
    if (!(m.xi_sm > 0.0)) throw Error(ErrorKind::DegenerateXi, "damper estimate needs xi_sm > 0");
    e.M_dw = 4.0 * m.H * rho * q / m.xi_sm;
    return e;
}

std::vector<RationalTF> normalized_dynamics(const ReducedNetwork& net, std::span<const Device> devices) {
    if (devices.size() != net.nodes.size()) throw Error(ErrorKind::InvalidArgument, "device list does not match nodes");
    std::vector<RationalTF> out;
    for (std::size_t n = 0; n < devices.size(); ++n) out.push_back(scale(bus_transfer(devices[n]), net.gamma(static_cast<Eigen::Index>(n))));
    return out;
}

RhoReport certify_at(const ReducedNetwork& net, std::span<const Device> devices, double rho, double omega0,
                     const CertificationConfig& cfg) {
    cfg.validate(natural_frequency(rho, omega0));
    RhoReport rep;
    rep.rho = rho;
    const int N = net.size();
    if (N == 1) {
        rep.trivial = true;
        PoleVerdict v;
        for (const Complex& p : poles(bus_transfer(devices[0]))) {
            if (!stable_root(p, cfg.pole_tol)) {
                v.pass = false;
                v.witness = p;
                break;
            }
        }
        rep.condition2_poles.push_back(v);
        rep.condition1.pass = v.pass;
        rep.condition1.synchronous_stable = v.pass;
        rep.condition1.delta = cfg.delta;
        rep.condition2.pass = true;
        rep.condition3.pass = true;
        MarginReport mr;
        mr.bus = net.nodes[0];
        mr.pass = true;
        mr.notes = "single node, no network coupling";
        rep.margins.push_back(mr);
        rep.pass = v.pass;
        return rep;
    }

    const RationalTF mu = line_mu({rho, omega0});

    rep.pass = true;
    for (int n = 0; n < N; ++n) {
        const auto& dev = devices[static_cast<std::size_t>(n)];
        const RationalTF g = bus_transfer(dev);
        const double gamma = net.gamma(n);
        const Margin m = stability_margin(g, mu, cfg);
        MarginReport mr;
        mr.bus = net.nodes[static_cast<std::size_t>(n)];
        mr.omega_c = m.omega_c;
        mr.margin = m.M;
        mr.gamma = gamma;
        mr.pass = gamma <= 0.0 || m.M > gamma * (1.0 + cfg.guard);
        mr.resonance = resonance_check(g, mu, rho, omega0, gamma, m.omega_c);
        if (m.omega_c == 0.0) mr.notes = "no positive-real low-frequency band";
        if (!std::isfinite(m.omega_c)) mr.notes = "no crossover below grid top";
        rep.margins.push_back(mr);
        rep.pass = rep.pass && mr.pass && mr.resonance.pass;
    }

    const auto g_norm = normalized_dynamics(net, devices);
    const RationalTF gbar = synchronous_dynamics(g_norm);
    rep.condition1 = check_condition1(gbar, g_norm, mu, net.lambda2, cfg);
    const double delta = rep.condition1.delta;
    rep.condition2_poles = check_condition2_poles(g_norm, delta, cfg);
    rep.condition2 = check_condition2_interop(g_norm, mu, delta, cfg);
    rep.condition3 = check_condition3(g_norm, mu, delta, cfg);

    rep.pass = rep.pass && rep.condition1.pass && rep.condition2.pass && rep.condition3.pass;
    for (const auto& v : rep.condition2_poles) rep.pass = rep.pass && v.pass;
    return rep;
}

CertificationReport certify(const Plant& plant, const CertificationConfig& cfg) {
    CertificationReport rep;
    rep.nodes = plant.network.nodes;
    for (Eigen::Index i = 0; i < plant.network.gamma.size(); ++i) rep.gamma.push_back(plant.network.gamma(i));
    rep.lambda2 = plant.network.lambda2;
    try {
        std::vector<double> rhos{plant.rho.min};
        if (plant.rho.max != plant.rho.min) rhos.push_back(plant.rho.max);
        rep.certified = true;
        for (double rho : rhos) {
            rep.runs.push_back(certify_at(plant.network, plant.devices, rho, plant.omega0, cfg));
            rep.certified = rep.certified && rep.runs.back().pass;
        }
    } catch (const Error& e) {
        rep.certified = false;
        rep.error = e.what();
    }
    return rep;
}

}  // namespace gridcert
