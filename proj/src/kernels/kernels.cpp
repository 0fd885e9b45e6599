#include "gridcert/kernels.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "gridcert/error.hpp"

namespace gridcert::kernels {

namespace {

struct Point {
    Complex value;
    bool pole;
};

Point response_point(const RationalTF& g, const RationalTF& mu, double w) {
    const Complex s(0.0, w);
    try {
        return {mu(s) * g(s), false};
    } catch (const Error&) {
        const double inf = std::numeric_limits<double>::infinity();
        return {Complex(inf, inf), true};
    }
}

ResponseTable make_table(std::span<const RationalTF> g, std::span<const double> omega) {
    ResponseTable t;
    t.buses = static_cast<int>(g.size());
    t.omega.assign(omega.begin(), omega.end());
    t.value.resize(g.size() * omega.size());
    t.pole.assign(g.size() * omega.size(), 0);
    return t;
}

void fill_column(ResponseTable& t, std::span<const RationalTF> g, const RationalTF& mu, std::size_t k) {
    const std::size_t K = t.omega.size();
    for (std::size_t n = 0; n < g.size(); ++n) {
        const Point p = response_point(g[n], mu, t.omega[k]);
        t.value[n * K + k] = p.value;
        t.pole[n * K + k] = p.pole ? 1 : 0;
    }
}

HalfplaneResult interop_point(std::span<const RationalTF> g, const RationalTF& mu, Complex s) {
    std::vector<Complex> z(g.size());
    try {
        const Complex m = mu(s) / s;
        for (std::size_t n = 0; n < g.size(); ++n) z[n] = 1.0 + m * g[n](s);
    } catch (const Error&) {
        HalfplaneResult r;
        r.status = HalfplaneStatus::infeasible;
        return r;
    }
    return halfplane_feasible(z, s.imag() < 0.0);
}

Region2Sample region2_point(const ResponseTable& t, std::span<const double> phase_deg, std::size_t k, double guard) {
    const std::size_t K = t.omega.size();
    const double w = t.omega[k];
    Region2Sample out;
    for (int alpha = 90; alpha >= 1; --alpha) {
        bool ok = true;
        for (int n = 0; n < t.buses && ok; ++n) {
            const std::size_t idx = static_cast<std::size_t>(n) * K + k;
            if (t.pole[idx]) {
                ok = false;
                if (alpha == 1) out.blocking = n;
                break;
            }
            const double gain = std::abs(t.value[idx]) / w;
            if (!region2_bus_ok(gain, phase_deg[idx], alpha, guard)) {
                ok = false;
                if (alpha == 1) out.blocking = n;
            }
        }
        if (ok) {
            out.alpha_deg = alpha;
            out.blocking = -1;
            return out;
        }
    }
    return out;
}

}  // namespace

bool region2_bus_ok(double gain, double phase_deg, int alpha_deg, double guard) noexcept {
    const double a = static_cast<double>(alpha_deg);
    const double window = 90.0 - a;
    if (std::abs(phase_deg) < window * (1.0 - guard) && window > 0.0) return true;
    const double deg = std::numbers::pi / 180.0;
    const double c = std::abs(std::cos((phase_deg - a) * deg));
    const double bound = std::sin(a * deg);
    return gain * c < bound * (1.0 - guard);
}

ResponseTable sweep_response_serial(std::span<const RationalTF> g, const RationalTF& mu, std::span<const double> omega) {
    ResponseTable t = make_table(g, omega);
    for (std::size_t k = 0; k < omega.size(); ++k) fill_column(t, g, mu, k);
    return t;
}

ResponseTable sweep_response_omp(std::span<const RationalTF> g, const RationalTF& mu, std::span<const double> omega) {
    ResponseTable t = make_table(g, omega);
    const auto K = static_cast<long>(omega.size());
#pragma omp parallel for schedule(static)
    for (long k = 0; k < K; ++k) fill_column(t, g, mu, static_cast<std::size_t>(k));
    return t;
}

ResponseTable sweep_response(std::span<const RationalTF> g, const RationalTF& mu, std::span<const double> omega, Exec exec) {
    return exec == Exec::parallel ? sweep_response_omp(g, mu, omega) : sweep_response_serial(g, mu, omega);
}

std::vector<HalfplaneResult> interop_scan_serial(std::span<const RationalTF> g, const RationalTF& mu,
                                                 std::span<const Complex> s) {
    std::vector<HalfplaneResult> out(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) out[k] = interop_point(g, mu, s[k]);
    return out;
}

std::vector<HalfplaneResult> interop_scan_omp(std::span<const RationalTF> g, const RationalTF& mu,
                                              std::span<const Complex> s) {
    std::vector<HalfplaneResult> out(s.size());
    const auto K = static_cast<long>(s.size());
#pragma omp parallel for schedule(static)
    for (long k = 0; k < K; ++k) out[static_cast<std::size_t>(k)] = interop_point(g, mu, s[static_cast<std::size_t>(k)]);
    return out;
}

std::vector<HalfplaneResult> interop_scan(std::span<const RationalTF> g, const RationalTF& mu,
                                          std::span<const Complex> s, Exec exec) {
    return exec == Exec::parallel ? interop_scan_omp(g, mu, s) : interop_scan_serial(g, mu, s);
}

std::vector<Region2Sample> region2_scan_serial(const ResponseTable& table, std::span<const double> phase_deg,
                                               std::size_t k_begin, std::size_t k_end, double guard) {
    std::vector<Region2Sample> out(k_end > k_begin ? k_end - k_begin : 0);
    for (std::size_t k = k_begin; k < k_end; ++k) out[k - k_begin] = region2_point(table, phase_deg, k, guard);
    return out;
}

std::vector<Region2Sample> region2_scan_omp(const ResponseTable& table, std::span<const double> phase_deg,
                                            std::size_t k_begin, std::size_t k_end, double guard) {
    std::vector<Region2Sample> out(k_end > k_begin ? k_end - k_begin : 0);
    const auto b = static_cast<long>(k_begin);
    const auto e = static_cast<long>(k_end);
#pragma omp parallel for schedule(static)
    for (long k = b; k < e; ++k) {
        out[static_cast<std::size_t>(k - b)] = region2_point(table, phase_deg, static_cast<std::size_t>(k), guard);
    }
    return out;
}

std::vector<Region2Sample> region2_scan(const ResponseTable& table, std::span<const double> phase_deg,
                                        std::size_t k_begin, std::size_t k_end, double guard, Exec exec) {
    return exec == Exec::parallel ? region2_scan_omp(table, phase_deg, k_begin, k_end, guard)
                                  : region2_scan_serial(table, phase_deg, k_begin, k_end, guard);
}

}  // namespace gridcert::kernels
