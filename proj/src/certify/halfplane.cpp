#include "gridcert/halfplane.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gridcert {

namespace {

HalfplaneResult upper(std::span<const Complex> points, bool conj) {
    constexpr double half_pi = std::numbers::pi / 2.0;
    HalfplaneResult r;
    double lo = 0.0;
    bool lo_closed = true;
    double hi = half_pi;
    for (std::size_t i = 0; i < points.size(); ++i) {
        Complex z = conj ? std::conj(points[i]) : points[i];
        if (std::abs(z) < 1e-12) {
            r.status = HalfplaneStatus::zero_point;
            r.blocking = static_cast<int>(i);
            return r;
        }
        const double a = std::arg(z);
        const double plo = -half_pi - a;
        const double phi = half_pi - a;
        if (plo >= lo) {
            lo = plo;
            lo_closed = false;
        }
        hi = std::min(hi, phi);
        if (!(hi > lo) || (!lo_closed && hi <= lo)) {
            r.status = HalfplaneStatus::infeasible;
            r.blocking = static_cast<int>(i);
            return r;
        }
    }
    r.status = HalfplaneStatus::feasible;
    r.lo = lo;
    r.hi = hi;
    r.lo_closed = lo_closed;
    r.witness = 0.5 * (lo + hi);
    if (lo_closed && lo == 0.0 && points.size() > 0) {
        // phi = 0 is admissible whenever every point already has Re z > 0
        bool all_right = true;
        for (auto z : points) all_right = all_right && z.real() > 0.0;
        if (all_right) r.witness = 0.0;
    }
    return r;
}

}  // namespace

HalfplaneResult halfplane_feasible(std::span<const Complex> points, bool mirrored) {
    HalfplaneResult r = upper(points, mirrored);
    if (mirrored && r.feasible()) {
        const double lo = -r.hi;
        const double hi = -r.lo;
        r.lo = lo;
        r.hi = hi;
        r.witness = -r.witness;
    }
    return r;
}

}  // namespace gridcert
