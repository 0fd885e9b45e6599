#pragma once

#include <span>

#include "gridcert/polynomial.hpp"

namespace gridcert {

enum class HalfplaneStatus { feasible, infeasible, zero_point };

/// Set of rotations phi with Re(e^{j phi} z_n) > 0 for every point.
/// For upper-half-plane samples phi ranges over [0, pi/2); `mirrored`
/// selects (-pi/2, 0] for conjugate samples.
struct HalfplaneResult {
    HalfplaneStatus status = HalfplaneStatus::infeasible;
    double lo = 0.0;  // open interval (lo, hi), radians, or [0, hi) when lo_closed
    double hi = 0.0;
    bool lo_closed = false;
    double witness = 0.0;
    int blocking = -1;  // index of the point that emptied the intersection

    [[nodiscard]] bool feasible() const noexcept { return status == HalfplaneStatus::feasible; }
    /// Width of the feasible set, 0 if infeasible.
    [[nodiscard]] double width() const noexcept { return feasible() ? hi - lo : 0.0; }
};

[[nodiscard]] HalfplaneResult halfplane_feasible(std::span<const Complex> points, bool mirrored = false);

}  // namespace gridcert
