#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gridcert/halfplane.hpp"
#include "gridcert/rational_tf.hpp"

// Per-sample frequency kernels. Each has a serial reference and an OpenMP
// variant; both compute every sample with the same arithmetic, so their
// outputs are bitwise identical.
namespace gridcert::kernels {

enum class Exec { serial, parallel };

/// mu(j w) g_n(j w) for every bus n and grid frequency w, bus-major.
struct ResponseTable {
    int buses = 0;
    std::vector<double> omega;
    std::vector<Complex> value;      // value[n * K + k]
    std::vector<std::uint8_t> pole;  // 1 where evaluation hit a pole

    [[nodiscard]] std::size_t samples() const noexcept { return omega.size(); }
    [[nodiscard]] Complex at(int n, std::size_t k) const { return value[static_cast<std::size_t>(n) * omega.size() + k]; }
    [[nodiscard]] bool pole_at(int n, std::size_t k) const { return pole[static_cast<std::size_t>(n) * omega.size() + k] != 0; }
};

ResponseTable sweep_response_serial(std::span<const RationalTF> g, const RationalTF& mu, std::span<const double> omega);
ResponseTable sweep_response_omp(std::span<const RationalTF> g, const RationalTF& mu, std::span<const double> omega);
ResponseTable sweep_response(std::span<const RationalTF> g, const RationalTF& mu, std::span<const double> omega, Exec exec);

/// Half-plane feasibility of {1 + mu(s) g_n(s) / s} at each sample s.
/// Samples with Im s < 0 use the mirrored rotation range.
std::vector<HalfplaneResult> interop_scan_serial(std::span<const RationalTF> g, const RationalTF& mu,
                                                 std::span<const Complex> s);
std::vector<HalfplaneResult> interop_scan_omp(std::span<const RationalTF> g, const RationalTF& mu,
                                              std::span<const Complex> s);
std::vector<HalfplaneResult> interop_scan(std::span<const RationalTF> g, const RationalTF& mu,
                                          std::span<const Complex> s, Exec exec);

struct Region2Sample {
    int alpha_deg = 0;   // largest common alpha on the 1-degree scan; 0 if none
    int blocking = -1;   // bus that failed at alpha = 1 degree when alpha_deg == 0
};

/// Region-2 alpha scan on columns [k_begin, k_end) of a response table.
/// `phase_deg` is the continuous phase of mu g_n in degrees, laid out like
/// table.value. Strict inequalities use the relative guard band `guard`.
std::vector<Region2Sample> region2_scan_serial(const ResponseTable& table, std::span<const double> phase_deg,
                                               std::size_t k_begin, std::size_t k_end, double guard);
std::vector<Region2Sample> region2_scan_omp(const ResponseTable& table, std::span<const double> phase_deg,
                                            std::size_t k_begin, std::size_t k_end, double guard);
std::vector<Region2Sample> region2_scan(const ResponseTable& table, std::span<const double> phase_deg,
                                        std::size_t k_begin, std::size_t k_end, double guard, Exec exec);

/// True if one bus passes the Region-2 test for the given alpha.
[[nodiscard]] bool region2_bus_ok(double gain, double phase_deg, int alpha_deg, double guard) noexcept;

}  // namespace gridcert::kernels
