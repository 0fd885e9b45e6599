// Serial reference vs OpenMP kernels on a 10-bus mixed device set.
#include <benchmark/benchmark.h>

#include <map>
#include <numbers>
#include <random>

#include "gridcert/certify.hpp"
#include "gridcert/kernels.hpp"

using namespace gridcert;

namespace {

struct Workload {
    std::vector<RationalTF> g;
    RationalTF mu;
    std::vector<double> omega;
    std::vector<Complex> s;
    kernels::ResponseTable table;
    std::vector<double> phase;
};

const Workload& workload(int points) {
    static std::map<int, Workload> cache;
    auto it = cache.find(points);
    if (it != cache.end()) return it->second;
    Workload w;
    const double w0 = 2.0 * std::numbers::pi * 60.0;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int n = 0; n < 10; ++n) {
        Device d;
        switch (n % 4) {
            case 0: d = MachineParams{2.0 + 6.0 * U(rng), 0.5 + 4.0 * U(rng), 20.0, 0.0131, w0, false}; break;
            case 1: d = MachineParams{1.0 + 4.0 * U(rng), 0.0, 0.0, 0.0131, w0, true}; break;
            case 2: d = ConverterParams{0.05, 0.5 + 3.0 * U(rng), 0.0, w0}; break;
            default: d = ConverterParams{0.05, 0.5 + 3.0 * U(rng), 0.005, w0}; break;
        }
        w.g.push_back(scale(bus_transfer(d), 5.0 + 20.0 * U(rng)));
    }
    w.mu = line_mu({0.1, w0});
    CertificationConfig cfg;
    cfg.grid_points = points;
    w.omega = cfg.grid();
    for (double x : w.omega) w.s.emplace_back(0.0, x);
    w.table = kernels::sweep_response_serial(w.g, w.mu, w.omega);
    const std::size_t K = w.omega.size();
    w.phase.resize(w.g.size() * K);
    for (std::size_t n = 0; n < w.g.size(); ++n) {
        const ContinuousPhase ph(mul(w.mu, w.g[n]), w.omega.front());
        for (std::size_t k = 0; k < K; ++k) w.phase[n * K + k] = ph(w.omega[k]) * 180.0 / std::numbers::pi;
    }
    return cache.emplace(points, std::move(w)).first->second;
}

void BM_sweep_serial(benchmark::State& st) {
    const auto& w = workload(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(kernels::sweep_response_serial(w.g, w.mu, w.omega));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}
void BM_sweep_omp(benchmark::State& st) {
    const auto& w = workload(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(kernels::sweep_response_omp(w.g, w.mu, w.omega));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}
void BM_interop_serial(benchmark::State& st) {
    const auto& w = workload(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(kernels::interop_scan_serial(w.g, w.mu, w.s));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}
void BM_interop_omp(benchmark::State& st) {
    const auto& w = workload(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(kernels::interop_scan_omp(w.g, w.mu, w.s));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}
void BM_region2_serial(benchmark::State& st) {
    const auto& w = workload(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(kernels::region2_scan_serial(w.table, w.phase, 0, w.omega.size(), 1e-6));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}
void BM_region2_omp(benchmark::State& st) {
    const auto& w = workload(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(kernels::region2_scan_omp(w.table, w.phase, 0, w.omega.size(), 1e-6));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

}  // namespace

BENCHMARK(BM_sweep_serial)->Arg(4000)->Arg(40000);
BENCHMARK(BM_sweep_omp)->Arg(4000)->Arg(40000);
BENCHMARK(BM_interop_serial)->Arg(4000)->Arg(40000);
BENCHMARK(BM_interop_omp)->Arg(4000)->Arg(40000);
BENCHMARK(BM_region2_serial)->Arg(4000)->Arg(40000);
BENCHMARK(BM_region2_omp)->Arg(4000)->Arg(40000);

BENCHMARK_MAIN();
