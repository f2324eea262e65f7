// Timing harness: serial reference vs OpenMP estimator, plus the two block
// synthesis paths. Not part of the test suite.

#include <omp.h>

#include <chrono>
#include <cstdio>

#include "wavesim/ase.hpp"
#include "wavesim/synthesis.hpp"

using namespace wavesim;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

LinkScenario bench_scenario() {
    LinkScenario sc;
    sc.name = "bench";
    FrameConfig& f = sc.frame;
    f.scheme = Scheme::FBMC_QAM;
    f.n_subcarriers = 64;
    f.delta_t = 1.0;
    f.delta_f = 1.0;
    f.samples_per_symbol = 64;
    f.grid_divisor = 5;
    f.pulse_len = 320;
    f.half_packet = 8;
    f.constellation_order = 16;
    f.symbol_period = 64 / 1.92e6;
    sc.pulse_kind = PulseKind::PHYDYAS;
    sc.profile = etu_profile(0.0, 1.0);
    sc.equalizer = EqualizerKind::MMSE;
    sc.evm = 0.04;
    return sc;
}

} // namespace

int main() {
    const std::vector<double> snr = {0.0, 10.0, 20.0};
    LinkScenario sc = bench_scenario();

    std::printf("== Monte-Carlo estimator: serial vs OpenMP (%d threads) ==\n",
                omp_get_max_threads());
    auto t0 = std::chrono::steady_clock::now();
    AseCurve serial = estimate_ase(sc, snr, 8, 1000, 7, 1);
    double ts = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    AseCurve parallel = estimate_ase(sc, snr, 8, 1000, 7, 0);
    double tp = seconds_since(t0);

    double max_diff = 0.0;
    for (std::size_t i = 0; i < serial.points.size(); ++i)
        max_diff = std::max(max_diff, std::abs(serial.points[i].ase - parallel.points[i].ase));
    std::printf("serial   %.3fs\nparallel %.3fs  speedup %.2fx  max |diff| %.3e\n", ts, tp,
                ts / tp, max_diff);

    std::printf("\n== block synthesis: windowed IDFT vs filter bank ==\n");
    FrameConfig f = sc.frame;
    PrototypePulse pulse = make_pulse(PulseKind::PHYDYAS, f.pulse_len, f.grid_divisor, 0.0);
    LinkPlan plan(f, pulse);
    SymbolGrid grid = map_symbols({}, f, 3);
    const int reps = 2000;

    t0 = std::chrono::steady_clock::now();
    cd sink(0, 0);
    for (int i = 0; i < reps; ++i) {
        auto s = synthesize_block(grid.d_rot.col(i % f.slots()), pulse, f, &plan.window_fft());
        sink += s[s.size() / 2];
    }
    double t_fft = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) {
        auto s = synthesize_block_filter_bank(grid.d_rot.col(i % f.slots()), pulse, f);
        sink += s[s.size() / 2];
    }
    double t_fb = seconds_since(t0);
    std::printf("windowed IDFT %.1f us/block, filter bank %.1f us/block (x%.1f) [checksum %g]\n",
                1e6 * t_fft / reps, 1e6 * t_fb / reps, t_fb / t_fft, std::abs(sink));
    return 0;
}
