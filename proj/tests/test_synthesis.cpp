#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/reference.hpp"
#include "wavesim/rng.hpp"
#include "wavesim/synthesis.hpp"

using namespace wavesim;

namespace {

FrameConfig ofdm_config(int n = 16, int cp = 0, int g = 2) {
    FrameConfig f;
    f.scheme = Scheme::OFDM;
    f.n_subcarriers = n;
    f.pulse_len = n;
    f.cp_len = cp;
    f.samples_per_symbol = n + cp;
    f.delta_t = double(n + cp) / n;
    f.delta_f = 1.0;
    f.grid_divisor = 1;
    f.half_packet = g;
    f.constellation_order = 4;
    f.symbol_period = (n + cp) / 1.92e6;
    return f;
}

FrameConfig fbmc_config(int n = 16, int ns = 16, int m = 4, int g = 2) {
    FrameConfig f;
    f.scheme = Scheme::FBMC_QAM;
    f.n_subcarriers = n;
    f.delta_t = 1.0;
    f.delta_f = 1.0;
    f.samples_per_symbol = ns;
    f.grid_divisor = m;
    f.pulse_len = m * ns;
    f.half_packet = g;
    f.constellation_order = 4;
    f.symbol_period = ns / 1.92e6;
    return f;
}

Eigen::VectorXcd random_column(int n, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.cnormal();
    return v;
}

} // namespace

TEST_CASE("single-carrier degenerate case: block equals the pulse") {
    FrameConfig f;
    f.scheme = Scheme::SCM;
    f.n_subcarriers = 1;
    f.delta_t = 1.0;
    f.delta_f = 1.0;
    f.samples_per_symbol = 8;
    f.grid_divisor = 4;
    f.pulse_len = 32;
    f.half_packet = 1;
    f.constellation_order = 4;
    f.symbol_period = 8e-6;
    auto p = make_pulse(PulseKind::RRC, 32, 4, 0.25);
    Eigen::VectorXcd d(1);
    d[0] = 1.0;
    auto s = synthesize_block(d, p, f);
    CHECK((s - p.samples).norm() < 1e-14);
}

TEST_CASE("ofdm block: dft of the samples recovers the symbols") {
    FrameConfig f = ofdm_config(16);
    auto p = make_pulse(PulseKind::RECT, 16, 1);
    Eigen::VectorXcd d = random_column(16, 1);
    auto s = synthesize_block(d, p, f, nullptr);
    Eigen::VectorXcd spec = reference::dft(s);
    // rect samples are 1/sqrt(Q); the same known 1/sqrt(N) scalar on each bin
    for (int k = 0; k < 16; ++k)
        CHECK(std::abs(spec[k] - d[k] / std::sqrt(16.0)) < 1e-12);
}

TEST_CASE("windowed-idft path equals filter-bank path") {
    SUBCASE("phydyas") {
        FrameConfig f = fbmc_config(16, 16, 4);
        auto p = make_pulse(PulseKind::PHYDYAS, 64, 4);
        Eigen::VectorXcd d = random_column(16, 2);
        auto a = synthesize_block(d, p, f);
        auto b = synthesize_block_filter_bank(d, p, f);
        CHECK((a - b).norm() / b.norm() < 1e-10);
    }
    SUBCASE("oqam with center origin") {
        FrameConfig f = fbmc_config(16, 8, 8);
        f.scheme = Scheme::FBMC_OQAM;
        f.delta_t = 0.5;
        auto p = make_pulse(PulseKind::PHYDYAS, 64, 8);
        Eigen::VectorXcd d = random_column(16, 3);
        auto a = synthesize_block(d, p, f);
        auto b = synthesize_block_filter_bank(d, p, f);
        CHECK((a - b).norm() / b.norm() < 1e-10);
    }
}

TEST_CASE("bad inputs are rejected") {
    FrameConfig f = fbmc_config();
    auto p = make_pulse(PulseKind::PHYDYAS, 64, 4);
    CHECK_THROWS_AS(synthesize_block(random_column(15, 0), p, f), std::invalid_argument);
    PrototypePulse bad = p;
    bad.samples *= 2.0; // non-unit energy
    CHECK_THROWS_AS(synthesize_block(random_column(16, 0), bad, f), std::invalid_argument);
}

TEST_CASE("parseval on the ofdm rect block") {
    FrameConfig f = ofdm_config(16);
    auto p = make_pulse(PulseKind::RECT, 16, 1);
    Eigen::VectorXcd d = random_column(16, 4);
    auto s = synthesize_block(d, p, f);
    CHECK(s.squaredNorm() == doctest::Approx(d.squaredNorm() / 16.0).epsilon(1e-12));
}

TEST_CASE("textbook idft-ofdm samples exactly") {
    FrameConfig f = ofdm_config(8, 0, 1);
    auto p = make_pulse(PulseKind::RECT, 8, 1);
    SymbolGrid g = map_symbols({}, f, 9);
    LinkPlan plan(f, p);
    auto x = synthesize_frame(g, plan);
    for (int c = 0; c < f.slots(); ++c) {
        for (int n = 0; n < 8; ++n) {
            cd acc(0, 0);
            for (int k = 0; k < 8; ++k)
                acc += g.d_rot(k, c) * std::polar(1.0, 2.0 * kPi * k * n / 8.0);
            acc *= plan.frame_scale() / 8.0; // 1/sqrt(N) and the 1/sqrt(Q) rect level
            CHECK(std::abs(x[std::size_t(8 * c + n)] - acc) < 1e-12);
        }
    }
}

TEST_CASE("ofdm frame carries a classical cyclic prefix") {
    FrameConfig f = ofdm_config(16, 4, 2);
    auto p = make_pulse(PulseKind::RECT, 16, 1);
    SymbolGrid g = map_symbols({}, f, 10);
    LinkPlan plan(f, p);
    auto x = synthesize_frame(g, plan);
    REQUIRE(long(x.size()) == long(f.slots()) * 20);
    for (int c = 0; c < f.slots(); ++c) {
        const std::size_t base = std::size_t(c) * 20;
        for (int m = 0; m < 4; ++m)
            CHECK(std::abs(x[base + m] - x[base + 16 + m]) < 1e-14);
    }
}

TEST_CASE("frame of one symbol is the scaled pulse") {
    FrameConfig f;
    f.scheme = Scheme::SCM;
    f.n_subcarriers = 1;
    f.delta_t = 1.0;
    f.delta_f = 1.0;
    f.samples_per_symbol = 8;
    f.grid_divisor = 2;
    f.pulse_len = 16;
    f.half_packet = 0;
    f.constellation_order = 4;
    f.symbol_period = 8e-6;
    auto p = make_pulse(PulseKind::RRC, 16, 2, 0.3);
    LinkPlan plan(f, p);
    SymbolGrid g;
    g.a.setOnes(1, 1);
    g.d.setOnes(1, 1);
    refresh_transmit_symbols(g, f);
    auto x = synthesize_frame(g, plan);
    REQUIRE(long(x.size()) == 16);
    for (int n = 0; n < 16; ++n)
        CHECK(std::abs(x[std::size_t(n)] - plan.frame_scale() * p.samples[n]) < 1e-13);
}

TEST_CASE("scm blocks with pulse no longer than the spacing concatenate") {
    FrameConfig f;
    f.scheme = Scheme::SCM;
    f.n_subcarriers = 1;
    f.delta_t = 1.0;
    f.delta_f = 1.0;
    f.samples_per_symbol = 4;
    f.grid_divisor = 1;
    f.pulse_len = 4;
    f.half_packet = 1;
    f.constellation_order = 4;
    f.symbol_period = 4e-6;
    auto p = make_pulse(PulseKind::RECT, 4, 1);
    LinkPlan plan(f, p);
    SymbolGrid g = map_symbols({}, f, 3);
    auto x = synthesize_frame(g, plan);
    for (int c = 0; c < 3; ++c)
        for (int n = 0; n < 4; ++n)
            CHECK(std::abs(x[std::size_t(4 * c + n)] -
                           plan.frame_scale() * g.d_rot(0, c) * p.samples[n]) < 1e-13);
}

TEST_CASE("linearity of frame synthesis") {
    FrameConfig f = fbmc_config(8, 8, 4, 2);
    auto p = make_pulse(PulseKind::PHYDYAS, 32, 4);
    LinkPlan plan(f, p);
    SymbolGrid g1 = map_symbols({}, f, 21);
    SymbolGrid g2 = map_symbols({}, f, 22);
    SymbolGrid sum = g1;
    sum.a += g2.a;
    sum.d += g2.d;
    refresh_transmit_symbols(sum, f);
    auto x1 = synthesize_frame(g1, plan);
    auto x2 = synthesize_frame(g2, plan);
    auto xs = synthesize_frame(sum, plan);
    double err = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        err += std::norm(xs[i] - x1[i] - x2[i]);
        ref += std::norm(xs[i]);
    }
    CHECK(std::sqrt(err / ref) < 1e-12);
}

TEST_CASE("ofdm frame power approaches the configured power") {
    FrameConfig f = ofdm_config(32, 8, 160); // 321 slots x 32 subcarriers ~ 1e4 symbols
    f.power = 2.5;
    auto p = make_pulse(PulseKind::RECT, 32, 1);
    LinkPlan plan(f, p);
    SymbolGrid g = map_symbols({}, f, 77);
    auto x = synthesize_frame(g, plan);
    double acc = 0.0;
    for (const auto& v : x) acc += std::norm(v);
    CHECK(acc / double(x.size()) == doctest::Approx(2.5).epsilon(0.05));
}

TEST_CASE("frame length formula and overflow guard") {
    FrameConfig f = fbmc_config(8, 8, 4, 3);
    auto p = make_pulse(PulseKind::PHYDYAS, 32, 4);
    LinkPlan plan(f, p);
    SymbolGrid g = map_symbols({}, f, 2);
    auto x = synthesize_frame(g, plan);
    CHECK(long(x.size()) == long(f.slots()) * 8 + 32 - 8);
    CHECK_THROWS_AS(synthesize_frame(g, plan, 16), std::length_error);
}
