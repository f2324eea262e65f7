#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support/reference.hpp"
#include "wavesim/channel.hpp"
#include "wavesim/rng.hpp"

using namespace wavesim;

namespace {

// cylindrical Bessel J0 via the standard library
double bessel_j0(double x) { return std::cyl_bessel_j(0.0, x); }

ChannelProfile single_tap(double doppler = 0.0, double tc = 1e-6) {
    ChannelProfile p;
    p.tap_delays = {0.0};
    p.tap_powers = {1.0};
    p.doppler_hz = doppler;
    p.sample_period = tc;
    return p;
}

} // namespace

TEST_CASE("etu profile: normalized, nine taps, increasing delays") {
    auto p = etu_profile(70.0, 1e-6);
    REQUIRE(p.taps() == 9);
    double total = 0.0;
    for (double v : p.tap_powers) total += v;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.tap_delays.front() == 0.0);
    CHECK(p.tap_delays.back() == doctest::Approx(5000e-9));
    for (std::size_t k = 1; k < 9; ++k) CHECK(p.tap_delays[k] > p.tap_delays[k - 1]);
}

TEST_CASE("zero doppler gives constant taps") {
    auto real = realize_channel(etu_profile(0.0, 0.52e-6), 64, 5);
    CHECK(real.time_invariant);
    auto real2 = realize_channel(etu_profile(70.0, 0.52e-6), 64, 5);
    CHECK(!real2.time_invariant);
    // nonzero doppler taps actually move
    double move = 0.0;
    for (int i = 0; i < real2.taps.rows(); ++i)
        move += std::abs(real2.taps(i, 63) - real2.taps(i, 0));
    CHECK(move > 1e-6);
}

TEST_CASE("single tap mean power over many realizations") {
    double acc = 0.0;
    const int reps = 10000;
    for (int r = 0; r < reps; ++r) {
        auto real = realize_channel(single_tap(), 1, derive_seed(11, r));
        acc += std::norm(real.taps(0, 0));
    }
    CHECK(acc / reps == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("autocorrelation follows the classical doppler model") {
    // E[c(t+tau) c*(t)] -> J0(2 pi fd tau), checked to the first zero
    const double fd = 70.0;
    const double tc = 1e-4; // coarse grid so the first zero sits near lag 55
    const int lags = 60;
    const int reps = 3000;
    std::vector<cd> corr(std::size_t(lags), cd(0, 0));
    for (int r = 0; r < reps; ++r) {
        auto real = realize_channel(single_tap(fd, tc), lags + 1, derive_seed(23, r));
        for (int m = 0; m < lags; ++m)
            corr[std::size_t(m)] += real.taps(0, m) * std::conj(real.taps(0, 0));
    }
    double rms = 0.0;
    for (int m = 0; m < lags; ++m) {
        double want = bessel_j0(2.0 * kPi * fd * m * tc);
        double got = corr[std::size_t(m)].real() / double(reps);
        rms += (want - got) * (want - got);
    }
    rms = std::sqrt(rms / lags);
    CHECK(rms < 0.03);
}

TEST_CASE("channel matrix: identity channel") {
    auto real = realize_channel(single_tap(), 8, 3);
    // force the tap to exactly one for the structural check
    real.taps(0, 0) = cd(1.0, 0.0);
    auto h = channel_matrix(real, 0, 6, 4);
    CHECK((h - Eigen::MatrixXcd::Identity(6, 6)).norm() < 1e-15);
}

TEST_CASE("channel matrix: time-invariant two taps is toeplitz") {
    ChannelProfile p;
    p.tap_delays = {0.0, 3e-6};
    p.tap_powers = {0.7, 0.3};
    p.doppler_hz = 0.0;
    p.sample_period = 1e-6;
    auto real = realize_channel(p, 16, 9);
    auto h = channel_matrix(real, 1, 8, 4);
    cd c0 = real.taps(0, 0), c1 = real.taps(1, 0);
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
            cd want(0, 0);
            if (i == j) want = c0;
            if (i - j == 3) want = c1;
            CHECK(std::abs(h(i, j) - want) < 1e-15);
        }
    }
}

TEST_CASE("time-varying channel matrix matches the reference convolution") {
    ChannelProfile p;
    p.tap_delays = {0.0, 1.5e-6, 4e-6};
    p.tap_powers = {0.5, 0.3, 0.2};
    p.doppler_hz = 900.0;
    p.sample_period = 1e-6;
    const int q = 32;
    auto real = realize_channel(p, 4 * q, 31);

    Rng rng(4);
    std::vector<cd> x(std::size_t(q), cd(0, 0));
    for (auto& v : x) v = rng.cnormal();

    const int block = 2, ns = 16;
    auto h = channel_matrix(real, block, q, ns);
    Eigen::VectorXcd xv(q);
    for (int i = 0; i < q; ++i) xv[i] = x[std::size_t(i)];
    Eigen::VectorXcd y_mat = h * xv;

    // reference: x placed at stream position block*ns, full convolution
    std::vector<cd> stream(std::size_t(block * ns + q), cd(0, 0));
    for (int i = 0; i < q; ++i) stream[std::size_t(block * ns + i)] = x[std::size_t(i)];
    auto y_ref = reference::convolve(real, stream);

    for (int i = 0; i < q; ++i)
        CHECK(std::abs(y_mat[i] - y_ref[std::size_t(block * ns + i)]) < 1e-12);
}

TEST_CASE("banded structure: entries beyond the span are exactly zero") {
    auto p = etu_profile(0.0, 0.52e-6);
    auto real = realize_channel(p, 64, 2);
    auto h = channel_matrix(real, 0, 32, 16);
    for (int i = 0; i < 32; ++i)
        for (int j = 0; j < 32; ++j)
            if (j > i || i - j >= real.span) CHECK(h(i, j) == cd(0, 0));
}

TEST_CASE("apply_channel equals the reference double loop") {
    ChannelProfile p;
    p.tap_delays = {0.0, 2e-6, 7e-6};
    p.tap_powers = {0.6, 0.3, 0.1};
    p.doppler_hz = 2000.0;
    p.sample_period = 1e-6;
    auto real = realize_channel(p, 300, 8);
    Rng rng(6);
    std::vector<cd> x(256);
    for (auto& v : x) v = rng.cnormal();
    auto ya = apply_channel(real, x);
    auto yb = reference::convolve(real, x);
    REQUIRE(ya.size() == yb.size());
    double err = 0.0;
    for (std::size_t i = 0; i < ya.size(); ++i) err += std::norm(ya[i] - yb[i]);
    CHECK(std::sqrt(err) < 1e-12);
}

TEST_CASE("energy conservation in distribution") {
    auto p = etu_profile(0.0, 0.52e-6);
    const int reps = 400;
    double acc = 0.0;
    for (int r = 0; r < reps; ++r) {
        auto real = realize_channel(p, 8, derive_seed(77, r));
        Rng rng(derive_seed(78, r));
        std::vector<cd> x(128);
        for (auto& v : x) v = rng.cnormal();
        auto y = apply_channel(real, x);
        double pin = 0.0, pout = 0.0;
        for (const auto& v : x) pin += std::norm(v);
        for (const auto& v : y) pout += std::norm(v);
        acc += pout / pin;
    }
    CHECK(acc / reps == doctest::Approx(1.0).epsilon(3.0 / std::sqrt(double(reps))));
}

TEST_CASE("determinism: same seed, same realization") {
    auto p = etu_profile(70.0, 0.52e-6);
    auto a = realize_channel(p, 50, 1234);
    auto b = realize_channel(p, 50, 1234);
    CHECK((a.taps - b.taps).norm() == 0.0);
    auto c = realize_channel(p, 50, 1235);
    CHECK((a.taps - c.taps).norm() > 0.0);
}

TEST_CASE("mimo grid: independent static draws") {
    auto p = etu_profile(120.0, 0.52e-6); // doppler forced off internally
    auto grid = make_mimo_channels(4, 16, p, 99);
    REQUIRE(grid.size() == 4);
    REQUIRE(grid[0].size() == 16);
    for (const auto& row : grid)
        for (const auto& chan : row) CHECK(chan.time_invariant);

    SUBCASE("u=1, n=1 equals realize_channel with the derived seed") {
        auto single = make_mimo_channels(1, 1, p, 42);
        ChannelProfile q = p;
        q.doppler_hz = 0.0;
        auto direct = realize_channel(q, 1, derive_seed(42, 0x6d696dULL, 0, 0));
        CHECK((single[0][0].taps - direct.taps).norm() == 0.0);
    }

    SUBCASE("pairwise link correlation is small across realizations") {
        // fixed link pairs, empirical correlation over many grid draws
        const int reps = 3000;
        const int links = 6;
        std::vector<std::vector<cd>> first(links);
        for (int r = 0; r < reps; ++r) {
            auto g = make_mimo_channels(2, 3, p, derive_seed(7, r));
            int idx = 0;
            for (const auto& row : g)
                for (const auto& chan : row) first[std::size_t(idx++)].push_back(chan.taps(0, 0));
        }
        double worst = 0.0;
        for (int i = 0; i < links; ++i) {
            for (int j = i + 1; j < links; ++j) {
                cd cross(0, 0);
                double pa = 0.0, pb = 0.0;
                for (int r = 0; r < reps; ++r) {
                    cross += first[std::size_t(i)][std::size_t(r)] *
                             std::conj(first[std::size_t(j)][std::size_t(r)]);
                    pa += std::norm(first[std::size_t(i)][std::size_t(r)]);
                    pb += std::norm(first[std::size_t(j)][std::size_t(r)]);
                }
                worst = std::max(worst, std::abs(cross) / std::sqrt(pa * pb));
            }
        }
        CHECK(worst < 0.05);
    }
}

TEST_CASE("awgn adds the requested variance") {
    std::vector<cd> x(200000, cd(0, 0));
    add_awgn(x, 0.25, 5);
    double acc = 0.0;
    for (const auto& v : x) acc += std::norm(v);
    CHECK(acc / double(x.size()) == doctest::Approx(0.25).epsilon(0.02));
}

TEST_CASE("errors: bad profiles and ranges") {
    ChannelProfile p;
    CHECK_THROWS_AS(realize_channel(p, 8, 0), std::invalid_argument);
    p = single_tap();
    CHECK_THROWS_AS(realize_channel(p, 0, 0), std::invalid_argument);
    auto real = realize_channel(single_tap(100.0, 1e-6), 16, 0);
    CHECK_THROWS_AS(channel_matrix(real, 4, 8, 8), std::out_of_range);
}
