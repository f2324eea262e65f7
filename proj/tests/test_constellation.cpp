#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "wavesim/constellation.hpp"
#include "wavesim/rng.hpp"
#include "wavesim/symbol_grid.hpp"

using namespace wavesim;

namespace {

FrameConfig oqam_config() {
    FrameConfig f;
    f.scheme = Scheme::FBMC_OQAM;
    f.n_subcarriers = 8;
    f.delta_t = 0.5;
    f.delta_f = 1.0;
    f.samples_per_symbol = 4;
    f.grid_divisor = 4;
    f.pulse_len = 32;
    f.half_packet = 3;
    f.constellation_order = 4;
    f.symbol_period = 4e-6;
    return f;
}

FrameConfig qpsk_config(int n = 4, int g = 3) {
    FrameConfig f;
    f.scheme = Scheme::FBMC_QAM;
    f.n_subcarriers = n;
    f.delta_t = 1.0;
    f.delta_f = 1.0;
    f.samples_per_symbol = 8;
    f.grid_divisor = 2;
    f.pulse_len = 16;
    f.half_packet = g;
    f.constellation_order = 4;
    f.symbol_period = 8e-6;
    return f;
}

} // namespace

TEST_CASE("constellations have unit average power") {
    for (int m : {4, 16, 64, 256}) {
        auto pts = qam_points(m);
        double p = 0.0;
        for (auto c : pts) p += std::norm(c);
        CHECK(p / m == doctest::Approx(1.0).epsilon(1e-12));
    }
    for (int l : {2, 4, 8}) {
        auto pts = pam_points(l);
        double p = 0.0;
        for (auto v : pts) p += v * v;
        CHECK(p / l == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("qpsk points sit on the diagonals") {
    auto pts = qam_points(4);
    for (auto c : pts) {
        CHECK(std::abs(std::abs(c.real()) - 0.7071067811865476) < 1e-12);
        CHECK(std::abs(std::abs(c.imag()) - 0.7071067811865476) < 1e-12);
    }
}

TEST_CASE("gray neighbors differ in one bit along a rail") {
    auto pts = pam_points(8);
    std::vector<std::pair<double, int>> byamp;
    for (int i = 0; i < 8; ++i) byamp.push_back({pts[std::size_t(i)], i});
    std::sort(byamp.begin(), byamp.end());
    for (int i = 1; i < 8; ++i) {
        int x = byamp[std::size_t(i)].second ^ byamp[std::size_t(i - 1)].second;
        CHECK(__builtin_popcount(unsigned(x)) == 1);
    }
}

TEST_CASE("oqam phase pattern j^(k+l)") {
    CHECK(oqam_phase(0, 0) == cd(1, 0));  // a=+1 -> d=+1
    CHECK(oqam_phase(1, 0) == cd(0, 1));  // a=+1 -> d=+j
    CHECK(oqam_phase(2, 0) == cd(-1, 0));
    CHECK(oqam_phase(1, -1) == cd(1, 0));
}

TEST_CASE("lattice rotation matches closed form and stays unimodular") {
    // packing 0.5, k=1, l=1 -> e^{j pi} = -1
    CHECK(std::abs(lattice_rotation(0.5, 1, 1) - cd(-1.0, 0.0)) < 1e-12);
    for (int k = 0; k < 5; ++k)
        for (int l = -3; l <= 3; ++l)
            CHECK(std::abs(std::abs(lattice_rotation(0.9 * 0.95, k, l)) - 1.0) < 1e-12);
}

TEST_CASE("map_symbols oqam grid structure") {
    FrameConfig f = oqam_config();
    SymbolGrid g = map_symbols({}, f, 42);
    REQUIRE(g.subcarriers() == 8);
    REQUIRE(g.slots() == 7);
    for (int c = 0; c < g.slots(); ++c) {
        int l = c - f.half_packet;
        for (int k = 0; k < 8; ++k) {
            CHECK(g.a(k, c).imag() == 0.0);
            CHECK(std::abs(g.d(k, c) - oqam_phase(k, l) * g.a(k, c)) < 1e-14);
            CHECK(std::abs(std::abs(g.d_rot(k, c)) - std::abs(g.d(k, c))) < 1e-14);
        }
    }
}

TEST_CASE("mean power of a 10^4-symbol grid") {
    FrameConfig f = qpsk_config(16, 312); // 16 x 625 = 10000 symbols
    f.constellation_order = 64;
    SymbolGrid g = map_symbols({}, f, 7);
    double p = g.a.squaredNorm() / double(g.a.size());
    CHECK(p > 0.95);
    CHECK(p < 1.05);
}

TEST_CASE("scm cyclic prefix columns replicate the tail") {
    FrameConfig f;
    f.scheme = Scheme::SCM;
    f.n_subcarriers = 1;
    f.delta_t = 1.0;
    f.delta_f = 1.0;
    f.samples_per_symbol = 8;
    f.grid_divisor = 2;
    f.pulse_len = 16;
    f.half_packet = 5;
    f.cp_len = 3;
    f.constellation_order = 16;
    f.symbol_period = 8e-6;

    SymbolGrid g = map_symbols({}, f, 3);
    const int cols = f.slots();
    for (int c = 0; c < f.cp_len; ++c)
        CHECK(g.d(0, c) == g.d(0, cols - f.cp_len + c));
    CHECK(f.required_bits() == (cols - f.cp_len) * 4);
}

TEST_CASE("bit count mismatch and bad orders are rejected") {
    FrameConfig f = qpsk_config();
    std::vector<int> bits(std::size_t(f.required_bits() - 1), 0);
    CHECK_THROWS_AS(map_symbols(bits, f, 0), std::invalid_argument);

    f.constellation_order = 8; // not a power of 4
    CHECK_THROWS_AS(map_symbols({}, f, 0), std::invalid_argument);

    FrameConfig o = oqam_config();
    o.constellation_order = 32; // sqrt not a PAM size
    CHECK_THROWS_AS(map_symbols({}, o, 0), std::invalid_argument);
}

TEST_CASE("explicit bits give deterministic symbols") {
    FrameConfig f = qpsk_config(2, 0);
    std::vector<int> bits(std::size_t(f.required_bits()), 0);
    SymbolGrid g0 = map_symbols(bits, f, 11);
    SymbolGrid g1 = map_symbols(bits, f, 99); // seed unused when bits given
    CHECK((g0.d - g1.d).norm() == 0.0);
}

TEST_CASE("evm perturbation statistics") {
    FrameConfig f = qpsk_config(25, 2000); // 25 x 4001 ~ 1e5 symbols
    SymbolGrid g = map_symbols({}, f, 5);
    SymbolGrid clean = g;

    SUBCASE("zero evm is the identity") {
        apply_evm(g, f, 0.0, 123);
        CHECK((g.d - clean.d).norm() == 0.0);
    }
    SUBCASE("negative evm refused") {
        CHECK_THROWS_AS(apply_evm(g, f, -0.1, 1), std::invalid_argument);
    }
    SUBCASE("error rms and mean at 4%") {
        apply_evm(g, f, 0.04, 123);
        Eigen::MatrixXcd err = g.d - clean.d;
        const double n = double(err.size());
        double rms = std::sqrt(err.squaredNorm() / n);
        CHECK(rms == doctest::Approx(0.04).epsilon(0.05)); // 0.04 +/- 0.002
        cd mean = err.sum() / n;
        CHECK(std::abs(mean) < 4.0 * 0.04 / std::sqrt(n));
        CHECK(std::abs(g.d_rot(1, 3)) == doctest::Approx(std::abs(g.d(1, 3))).epsilon(1e-12));
    }
}

TEST_CASE("evm on a sample stream") {
    Rng rng(1);
    std::vector<cd> x(50000);
    for (auto& v : x) v = rng.cnormal();
    std::vector<cd> clean = x;
    apply_evm(x, 0.04, 9);
    double acc = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc += std::norm(x[i] - clean[i]);
        ref += std::norm(clean[i]);
    }
    CHECK(std::sqrt(acc / ref) == doctest::Approx(0.04).epsilon(0.05));
}
