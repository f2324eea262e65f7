#include "wavesim/frame_config.hpp"

#include <cmath>
#include <sstream>

namespace wavesim {

std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::OFDM: return "OFDM";
        case Scheme::FBMC_QAM: return "FBMC_QAM";
        case Scheme::FBMC_OQAM: return "FBMC_OQAM";
        case Scheme::SCM: return "SCM";
        case Scheme::TFS_QAM: return "TFS_QAM";
        case Scheme::TFS_OQAM: return "TFS_OQAM";
    }
    return "?";
}

Scheme scheme_from_string(const std::string& name) {
    if (name == "OFDM") return Scheme::OFDM;
    if (name == "FBMC_QAM") return Scheme::FBMC_QAM;
    if (name == "FBMC_OQAM") return Scheme::FBMC_OQAM;
    if (name == "SCM") return Scheme::SCM;
    if (name == "TFS_QAM") return Scheme::TFS_QAM;
    if (name == "TFS_OQAM") return Scheme::TFS_OQAM;
    throw std::invalid_argument("unknown scheme: " + name);
}

std::vector<std::string> FrameConfig::validate() const {
    std::vector<std::string> bad;
    auto fail = [&](const std::string& msg) { bad.push_back(msg); };

    if (n_subcarriers < 1) fail("N must be a positive integer");
    if (samples_per_symbol < 1) fail("N_s must be a positive integer");
    if (grid_divisor < 1) fail("grid divisor M must be a positive integer");
    if (pulse_len < 1) fail("Q must be a positive integer");
    if (half_packet < 0) fail("G must be non-negative");
    if (cp_len < 0) fail("G_cp must be non-negative");
    if (power <= 0.0) fail("power P must be positive");
    if (symbol_period <= 0.0) fail("T_s must be positive");
    if (!(guard_efficiency > 0.0 && guard_efficiency <= 1.0)) fail("zeta_g must lie in (0, 1]");
    if (delta_t <= 0.0 || delta_f <= 0.0) fail("delta_t and delta_f must be positive");

    // grid alignment: Q * delta_f * delta_t = M * N_s
    double lhs = double(pulse_len) * delta_f * delta_t;
    double rhs = double(grid_divisor) * samples_per_symbol;
    if (std::abs(lhs - rhs) > 1e-6 * std::max(1.0, rhs)) {
        std::ostringstream os;
        os << "grid alignment violated: Q*delta_f*delta_t = " << lhs << " but M*N_s = " << rhs;
        fail(os.str());
    }

    double p = packing();
    switch (scheme) {
        case Scheme::OFDM: {
            if (std::abs(delta_f - 1.0) > 1e-9) fail("OFDM requires delta_f = 1");
            double want_dt = double(pulse_len + cp_len) / pulse_len; // 1 + T_cp/T
            if (std::abs(delta_t - want_dt) > 1e-9)
                fail("OFDM requires delta_t = 1 + T_cp/T = (Q+G_cp)/Q");
            if (samples_per_symbol != pulse_len + cp_len)
                fail("OFDM requires N_s = Q + G_cp");
            break;
        }
        case Scheme::FBMC_QAM:
            if (p < 1.0 - 1e-9) fail("FBMC_QAM requires delta_t*delta_f >= 1");
            break;
        case Scheme::FBMC_OQAM:
            if (p < 0.5 - 1e-9) fail("FBMC_OQAM requires delta_t*delta_f >= 0.5");
            break;
        case Scheme::SCM:
            if (n_subcarriers != 1) fail("SCM requires N = 1");
            if (p < 1.0 - 1e-9) fail("SCM requires delta_t*delta_f >= 1");
            if (cp_len > slots()) fail("SCM cyclic prefix longer than the packet");
            break;
        case Scheme::TFS_QAM:
            if (p >= 1.0 - 1e-12) fail("TFS_QAM requires delta_t*delta_f < 1");
            break;
        case Scheme::TFS_OQAM:
            if (p >= 0.5 - 1e-12) fail("TFS_OQAM requires delta_t*delta_f < 0.5");
            break;
    }

    if (is_oqam()) {
        int root = static_cast<int>(std::lround(std::sqrt(double(constellation_order))));
        if (root * root != constellation_order || root < 2)
            fail("OQAM requires a square constellation order");
        if ((root & (root - 1)) != 0) fail("sqrt(M) must be a power of two");
    } else {
        if (!is_power_of_four(constellation_order))
            fail("QAM constellation order must be a power of 4");
    }
    return bad;
}

void FrameConfig::validate_or_throw() const {
    auto bad = validate();
    if (bad.empty()) return;
    std::string all;
    for (const auto& b : bad) {
        if (!all.empty()) all += "; ";
        all += b;
    }
    throw std::invalid_argument("invalid frame config: " + all);
}

} // namespace wavesim
