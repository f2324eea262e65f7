#include "wavesim/channel.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace wavesim {

ChannelProfile ChannelProfile::normalized() const {
    ChannelProfile out = *this;
    double total = 0.0;
    for (double p : out.tap_powers) total += p;
    if (total <= 0.0) throw std::invalid_argument("channel profile has no power");
    for (double& p : out.tap_powers) p /= total;
    return out;
}

void ChannelProfile::validate_or_throw() const {
    if (tap_delays.empty()) throw std::invalid_argument("empty channel profile");
    if (tap_delays.size() != tap_powers.size())
        throw std::invalid_argument("delay/power length mismatch");
    for (std::size_t k = 0; k < tap_delays.size(); ++k) {
        if (tap_delays[k] < 0.0) throw std::invalid_argument("negative tap delay");
        if (k > 0 && tap_delays[k] <= tap_delays[k - 1])
            throw std::invalid_argument("tap delays must be increasing");
        if (tap_powers[k] <= 0.0) throw std::invalid_argument("tap powers must be positive");
    }
    if (doppler_hz < 0.0) throw std::invalid_argument("negative Doppler");
    if (sample_period <= 0.0) throw std::invalid_argument("sample period must be positive");
}

ChannelProfile etu_profile(double doppler_hz, double sample_period) {
    ChannelProfile p;
    p.tap_delays = {0e-9, 50e-9, 120e-9, 200e-9, 230e-9, 500e-9, 1600e-9, 2300e-9, 5000e-9};
    const double db[] = {-1.0, -1.0, -1.0, 0.0, 0.0, 0.0, -3.0, -5.0, -7.0};
    p.tap_powers.assign(std::begin(db), std::end(db));
    for (double& v : p.tap_powers) v = db_to_lin(v);
    p.doppler_hz = doppler_hz;
    p.sample_period = sample_period;
    return p.normalized();
}

namespace {
constexpr int kSinusoids = 16;
} // namespace

ChannelRealization realize_channel(const ChannelProfile& profile_in, int duration_samples,
                                   std::uint64_t rng_seed) {
    if (duration_samples < 1) throw std::invalid_argument("duration must be positive");
    ChannelProfile profile = profile_in.normalized();
    profile.validate_or_throw();

    // taps rounded to the sample grid; merge coincident discrete delays
    std::map<int, double> merged;
    for (std::size_t k = 0; k < profile.taps(); ++k) {
        int j = int(std::lround(profile.tap_delays[k] / profile.sample_period));
        merged[j] += profile.tap_powers[k];
    }

    ChannelRealization out;
    out.time_invariant = profile.doppler_hz == 0.0 || !profile.fading;
    out.duration = duration_samples;
    out.delay_indices.reserve(merged.size());
    for (const auto& [j, _] : merged) out.delay_indices.push_back(j);
    out.span = out.delay_indices.back() + 1;

    const int cols = out.time_invariant ? 1 : duration_samples;
    out.taps.resize(long(merged.size()), cols);

    if (!profile.fading) {
        int r = 0;
        for (const auto& [j, power] : merged) out.taps(r++, 0) = std::sqrt(power);
        return out;
    }

    int row = 0;
    for (const auto& [j, power] : merged) {
        Rng rng(derive_seed(rng_seed, 0x74617000ULL + std::uint64_t(row), j));
        const double theta = rng.uniform(-kPi, kPi);
        double phi_c[kSinusoids], phi_s[kSinusoids], alpha[kSinusoids];
        for (int m = 0; m < kSinusoids; ++m) {
            phi_c[m] = rng.uniform(-kPi, kPi);
            phi_s[m] = rng.uniform(-kPi, kPi);
            alpha[m] = (2.0 * kPi * (m + 1) - kPi + theta) / (4.0 * kSinusoids);
        }
        const double amp = std::sqrt(power / kSinusoids);
        const double wd = 2.0 * kPi * profile.doppler_hz * profile.sample_period;
        for (int i = 0; i < cols; ++i) {
            double re = 0.0, im = 0.0;
            for (int m = 0; m < kSinusoids; ++m) {
                re += std::cos(wd * i * std::cos(alpha[m]) + phi_c[m]);
                im += std::cos(wd * i * std::sin(alpha[m]) + phi_s[m]);
            }
            out.taps(row, i) = amp * cd(re, im);
        }
        ++row;
    }
    return out;
}

Eigen::MatrixXcd channel_matrix(const ChannelRealization& real, int block_index, int q, int ns) {
    if (q < 1 || ns < 1) throw std::invalid_argument("bad dimensions");
    const long base = long(block_index) * ns;
    if (base < 0) throw std::out_of_range("block out of range");
    if (!real.time_invariant && base + q > real.duration)
        throw std::out_of_range("realization too short for block");

    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(q, q);
    for (std::size_t k = 0; k < real.delay_indices.size(); ++k) {
        const int j = real.delay_indices[k];
        for (int i = j; i < q; ++i) h(i, i - j) = real.tap_at(k, base + i);
    }
    return h;
}

std::vector<std::vector<ChannelRealization>> make_mimo_channels(int users, int antennas,
                                                                const ChannelProfile& profile,
                                                                std::uint64_t rng_seed) {
    if (users < 1 || antennas < 1) throw std::invalid_argument("users/antennas must be >= 1");
    ChannelProfile p = profile;
    p.doppler_hz = 0.0;
    std::vector<std::vector<ChannelRealization>> grid(users);
    for (int u = 0; u < users; ++u) {
        grid[u].reserve(antennas);
        for (int a = 0; a < antennas; ++a)
            grid[u].push_back(realize_channel(p, 1, derive_seed(rng_seed, 0x6d696dULL, u, a)));
    }
    return grid;
}

std::vector<cd> apply_channel(const ChannelRealization& chan, const std::vector<cd>& x) {
    std::vector<cd> y(x.size() + chan.span - 1, cd(0, 0));
    for (std::size_t k = 0; k < chan.delay_indices.size(); ++k) {
        const int j = chan.delay_indices[k];
        if (chan.time_invariant) {
            const cd c = chan.taps(k, 0);
            for (std::size_t n = 0; n < x.size(); ++n) y[n + j] += c * x[n];
        } else {
            for (std::size_t n = 0; n < x.size(); ++n)
                y[n + j] += chan.tap_at(k, long(n) + j) * x[n];
        }
    }
    return y;
}

void add_awgn(std::vector<cd>& x, double noise_var, std::uint64_t rng_seed) {
    if (noise_var < 0.0) throw std::invalid_argument("negative noise variance");
    if (noise_var == 0.0) return;
    Rng rng(derive_seed(rng_seed, 0x6e6f69ULL));
    const double s = std::sqrt(noise_var);
    for (auto& v : x) v += s * rng.cnormal();
}

} // namespace wavesim
