#pragma once

#include <Eigen/Dense>
#include <vector>

#include "wavesim/common.hpp"
#include "wavesim/rng.hpp"

namespace wavesim {

/// Tapped-delay-line power profile. Powers are normalized to unit total on
/// construction via normalized().
struct ChannelProfile {
    std::vector<double> tap_delays;  // seconds, non-negative, increasing
    std::vector<double> tap_powers;  // linear, positive
    double doppler_hz = 0.0;         // maximum Doppler frequency f_d
    double sample_period = 1.0;      // T_c, seconds
    bool fading = true;              // false: deterministic taps sqrt(P_k)

    ChannelProfile normalized() const;
    void validate_or_throw() const;
    std::size_t taps() const { return tap_delays.size(); }
};

/// Extended Typical Urban profile (9 taps); delays/powers from the LTE
/// conformance tables, normalized to unit power.
ChannelProfile etu_profile(double doppler_hz, double sample_period);

/// One realization of the discrete-time time-varying impulse response
/// h[i, j] = sum_k c_k[i] delta[j - j_k]. For doppler_hz = 0 the taps are
/// constant and stored once.
struct ChannelRealization {
    Eigen::MatrixXcd taps;           // n_taps x duration (x 1 if static)
    std::vector<int> delay_indices;  // j_k = round(tau_k / T_c), increasing
    int span = 0;                    // max j_k + 1
    bool time_invariant = false;
    int duration = 0;

    cd tap_at(std::size_t k, long i) const {
        if (time_invariant) return taps(k, 0);
        if (i < 0) i = 0;
        if (i >= duration) i = duration - 1;
        return taps(k, i);
    }
};

/// Sum-of-sinusoids Rayleigh generator (16 sinusoids per tap, classical
/// Doppler spectrum), seed-deterministic. Tap delays are rounded to the
/// sample grid; coincident delays accumulate power on one discrete tap.
ChannelRealization realize_channel(const ChannelProfile& profile, int duration_samples,
                                   std::uint64_t rng_seed);

/// Q x Q channel matrix for block l: [H]_{i,j} = h[l*Ns + i, i - j].
Eigen::MatrixXcd channel_matrix(const ChannelRealization& real, int block_index, int q, int ns);

/// U x N_BS grid of independent time-invariant realizations (f_d forced to 0).
std::vector<std::vector<ChannelRealization>> make_mimo_channels(int users, int antennas,
                                                                const ChannelProfile& profile,
                                                                std::uint64_t rng_seed);

/// y[n] = sum_k c_k[n] x[n - j_k]; output length = input length + span - 1.
std::vector<cd> apply_channel(const ChannelRealization& chan, const std::vector<cd>& x);

/// Adds circular complex white Gaussian noise of per-sample variance
/// noise_var (total over both quadratures).
void add_awgn(std::vector<cd>& x, double noise_var, std::uint64_t rng_seed);

} // namespace wavesim
