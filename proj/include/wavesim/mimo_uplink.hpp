#pragma once

#include <Eigen/Dense>
#include <vector>

#include "wavesim/ase.hpp"
#include "wavesim/channel.hpp"
#include "wavesim/pulse.hpp"

namespace wavesim {

enum class UplinkEqualizer { ONE_TAP, FULL_ISI };

/// CP-free single-carrier uplink of U users to an N_BS-antenna array with
/// per-user matched-filter combining. Symbol spacing is delta_t times the
/// pulse design interval and must land on the sample grid.
struct UplinkScenario {
    int users = 4;
    int antennas = 128;
    PulseKind pulse_kind = PulseKind::RRC;
    double rolloff = 0.2;
    int pulse_len = 320;        // Q samples
    int pulse_grid_divisor = 16; // design interval = Q / divisor samples
    double delta_t = 1.0;        // in (0, 1]
    int constellation_order = 4;
    bool gaussian_inputs = false;
    double power = 1.0;          // per-user P (array gain taken as power saving)
    ChannelProfile profile;      // f_d forced to 0

    int nyquist_period() const { return pulse_len / pulse_grid_divisor; }
    int symbol_spacing() const; // delta_t * nyquist_period, must be integer
    void validate_or_throw() const;
};

/// Matched-filter cascade of one user: effective taps at symbol spacing.
struct EffectiveChannel {
    Eigen::VectorXcd g;   // effective impulse response, g[center] = zero lag
    int center = 0;
    double gamma = 0.0;          // g[center], real and positive
    double noise_var = 0.0;      // matched-filter noise power per symbol
    double interuser_var = 0.0;  // cross-user interference power per symbol
    double isi_var = 0.0;        // own intersymbol interference power
    double interference_var = 0.0; // interuser + noise (FULL_ISI noise floor)
};

struct UplinkRun {
    std::vector<std::vector<cd>> y;          // per-user matched-filter sequences
    std::vector<std::vector<cd>> symbols;    // per-user transmitted symbols
    std::vector<std::vector<int>> true_idx;  // constellation indices (finite alphabets)
    std::vector<EffectiveChannel> effective;
};

/// Symbol-rate simulation through the exact effective cross-channels with
/// exactly-colored matched-filter noise. remove_interference zeroes ISI and
/// interuser terms and keeps only the zero-lag tap plus white noise of the
/// matched-filter power (upper-bound curves).
UplinkRun simulate_uplink(const UplinkScenario& scenario, int n_symbols, double noise_var,
                          std::uint64_t rng_seed, bool remove_interference = false);

/// Serial reference: per-antenna sample-rate synthesis, channel convolution
/// and matched-filter correlation. Used as the oracle for the fast path.
UplinkRun simulate_uplink_reference(const UplinkScenario& scenario, int n_symbols,
                                    double noise_var, std::uint64_t rng_seed);

/// Mean relative interuser interference power (cross-channel energy over
/// squared zero-lag gain), averaged over users and realizations.
double mean_relative_interuser_power(const UplinkScenario& scenario, int n_realizations,
                                     std::uint64_t rng_seed);

/// Averaged per-user ASE curve. ONE_TAP treats everything but the zero-lag
/// tap as noise (finite-alphabet mismatched rate, or log2(1+SINR) with
/// Gaussian inputs); FULL_ISI computes the Gaussian-input rate of the
/// effective ISI channel with interuser-plus-noise treated as white. snr_db
/// is per-user symbol energy over the per-sample noise level.
AseCurve uplink_ase(const UplinkScenario& scenario, const std::vector<double>& snr_db,
                    UplinkEqualizer equalizer, int n_channels, int n_symbols,
                    std::uint64_t rng_seed, bool remove_interference = false, int n_jobs = 0);

} // namespace wavesim
