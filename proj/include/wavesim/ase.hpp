#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wavesim/channel.hpp"
#include "wavesim/equalizer.hpp"
#include "wavesim/frame_config.hpp"
#include "wavesim/pulse.hpp"

namespace wavesim {

struct AsePoint {
    double snr_db = 0.0;     // P/P_n on the reference bandwidth, dB
    double ase = 0.0;        // bits/s/Hz
    double half_width = 0.0; // 95% confidence half-width (batch means)
    long n_symbols = 0;      // information symbols actually accumulated
    int n_channels = 0;      // channel realizations
};

struct AseCurve {
    std::string scenario_id;
    std::uint64_t seed = 0;
    std::string equalizer;
    double evm = 0.0;
    std::vector<AsePoint> points;
};

/// One simulated link: waveform + channel + receiver.
struct LinkScenario {
    std::string name = "scenario";
    FrameConfig frame;
    PulseKind pulse_kind = PulseKind::RECT;
    double pulse_rolloff = 0.0;
    ChannelProfile profile;  // sample_period is overwritten from the frame
    EqualizerKind equalizer = EqualizerKind::MMSE;
    double evm = 0.0;
    double ref_bandwidth_hz = 1.92e6;
    double f_tot_hz = 0.0;  // 0: scheme default normalization
    bool gaussian_inputs = false;
};

/// Per-sample noise variance for a target P/P_n on the reference bandwidth.
double noise_variance_for(const FrameConfig& cfg, double snr_db, double ref_bandwidth_hz);

/// ASE normalization denominator T_s * F_tot (dimensionless). Scheme default
/// is N dt df, times (1+rolloff) for SCM; f_tot_hz > 0 overrides.
double ase_normalization(const FrameConfig& cfg, double rolloff, double f_tot_hz);

/// Closed-form spectral efficiency per scheme (bits/s/Hz).
double spectral_efficiency(Scheme scheme, int constellation_order, double code_rate,
                           double delta_t, double delta_f, int n_subcarriers, int cp_len,
                           double zeta_g, double rolloff);

/// Mismatched per-symbol information of a Gaussian symbol-by-symbol detector,
/// log2 M - log2 sum_j exp((|z-p_t|^2 - |z-p_j|^2)/n0), evaluated at one
/// unbiased equalized sample z with true point index t.
double mismatched_info_sample(cd z, int true_index, const std::vector<cd>& points, double n0);
double mismatched_info_sample(double z, int true_index, const std::vector<double>& points,
                              double n0);

/// Running estimate of the complex gain and residual variance of an
/// equalized output against its reference symbols (the calibration pass of
/// the auxiliary law).
struct GainStat {
    cd s_zd = 0.0;
    double s_zz = 0.0;
    double s_dd = 0.0;
    long n = 0;

    void add(cd z, cd d) {
        s_zd += z * std::conj(d);
        s_zz += std::norm(z);
        s_dd += std::norm(d);
        ++n;
    }
    cd gain() const { return s_dd > 0.0 ? s_zd / s_dd : cd(0.0, 0.0); }
    double symbol_power() const { return n > 0 ? s_dd / double(n) : 0.0; }
    double resid_var() const {
        if (n == 0) return 0.0;
        double v = s_zz / double(n) - std::norm(gain()) * (s_dd / double(n));
        return std::max(v, 0.0);
    }
};

/// Simulation-based achievable-spectral-efficiency estimate: synthesize,
/// pass through the fading channel, equalize, and accumulate the mismatched
/// information rate of the per-symbol Gaussian auxiliary law whose gain and
/// variance are calibrated empirically per subcarrier (per slot when the
/// channel is time-varying). n_jobs = 0 uses the OpenMP default; results are
/// independent of the worker count.
AseCurve estimate_ase(const LinkScenario& scenario, const std::vector<double>& snr_db,
                      int n_channels, long n_symbols, std::uint64_t rng_seed, int n_jobs = 0);

/// Gaussian-input variant: symbols are drawn complex Gaussian (real Gaussian
/// on OQAM lattices) and the per-symbol rate is log2(1 + SINR_k) with the
/// SINR measured from the calibration statistics.
AseCurve estimate_ase_gaussian_inputs(const LinkScenario& scenario,
                                      const std::vector<double>& snr_db, int n_channels,
                                      long n_symbols, std::uint64_t rng_seed, int n_jobs = 0);

} // namespace wavesim
