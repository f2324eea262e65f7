#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "wavesim/common.hpp"
#include "wavesim/frame_config.hpp"

namespace wavesim {

enum class PulseKind { RECT, RRC, PHYDYAS, SINC_TRUNC };

std::string to_string(PulseKind k);
PulseKind pulse_kind_from_string(const std::string& name);

/// Sampled unit-energy prototype pulse. Samples are dimensionless with
/// sum |p[n]|^2 = 1 (the sample-period factor of the continuous-time energy
/// normalization is folded into the samples). The design symbol interval is
/// Q / M_grid samples; RRC/sinc place their zero crossings on it and PHYDYAS
/// uses it as the overlap period.
struct PrototypePulse {
    Eigen::VectorXcd samples;
    PulseKind kind = PulseKind::RECT;
    double rolloff = 0.0;
    int length = 0;   // Q
    int grid_divisor = 1; // M_grid used at design time

    double design_period() const { return double(length) / grid_divisor; }
    double energy() const { return samples.squaredNorm(); }
};

/// Builds a unit-energy pulse of Q samples. rolloff applies to RRC and
/// SINC_TRUNC (excess-bandwidth fraction, in [0,1]); PHYDYAS uses the
/// frequency-sampling design with overlap factor 4.
PrototypePulse make_pulse(PulseKind kind, int q, int m_grid, double rolloff = 0.0);

/// Discrete ambiguity function A(tau, nu) = sum_n p[n] p*[n-tau] e^{-j2pi nu n}
/// with tau in samples and nu in cycles per sample. A(0,0) = 1 for a
/// unit-energy pulse. Throws when |tau| >= Q.
cd ambiguity(const PrototypePulse& pulse, int tau_samples, double nu_cycles_per_sample);

/// Inner product of the pulse translated to lattice point (k, l) with the
/// (0, 0) pulse, including the packing phase rotation. Computed by direct
/// summation (independent of the ambiguity-function algebra).
cd lattice_cross_gain(const PrototypePulse& pulse, const FrameConfig& config, int k, int l);

struct OrthogonalityReport {
    double max_residual = 0.0;       // max |<g_kl, g_00>| over nonzero lattice points
    double oqam_max_residual = 0.0;  // max |Re{ j^{k+l} <g_kl, g_00> }|
    double interference_power = 0.0; // scheme metric, total over the lattice
    double interference_db = 0.0;    // relative to unit signal power (10 log10)
};

/// Evaluates the pulse's residual interference over the configured lattice.
/// For OQAM schemes the imaginary-part-discarded metric is used for the
/// power totals; otherwise the plain complex gain.
OrthogonalityReport check_orthogonality(const PrototypePulse& pulse, const FrameConfig& config);

/// Zero-padded magnitude spectrum normalized to 0 dB peak. Returns pairs of
/// (frequency in cycles/sample, magnitude in dB), frequencies in [0, 0.5].
std::vector<std::pair<double, double>> pulse_spectrum_db(const PrototypePulse& pulse,
                                                         int pad_factor = 8);

/// Writes the sample table as CSV with columns n, real, imag.
void export_pulse_csv(const PrototypePulse& pulse, const std::string& path);

} // namespace wavesim
