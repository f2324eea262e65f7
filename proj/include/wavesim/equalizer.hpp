#pragma once

#include <Eigen/Dense>
#include <string>

#include "wavesim/observation.hpp"

namespace wavesim {

enum class EqualizerKind { MF, LS, MMSE, OQAM_MF_MMSE };

std::string to_string(EqualizerKind k);
EqualizerKind equalizer_from_string(const std::string& name);

/// Central rows of the full linear equalizer on the Q-point DFT grid, plus
/// the phase de-rotation applied after it. OQAM_MF_MMSE is the reduced
/// receiver: the channel-independent analysis filter bank followed by a
/// per-subcarrier scalar stage built from the bank's own-channel gains; its
/// residual variance can be refreshed from a calibration pass.
struct Equalizer {
    EqualizerKind kind = EqualizerKind::MMSE;
    Eigen::MatrixXcd G;          // N x Q
    Eigen::MatrixXcd mf_base;    // OQAM only: analysis filter bank rows P_f^H
    Eigen::VectorXcd mf_gain;    // OQAM only: diag(P_f^H H_0)
    double packing = 1.0;        // delta_t * delta_f for the de-rotation
    bool oqam = false;
    int ls_rank = -1;

    /// [eps_l]_k = e^{-j 2 pi dt df k l}
    Eigen::VectorXcd phase_comp(int l_signed) const;

    /// Rebuilds the OQAM scalar stage:
    /// G = diag(conj(a_k) / (|a_k|^2 + v_k)) mf_base.
    Equalizer with_residual_variance(const Eigen::VectorXd& v) const;
};

Equalizer make_equalizer(const ObservationModel& model, EqualizerKind kind);

struct EqualizeResult {
    Eigen::VectorXcd d_hat;  // de-rotated soft estimates of d
    Eigen::VectorXd pam;     // OQAM: real-part PAM estimates (empty otherwise)
};

/// d_hat = diag(eps_l) G y_f; for OQAM additionally strips the j^{k+l}
/// pattern and keeps the real part.
EqualizeResult equalize(const Equalizer& eq, const Eigen::VectorXcd& y_freq, int l_signed);

/// Closed-form per-subcarrier MSE of an equalizer against the model,
/// E|g_k y - d~_k|^2 with unit-power symbols, EVM noise included.
Eigen::VectorXd equalizer_mse(const ObservationModel& model, const Equalizer& eq);

} // namespace wavesim
