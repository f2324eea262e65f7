#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "wavesim/channel.hpp"
#include "wavesim/synthesis.hpp"

namespace wavesim {

/// Frequency-domain linear observation model for one block: the received
/// window projected on the Q-point DFT grid as a linear map of the
/// phase-rotated symbols of the 2L+1 neighboring blocks,
///   y_f = sum_m H_m(f) d~_{l+m} + w_f.
/// Block contributions are assembled through the time-varying channel band,
/// including transmit samples that precede the window (channel memory), so
/// the model reproduces a full time-domain convolution exactly. Blocks
/// outside the packet contribute zero columns.
class ObservationModel {
public:
    /// half_width < 0 selects the smallest window that makes the model exact
    /// for the pulse span plus channel memory. An explicit half_width smaller
    /// than that is refused.
    ObservationModel(const LinkPlan& plan, const ChannelRealization& chan, int block_column,
                     double noise_var, double evm_fraction = 0.0, int half_width = -1);

    /// Synthetic model from explicit frequency-domain blocks (test oracles).
    static ObservationModel from_blocks(std::vector<Eigen::MatrixXcd> blocks, double noise_var,
                                        double evm_fraction = 0.0);

    int half_width() const { return half_; }
    int block_column() const { return column_; }
    double noise_var() const { return noise_var_; }
    double evm_fraction() const { return evm_; }
    bool synthetic() const { return plan_ == nullptr; }
    const LinkPlan& plan() const;

    int rows() const { return q_; }
    int block_size() const { return n_; }

    /// Time-domain map of block l+m into the window (Q x N).
    Eigen::MatrixXcd block_map_time(int m) const;

    /// H_m(f): unitary DFT of the block map columns; cached.
    const Eigen::MatrixXcd& block_freq(int m) const;

    /// Concatenated [H_{-L} ... H_{+L}] (Q x (2L+1)N).
    Eigen::MatrixXcd total_freq() const;

    /// Received covariance in the time domain:
    /// (1+evm^2) sum_m M_m M_m^H + noise_var I, assembled from the cached
    /// transmit Gram matrix through the channel band; cached.
    const Eigen::MatrixXcd& received_covariance_time() const;

    /// Same covariance on the DFT grid (equals H H^H (1+evm^2) + noise I).
    Eigen::MatrixXcd received_covariance_freq() const;

    /// Frequency-domain shift matrix C_m = F Z^{m Ns} F^H (C_0 = I).
    Eigen::MatrixXcd shift_matrix_freq(int m) const;

    /// Model prediction sum_m H_m d~_{l+m} for a full symbol grid (no noise).
    Eigen::VectorXcd predict_freq(const SymbolGrid& grid) const;

    /// Extracts and DFTs this block's window from a received sample stream.
    Eigen::VectorXcd window_freq(const std::vector<cd>& received) const;

private:
    ObservationModel() = default;
    void require_real() const;

    const LinkPlan* plan_ = nullptr;
    const ChannelRealization* chan_ = nullptr;
    int column_ = 0;
    int q_ = 0;
    int n_ = 0;
    int half_ = 0;
    double noise_var_ = 0.0;
    double evm_ = 0.0;
    long window_start_ = 0;

    mutable std::vector<std::optional<Eigen::MatrixXcd>> freq_blocks_;
    mutable Eigen::MatrixXcd cov_time_;
    std::vector<Eigen::MatrixXcd> synthetic_blocks_;
};

/// Smallest half-width making the model exact for a plan/channel pair.
int min_interference_half_width(const LinkPlan& plan, int channel_span);

/// Extracts block_column's observation window from a received stream and
/// projects it on the Q-point DFT grid.
Eigen::VectorXcd window_freq(const LinkPlan& plan, const std::vector<cd>& received,
                             int block_column);

} // namespace wavesim
