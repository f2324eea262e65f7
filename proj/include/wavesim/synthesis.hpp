#pragma once

#include <Eigen/Dense>
#include <memory>
#include <mutex>
#include <vector>

#include "wavesim/fft.hpp"
#include "wavesim/frame_config.hpp"
#include "wavesim/pulse.hpp"
#include "wavesim/symbol_grid.hpp"

namespace wavesim {

/// Per-scenario synthesis state shared across blocks: the filter bank matrix,
/// the window DFT plan, and lazily the filter-bank Gram matrix used by the
/// equalizer covariance assembly. Immutable after construction apart from the
/// cached Gram matrix, safe to share across read-only workers.
class LinkPlan {
public:
    LinkPlan(FrameConfig config, PrototypePulse pulse);

    const FrameConfig& config() const { return cfg_; }
    const PrototypePulse& pulse() const { return pulse_; }
    const Fft& window_fft() const { return fft_; }

    /// Q x N filter bank: column k holds p[n] e^{j2pi k M n / Q} / sqrt(N).
    const Eigen::MatrixXcd& filter_bank() const { return p_t_; }

    /// Frequency-domain pulse bank P_f = F_Q P_t (unitary DFT of each column).
    const Eigen::MatrixXcd& filter_bank_freq() const;

    /// Per-block transmit map including the OFDM cyclic-prefix prepend
    /// (block_tx_len x N). Identity-extended filter bank otherwise.
    const Eigen::MatrixXcd& block_map() const { return b_t_; }

    /// Gram matrix block_map * block_map^H, cached on first use.
    const Eigen::MatrixXcd& block_gram() const;

    double frame_scale() const { return scale_; }

private:
    FrameConfig cfg_;
    PrototypePulse pulse_;
    Fft fft_;
    Eigen::MatrixXcd p_t_;
    Eigen::MatrixXcd b_t_;
    // lazy caches; a plan is shared across parallel workers
    mutable std::once_flag p_f_once_;
    mutable Eigen::MatrixXcd p_f_;
    mutable std::once_flag gram_once_;
    mutable Eigen::MatrixXcd gram_;
    double scale_ = 1.0;
};

/// Windowed-IDFT synthesis of one block (production path, O(Q log Q)):
/// s[n] = (p[n]/sqrt(N)) sum_k d_k e^{j2pi k M n / Q}.
Eigen::VectorXcd synthesize_block(const Eigen::VectorXcd& rotated_column,
                                  const PrototypePulse& pulse, const FrameConfig& config,
                                  const Fft* fft = nullptr);

/// Filter-bank form of the same block (direct O(QN) sum). Kept as the serial
/// reference; the two paths agree to machine precision.
Eigen::VectorXcd synthesize_block_filter_bank(const Eigen::VectorXcd& rotated_column,
                                              const PrototypePulse& pulse,
                                              const FrameConfig& config);

/// Superposition of all blocks at N_s spacing, scaled so the mean transmit
/// power equals config.power. OFDM blocks carry their cyclic prefix. Length
/// is config.frame_len(). Throws if that exceeds max_samples.
std::vector<cd> synthesize_frame(const SymbolGrid& grid, const LinkPlan& plan,
                                 std::size_t max_samples = std::size_t(1) << 26);

} // namespace wavesim
