#include "wavesim/observation.hpp"

namespace wavesim {

int min_interference_half_width(const LinkPlan& plan, int channel_span) {
    const FrameConfig& cfg = plan.config();
    const int q = cfg.pulse_len;
    const int ns = cfg.samples_per_symbol;
    const int off = cfg.window_offset();
    const int qb = cfg.block_tx_len();
    int hi = (off + q - 1) / ns;                            // future blocks
    int lo = (channel_span + qb - 2 - off + ns - 1) / ns;   // past blocks, incl. memory
    return std::max({hi, lo, 0});
}

ObservationModel::ObservationModel(const LinkPlan& plan, const ChannelRealization& chan,
                                   int block_column, double noise_var, double evm_fraction,
                                   int half_width)
    : plan_(&plan), chan_(&chan), column_(block_column), noise_var_(noise_var),
      evm_(evm_fraction) {
    const FrameConfig& cfg = plan.config();
    if (block_column < 0 || block_column >= cfg.slots())
        throw std::out_of_range("block column out of range");
    q_ = cfg.pulse_len;
    n_ = cfg.n_subcarriers;
    window_start_ = long(block_column) * cfg.samples_per_symbol + cfg.window_offset();

    const int need = min_interference_half_width(plan, chan.span);
    if (half_width < 0) {
        half_ = need;
    } else if (half_width < need) {
        throw std::invalid_argument("interference window too small for pulse/channel span: need " +
                                    std::to_string(need) + ", got " + std::to_string(half_width));
    } else {
        half_ = half_width;
    }
    freq_blocks_.assign(2 * half_ + 1, std::nullopt);
}

ObservationModel ObservationModel::from_blocks(std::vector<Eigen::MatrixXcd> blocks,
                                               double noise_var, double evm_fraction) {
    if (blocks.empty() || blocks.size() % 2 == 0)
        throw std::invalid_argument("need an odd number of blocks");
    ObservationModel m;
    m.q_ = int(blocks.front().rows());
    m.n_ = int(blocks.front().cols());
    for (const auto& b : blocks)
        if (b.rows() != m.q_ || b.cols() != m.n_)
            throw std::invalid_argument("inconsistent block shapes");
    m.half_ = int(blocks.size() / 2);
    m.noise_var_ = noise_var;
    m.evm_ = evm_fraction;
    m.synthetic_blocks_ = std::move(blocks);
    return m;
}

const LinkPlan& ObservationModel::plan() const {
    require_real();
    return *plan_;
}

void ObservationModel::require_real() const {
    if (synthetic()) throw std::logic_error("operation requires a channel-backed model");
}

Eigen::MatrixXcd ObservationModel::block_map_time(int m) const {
    require_real();
    const FrameConfig& cfg = plan_->config();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(q_, n_);
    const int col = column_ + m;
    if (col < 0 || col >= cfg.slots()) return out; // outside the packet
    const Eigen::MatrixXcd& b = plan_->block_map();
    const int qb = int(b.rows());
    const long block_start = long(col) * cfg.samples_per_symbol;
    for (std::size_t k = 0; k < chan_->delay_indices.size(); ++k) {
        const int j = chan_->delay_indices[k];
        for (int i = 0; i < q_; ++i) {
            const long u = window_start_ + i - j - block_start;
            if (u < 0 || u >= qb) continue;
            out.row(i) += chan_->tap_at(k, window_start_ + i) * b.row(int(u));
        }
    }
    return out * plan_->frame_scale();
}

const Eigen::MatrixXcd& ObservationModel::block_freq(int m) const {
    if (m < -half_ || m > half_) throw std::out_of_range("block index outside window");
    if (synthetic()) return synthetic_blocks_[std::size_t(m + half_)];
    auto& slot = freq_blocks_[std::size_t(m + half_)];
    if (!slot) {
        Eigen::MatrixXcd time = block_map_time(m);
        Eigen::MatrixXcd freq(q_, n_);
        for (int k = 0; k < n_; ++k)
            freq.col(k) = plan_->window_fft().unitary_forward(time.col(k));
        slot = std::move(freq);
    }
    return *slot;
}

Eigen::MatrixXcd ObservationModel::total_freq() const {
    Eigen::MatrixXcd h(q_, (2 * half_ + 1) * n_);
    for (int m = -half_; m <= half_; ++m)
        h.middleCols((m + half_) * n_, n_) = block_freq(m);
    return h;
}

const Eigen::MatrixXcd& ObservationModel::received_covariance_time() const {
    if (cov_time_.size() != 0) return cov_time_;
    if (synthetic()) {
        // freq-domain covariance is the natural object for synthetic models
        throw std::logic_error("time-domain covariance requires a channel-backed model");
    }
    const FrameConfig& cfg = plan_->config();
    const int span = chan_->span;
    const int qe = q_ + span - 1;
    const Eigen::MatrixXcd& gram = plan_->block_gram(); // Qb x Qb
    const int qb = int(gram.rows());

    // transmit covariance over the extended window [W-span+1, W+Q-1]
    Eigen::MatrixXcd rx = Eigen::MatrixXcd::Zero(qe, qe);
    for (int m = -half_; m <= half_; ++m) {
        const int col = column_ + m;
        if (col < 0 || col >= cfg.slots()) continue;
        const long o = long(col) * cfg.samples_per_symbol - (window_start_ - span + 1);
        const long a0 = std::max(0L, o);
        const long a1 = std::min(long(qe), o + qb);
        if (a0 >= a1) continue;
        rx.block(a0, a0, a1 - a0, a1 - a0) +=
            gram.block(a0 - o, a0 - o, a1 - a0, a1 - a0);
    }

    // through the channel band: rows of T have one entry per discrete tap
    Eigen::MatrixXcd tr = Eigen::MatrixXcd::Zero(q_, qe);
    for (std::size_t k = 0; k < chan_->delay_indices.size(); ++k) {
        const int j = chan_->delay_indices[k];
        for (int i = 0; i < q_; ++i) {
            const int u = i + span - 1 - j;
            tr.row(i) += chan_->tap_at(k, window_start_ + i) * rx.row(u);
        }
    }
    Eigen::MatrixXcd cov = Eigen::MatrixXcd::Zero(q_, q_);
    for (std::size_t k = 0; k < chan_->delay_indices.size(); ++k) {
        const int j = chan_->delay_indices[k];
        for (int i = 0; i < q_; ++i) {
            const int u = i + span - 1 - j;
            cov.col(i) += std::conj(chan_->tap_at(k, window_start_ + i)) * tr.col(u);
        }
    }
    const double s2 = plan_->frame_scale() * plan_->frame_scale();
    cov *= s2 * (1.0 + evm_ * evm_);
    cov.diagonal().array() += noise_var_;
    cov_time_ = std::move(cov);
    return cov_time_;
}

Eigen::MatrixXcd ObservationModel::received_covariance_freq() const {
    if (synthetic()) {
        Eigen::MatrixXcd cov = Eigen::MatrixXcd::Zero(q_, q_);
        for (int m = -half_; m <= half_; ++m) {
            const auto& h = block_freq(m);
            cov += h * h.adjoint();
        }
        cov *= (1.0 + evm_ * evm_);
        cov.diagonal().array() += noise_var_;
        return cov;
    }
    const Eigen::MatrixXcd& ct = received_covariance_time();
    // F C F^H via column then row transforms
    Eigen::MatrixXcd tmp(q_, q_);
    for (int c = 0; c < q_; ++c)
        tmp.col(c) = plan_->window_fft().unitary_forward(Eigen::VectorXcd(ct.col(c)));
    Eigen::MatrixXcd out(q_, q_);
    for (int r = 0; r < q_; ++r) {
        Eigen::VectorXcd row = tmp.row(r).conjugate().transpose();
        out.row(r) = plan_->window_fft().unitary_forward(row).conjugate().transpose();
    }
    return out;
}

Eigen::MatrixXcd ObservationModel::shift_matrix_freq(int m) const {
    require_real();
    const int ns = plan_->config().samples_per_symbol;
    Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(q_, q_);
    const long s = long(m) * ns;
    for (int i = 0; i < q_; ++i) {
        const long j = i - s;
        if (j >= 0 && j < q_) z(i, j) = 1.0;
    }
    Eigen::MatrixXcd tmp(q_, q_);
    for (int c = 0; c < q_; ++c)
        tmp.col(c) = plan_->window_fft().unitary_forward(Eigen::VectorXcd(z.col(c)));
    Eigen::MatrixXcd out(q_, q_);
    for (int r = 0; r < q_; ++r) {
        Eigen::VectorXcd row = tmp.row(r).conjugate().transpose();
        out.row(r) = plan_->window_fft().unitary_forward(row).conjugate().transpose();
    }
    return out;
}

Eigen::VectorXcd ObservationModel::predict_freq(const SymbolGrid& grid) const {
    require_real();
    const FrameConfig& cfg = plan_->config();
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(q_);
    for (int m = -half_; m <= half_; ++m) {
        const int col = column_ + m;
        if (col < 0 || col >= cfg.slots()) continue;
        acc += block_freq(m) * grid.d_rot.col(col);
    }
    return acc;
}

Eigen::VectorXcd ObservationModel::window_freq(const std::vector<cd>& received) const {
    require_real();
    return wavesim::window_freq(*plan_, received, column_);
}

Eigen::VectorXcd window_freq(const LinkPlan& plan, const std::vector<cd>& received,
                             int block_column) {
    const FrameConfig& cfg = plan.config();
    const int q = cfg.pulse_len;
    const long start = long(block_column) * cfg.samples_per_symbol + cfg.window_offset();
    if (start < 0 || start + q > long(received.size()))
        throw std::out_of_range("received stream too short for window");
    Eigen::VectorXcd win(q);
    for (int i = 0; i < q; ++i) win[i] = received[std::size_t(start + i)];
    return plan.window_fft().unitary_forward(win);
}

} // namespace wavesim
