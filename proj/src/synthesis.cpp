#include "wavesim/synthesis.hpp"

namespace wavesim {

LinkPlan::LinkPlan(FrameConfig config, PrototypePulse pulse)
    : cfg_(std::move(config)), pulse_(std::move(pulse)), fft_(cfg_.pulse_len) {
    cfg_.validate_or_throw();
    if (pulse_.length != cfg_.pulse_len)
        throw std::invalid_argument("pulse length does not match config Q");
    if (std::abs(pulse_.energy() - 1.0) > 1e-10)
        throw std::invalid_argument("pulse must have unit energy");

    const int q = cfg_.pulse_len;
    const int n = cfg_.n_subcarriers;
    const double inv_sqrt_n = 1.0 / std::sqrt(double(n));
    const double origin = cfg_.modulation_origin();
    p_t_.resize(q, n);
    for (int k = 0; k < n; ++k) {
        const double fk = double(k) * cfg_.grid_divisor / q;
        for (int m = 0; m < q; ++m)
            p_t_(m, k) = pulse_.samples[m] * unit_phasor(fk * (m - origin)) * inv_sqrt_n;
    }

    if (cfg_.scheme == Scheme::OFDM && cfg_.cp_len > 0) {
        b_t_.resize(q + cfg_.cp_len, n);
        b_t_.topRows(cfg_.cp_len) = p_t_.bottomRows(cfg_.cp_len);
        b_t_.bottomRows(q) = p_t_;
    } else {
        b_t_ = p_t_;
    }

    // sqrt(P T_s / N) with the sample-period factor folded into the
    // unit-norm pulse; the 1/sqrt(N) lives in the filter bank columns. The
    // Q/Q_b factor keeps the mean power at P when the cyclic prefix extends
    // the block (the continuous rect spans the full T_s).
    scale_ = std::sqrt(cfg_.power * cfg_.samples_per_symbol * double(q) / double(b_t_.rows()));
}

const Eigen::MatrixXcd& LinkPlan::filter_bank_freq() const {
    std::call_once(p_f_once_, [this] {
        p_f_.resize(p_t_.rows(), p_t_.cols());
        for (int k = 0; k < p_t_.cols(); ++k)
            p_f_.col(k) = fft_.unitary_forward(p_t_.col(k));
    });
    return p_f_;
}

const Eigen::MatrixXcd& LinkPlan::block_gram() const {
    std::call_once(gram_once_, [this] { gram_ = b_t_ * b_t_.adjoint(); });
    return gram_;
}

Eigen::VectorXcd synthesize_block(const Eigen::VectorXcd& rotated_column,
                                  const PrototypePulse& pulse, const FrameConfig& config,
                                  const Fft* fft) {
    const int q = config.pulse_len;
    const int n = config.n_subcarriers;
    if (rotated_column.size() != n) throw std::invalid_argument("grid column length != N");
    if (pulse.length != q) throw std::invalid_argument("pulse length != Q");
    if (std::abs(pulse.energy() - 1.0) > 1e-10)
        throw std::invalid_argument("pulse must have unit energy");

    // place symbol k on DFT bin k*M (with the scheme's phase origin), inverse
    // transform, window by the pulse
    const double origin = config.modulation_origin();
    Eigen::VectorXcd bins = Eigen::VectorXcd::Zero(q);
    for (int k = 0; k < n; ++k) {
        const cd ph = std::conj(unit_phasor(double(k) * config.grid_divisor * origin / q));
        bins[(k * config.grid_divisor) % q] += rotated_column[k] * ph;
    }

    Eigen::VectorXcd time(q);
    if (fft && fft->size() == q) {
        fft->backward(bins.data(), time.data());
    } else {
        Fft local(q);
        local.backward(bins.data(), time.data());
    }
    const double inv_sqrt_n = 1.0 / std::sqrt(double(n));
    for (int m = 0; m < q; ++m) time[m] *= pulse.samples[m] * inv_sqrt_n;
    return time;
}

Eigen::VectorXcd synthesize_block_filter_bank(const Eigen::VectorXcd& rotated_column,
                                              const PrototypePulse& pulse,
                                              const FrameConfig& config) {
    const int q = config.pulse_len;
    const int n = config.n_subcarriers;
    if (rotated_column.size() != n) throw std::invalid_argument("grid column length != N");
    if (pulse.length != q) throw std::invalid_argument("pulse length != Q");

    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(q);
    const double inv_sqrt_n = 1.0 / std::sqrt(double(n));
    const double origin = config.modulation_origin();
    for (int k = 0; k < n; ++k) {
        const double fk = double(k) * config.grid_divisor / q;
        const cd dk = rotated_column[k];
        for (int m = 0; m < q; ++m)
            out[m] += dk * pulse.samples[m] * unit_phasor(fk * (m - origin)) * inv_sqrt_n;
    }
    return out;
}

std::vector<cd> synthesize_frame(const SymbolGrid& grid, const LinkPlan& plan,
                                 std::size_t max_samples) {
    const FrameConfig& cfg = plan.config();
    if (grid.subcarriers() != cfg.n_subcarriers || grid.slots() != cfg.slots())
        throw std::invalid_argument("grid shape does not match config");
    const std::size_t len = std::size_t(cfg.frame_len());
    if (len > max_samples) throw std::length_error("frame exceeds configured maximum length");

    const int ns = cfg.samples_per_symbol;
    const int cp = cfg.scheme == Scheme::OFDM ? cfg.cp_len : 0;
    std::vector<cd> x(len, cd(0, 0));
    for (int c = 0; c < cfg.slots(); ++c) {
        Eigen::VectorXcd s = synthesize_block(grid.d_rot.col(c), plan.pulse(), cfg,
                                              &plan.window_fft());
        const std::size_t base = std::size_t(c) * ns;
        // cyclic prefix: copy of the block tail, transmitted first
        for (int m = 0; m < cp; ++m) x[base + m] += plan.frame_scale() * s[s.size() - cp + m];
        for (int m = 0; m < s.size(); ++m) x[base + cp + m] += plan.frame_scale() * s[m];
    }
    return x;
}

} // namespace wavesim
