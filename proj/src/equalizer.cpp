#include "wavesim/equalizer.hpp"

#include "wavesim/symbol_grid.hpp"

namespace wavesim {

std::string to_string(EqualizerKind k) {
    switch (k) {
        case EqualizerKind::MF: return "MF";
        case EqualizerKind::LS: return "LS";
        case EqualizerKind::MMSE: return "MMSE";
        case EqualizerKind::OQAM_MF_MMSE: return "OQAM_MF_MMSE";
    }
    return "?";
}

EqualizerKind equalizer_from_string(const std::string& name) {
    if (name == "MF") return EqualizerKind::MF;
    if (name == "LS") return EqualizerKind::LS;
    if (name == "MMSE") return EqualizerKind::MMSE;
    if (name == "OQAM_MF_MMSE") return EqualizerKind::OQAM_MF_MMSE;
    throw std::invalid_argument("unknown equalizer kind: " + name);
}

Eigen::VectorXcd Equalizer::phase_comp(int l_signed) const {
    const int n = int(G.rows());
    Eigen::VectorXcd eps(n);
    for (int k = 0; k < n; ++k)
        eps[k] = std::conj(unit_phasor(packing * double(k) * double(l_signed)));
    return eps;
}

Equalizer Equalizer::with_residual_variance(const Eigen::VectorXd& v) const {
    if (kind != EqualizerKind::OQAM_MF_MMSE)
        throw std::logic_error("residual-variance stage applies to OQAM_MF_MMSE only");
    if (v.size() != mf_gain.size()) throw std::invalid_argument("variance vector length != N");
    Equalizer out = *this;
    for (int k = 0; k < mf_gain.size(); ++k) {
        cd a = mf_gain[k];
        double den = std::norm(a) + std::max(v[k], 0.0);
        cd g = den > 0.0 ? std::conj(a) / den : cd(0.0, 0.0);
        out.G.row(k) = g * mf_base.row(k);
    }
    return out;
}

Equalizer make_equalizer(const ObservationModel& model, EqualizerKind kind) {
    Equalizer eq;
    eq.kind = kind;
    eq.packing = model.synthetic() ? 1.0 : model.plan().config().packing();
    // real-part PAM extraction follows the scheme, not the equalizer kind
    eq.oqam = model.synthetic() ? kind == EqualizerKind::OQAM_MF_MMSE
                                : model.plan().config().is_oqam();

    const Eigen::MatrixXcd& h0 = model.block_freq(0);
    const int n = model.block_size();

    switch (kind) {
        case EqualizerKind::MF:
            eq.G = h0.adjoint();
            break;
        case EqualizerKind::LS: {
            Eigen::MatrixXcd h = model.total_freq();
            Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(h);
            cod.setThreshold(1e-10);
            eq.ls_rank = int(cod.rank());
            if (eq.ls_rank < 1)
                throw std::runtime_error("LS system is rank deficient: rank 0");
            Eigen::MatrixXcd pinv = cod.pseudoInverse();
            eq.G = pinv.middleRows(model.half_width() * n, n);
            break;
        }
        case EqualizerKind::MMSE: {
            if (model.noise_var() <= 0.0)
                throw std::invalid_argument("MMSE requires a positive noise variance");
            if (model.synthetic()) {
                Eigen::MatrixXcd r = model.received_covariance_freq();
                eq.G = r.llt().solve(h0).adjoint();
            } else {
                // solve against the time-domain covariance, then move the N
                // solution columns onto the DFT grid
                const Eigen::MatrixXcd& r = model.received_covariance_time();
                Eigen::MatrixXcd m0 = model.block_map_time(0);
                Eigen::MatrixXcd x = r.llt().solve(m0); // Q x N
                Eigen::MatrixXcd xf(x.rows(), x.cols());
                for (int k = 0; k < x.cols(); ++k)
                    xf.col(k) = model.plan().window_fft().unitary_forward(Eigen::VectorXcd(x.col(k)));
                eq.G = xf.adjoint();
            }
            break;
        }
        case EqualizerKind::OQAM_MF_MMSE: {
            // reduced receiver: channel-independent analysis bank, then a
            // per-subcarrier one-tap stage on the bank outputs
            if (model.synthetic()) {
                eq.mf_base = h0.adjoint();
            } else {
                eq.mf_base = model.plan().filter_bank_freq().adjoint();
            }
            eq.mf_gain = (eq.mf_base * h0).diagonal();
            // default scalar stage assumes noise-only residual; estimators
            // refresh it from a calibration pass
            Eigen::VectorXd v = model.noise_var() * eq.mf_base.rowwise().squaredNorm();
            eq.G = eq.mf_base;
            eq = eq.with_residual_variance(v);
            break;
        }
    }
    return eq;
}

EqualizeResult equalize(const Equalizer& eq, const Eigen::VectorXcd& y_freq, int l_signed) {
    if (y_freq.size() != eq.G.cols()) throw std::invalid_argument("received vector length != Q");
    EqualizeResult out;
    out.d_hat = eq.phase_comp(l_signed).asDiagonal() * (eq.G * y_freq);
    if (eq.oqam) {
        const int n = int(out.d_hat.size());
        out.pam.resize(n);
        for (int k = 0; k < n; ++k)
            out.pam[k] = std::real(std::conj(oqam_phase(k, l_signed)) * out.d_hat[k]);
    }
    return out;
}

Eigen::VectorXd equalizer_mse(const ObservationModel& model, const Equalizer& eq) {
    const Eigen::MatrixXcd h = model.total_freq();
    const int n = model.block_size();
    const int l0 = model.half_width();
    Eigen::MatrixXcd gh = eq.G * h; // N x (2L+1)N
    Eigen::VectorXd mse(n);
    const double evm2 = model.evm_fraction() * model.evm_fraction();
    for (int k = 0; k < n; ++k) {
        Eigen::RowVectorXcd row = gh.row(k);
        double sig = std::norm(row[l0 * n + k] - cd(1.0, 0.0));
        double rest = row.squaredNorm() - std::norm(row[l0 * n + k]);
        mse[k] = sig + rest + evm2 * gh.row(k).squaredNorm() +
                 model.noise_var() * eq.G.row(k).squaredNorm();
    }
    return mse;
}

} // namespace wavesim
