#include "wavesim/ase.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

#include "wavesim/constellation.hpp"
#include "wavesim/observation.hpp"
#include "wavesim/symbol_grid.hpp"
#include "wavesim/synthesis.hpp"

namespace wavesim {

double noise_variance_for(const FrameConfig& cfg, double snr_db, double ref_bandwidth_hz) {
    if (ref_bandwidth_hz <= 0.0) throw std::invalid_argument("reference bandwidth must be > 0");
    const double fc = cfg.sample_rate();
    return cfg.power / db_to_lin(snr_db) * (fc / ref_bandwidth_hz);
}

double ase_normalization(const FrameConfig& cfg, double rolloff, double f_tot_hz) {
    if (f_tot_hz > 0.0) return cfg.symbol_period * f_tot_hz;
    double denom = cfg.n_subcarriers * cfg.packing();
    if (cfg.scheme == Scheme::SCM) denom *= 1.0 + rolloff;
    return denom;
}

double spectral_efficiency(Scheme scheme, int constellation_order, double code_rate,
                           double delta_t, double delta_f, int n_subcarriers, int cp_len,
                           double zeta_g, double rolloff) {
    const double bits = std::log2(double(constellation_order));
    const double p = delta_t * delta_f;
    switch (scheme) {
        case Scheme::OFDM:
            return code_rate * n_subcarriers * zeta_g * bits / double(n_subcarriers + cp_len);
        case Scheme::FBMC_QAM:
        case Scheme::FBMC_OQAM:
            // at the scheme's limit packing both collapse to Rc log2(M)
            return code_rate * bits * zeta_g;
        case Scheme::SCM:
            return code_rate * zeta_g * bits / (1.0 + rolloff);
        case Scheme::TFS_QAM:
            return code_rate * bits / p;
        case Scheme::TFS_OQAM:
            return code_rate * bits / (2.0 * p);
    }
    throw std::invalid_argument("bad scheme");
}

double mismatched_info_sample(cd z, int true_index, const std::vector<cd>& points, double n0) {
    const double inv = 1.0 / std::max(n0, 1e-15);
    const double et = std::norm(z - points[std::size_t(true_index)]);
    double emax = -std::numeric_limits<double>::infinity();
    thread_local std::vector<double> ex;
    ex.assign(points.size(), 0.0);
    for (std::size_t j = 0; j < points.size(); ++j) {
        ex[j] = (et - std::norm(z - points[j])) * inv;
        emax = std::max(emax, ex[j]);
    }
    double s = 0.0;
    for (double e : ex) s += std::exp(e - emax);
    return std::log2(double(points.size())) - (emax + std::log(s)) / std::log(2.0);
}

double mismatched_info_sample(double z, int true_index, const std::vector<double>& points,
                              double n0) {
    const double inv = 1.0 / std::max(n0, 1e-15);
    const double dt = z - points[std::size_t(true_index)];
    const double et = dt * dt;
    double emax = -std::numeric_limits<double>::infinity();
    thread_local std::vector<double> ex;
    ex.assign(points.size(), 0.0);
    for (std::size_t j = 0; j < points.size(); ++j) {
        const double dj = z - points[j];
        ex[j] = (et - dj * dj) * inv;
        emax = std::max(emax, ex[j]);
    }
    double s = 0.0;
    for (double e : ex) s += std::exp(e - emax);
    return std::log2(double(points.size())) - (emax + std::log(s)) / std::log(2.0);
}

namespace {

int nearest(const std::vector<double>& pts, double v) {
    int best = 0;
    double bd = std::abs(pts[0] - v);
    for (std::size_t j = 1; j < pts.size(); ++j) {
        double d = std::abs(pts[j] - v);
        if (d < bd) { bd = d; best = int(j); }
    }
    return best;
}

int nearest(const std::vector<cd>& pts, cd v) {
    int best = 0;
    double bd = std::norm(pts[0] - v);
    for (std::size_t j = 1; j < pts.size(); ++j) {
        double d = std::norm(pts[j] - v);
        if (d < bd) { bd = d; best = int(j); }
    }
    return best;
}

using CalStat = GainStat;

SymbolGrid make_gaussian_grid(const FrameConfig& cfg, std::uint64_t seed) {
    Rng rng(derive_seed(seed, 0x67617573ULL));
    SymbolGrid grid;
    const int n = cfg.n_subcarriers;
    const int cols = cfg.slots();
    grid.a.setZero(n, cols);
    grid.d.setZero(n, cols);
    const int first = cfg.first_data_column();
    for (int c = first; c < cols; ++c) {
        int l = c - cfg.half_packet;
        for (int k = 0; k < n; ++k) {
            if (cfg.is_oqam()) {
                double v = rng.normal();
                grid.a(k, c) = v;
                grid.d(k, c) = oqam_phase(k, l) * v;
            } else {
                cd v = rng.cnormal();
                grid.a(k, c) = v;
                grid.d(k, c) = v;
            }
        }
    }
    for (int c = 0; c < first; ++c) {
        grid.a.col(c) = grid.a.col(cols - first + c);
        grid.d.col(c) = grid.d.col(cols - first + c);
    }
    refresh_transmit_symbols(grid, cfg);
    return grid;
}

struct RealizationResult {
    std::vector<double> ase;      // per SNR point
    std::vector<long> n_symbols;  // info symbols per SNR point
};

struct EstimatorSetup {
    LinkScenario sc;
    LinkPlan plan;
    ChannelProfile profile;
    bool time_invariant;
    int f_cal, f_info;
    double denom;
    std::vector<cd> qam_pts;
    std::vector<double> pam_pts;

    EstimatorSetup(const LinkScenario& s, long n_symbols)
        : sc(s),
          plan(s.frame, make_pulse(s.pulse_kind, s.frame.pulse_len, s.frame.grid_divisor,
                                   s.pulse_rolloff)) {
        profile = s.profile.normalized();
        profile.sample_period = s.frame.symbol_period / s.frame.samples_per_symbol;
        profile.validate_or_throw();
        time_invariant = profile.doppler_hz == 0.0;

        const FrameConfig& cfg = s.frame;
        const long per_frame = long(cfg.n_subcarriers) * cfg.data_columns();
        f_info = int(std::clamp((n_symbols + per_frame - 1) / per_frame, 1L, 256L));
        f_cal = time_invariant ? 4 : 8;
        denom = ase_normalization(cfg, s.pulse_rolloff, s.f_tot_hz);
        if (cfg.is_oqam())
            pam_pts = pam_points(int(std::lround(std::sqrt(double(cfg.constellation_order)))));
        else
            qam_pts = qam_points(cfg.constellation_order);
    }
};

RealizationResult run_realization(const EstimatorSetup& su, const std::vector<double>& snr_db,
                                  int r, std::uint64_t seed) {
    const FrameConfig& cfg = su.sc.frame;
    const int slots = cfg.slots();
    const int n = cfg.n_subcarriers;
    const int first_col = cfg.first_data_column();
    const bool oqam = cfg.is_oqam();
    const bool gaussian = su.sc.gaussian_inputs;
    const int f_total = su.f_cal + su.f_info;

    // channel must cover every tap time the windows touch
    int dummy_span = 1;
    for (double d : su.profile.tap_delays)
        dummy_span = std::max(dummy_span, 1 + int(std::lround(d / su.profile.sample_period)));
    const int duration = cfg.frame_len() + dummy_span + cfg.pulse_len;
    ChannelRealization chan =
        realize_channel(su.profile, duration, derive_seed(seed, 0x6368ULL, r));

    // frames are reused across SNR points (noise differs per point)
    std::vector<SymbolGrid> grids;
    std::vector<std::vector<cd>> clean;
    grids.reserve(f_total);
    clean.reserve(f_total);
    for (int f = 0; f < f_total; ++f) {
        std::uint64_t fs = derive_seed(seed, 0x6672ULL, r, f);
        SymbolGrid g = gaussian ? make_gaussian_grid(cfg, fs) : map_symbols({}, cfg, fs);
        apply_evm(g, cfg, su.sc.evm, derive_seed(fs, 0x65ULL));
        std::vector<cd> x = synthesize_frame(g, su.plan);
        clean.push_back(apply_channel(chan, x));
        grids.push_back(std::move(g));
    }

    RealizationResult out;
    out.ase.assign(snr_db.size(), 0.0);
    out.n_symbols.assign(snr_db.size(), 0);

    for (std::size_t s = 0; s < snr_db.size(); ++s) {
        const double nv = noise_variance_for(cfg, snr_db[s], su.sc.ref_bandwidth_hz);

        // equalizers: one per column for time-varying channels, one shared
        // (middle column, full interference) otherwise
        std::vector<Equalizer> eqs;
        std::vector<ObservationModel> models;
        if (su.time_invariant) {
            models.emplace_back(su.plan, chan, cfg.half_packet, nv, su.sc.evm);
            eqs.push_back(make_equalizer(models[0], su.sc.equalizer));
        } else {
            models.reserve(slots);
            eqs.reserve(slots);
            for (int c = 0; c < slots; ++c) {
                models.emplace_back(su.plan, chan, c, nv, su.sc.evm);
                eqs.push_back(make_equalizer(models.back(), su.sc.equalizer));
            }
        }
        auto eq_for = [&](int c) -> const Equalizer& {
            return su.time_invariant ? eqs[0] : eqs[std::size_t(c)];
        };

        // calibration statistics keyed by subcarrier (and slot when varying)
        const int keys = n * (su.time_invariant ? 1 : slots);
        std::vector<CalStat> stats{std::size_t(keys)};
        auto key_of = [&](int k, int c) {
            return std::size_t(su.time_invariant ? k : c * n + k);
        };

        // the reduced offset-lattice receiver decodes against its own noise
        // model (thermal noise through its rows plus the transmit error
        // vector); the unmodeled waveform self-interference stays outside the
        // auxiliary law. Full-model receivers use the calibrated residual.
        const bool model_aux = su.sc.equalizer == EqualizerKind::OQAM_MF_MMSE && !gaussian;
        std::vector<Eigen::VectorXd> row_noise;
        if (model_aux) {
            row_noise.reserve(eqs.size());
            for (const auto& e : eqs) row_noise.push_back(nv * e.G.rowwise().squaredNorm());
        }
        const double evm2 = su.sc.evm * su.sc.evm;

        // equalize every data column of one noisy frame; the per-subcarrier
        // gain/variance calibration downstream absorbs any fixed scale of the
        // equalized output
        auto equalize_frame = [&](int f, auto&& consume) {
            std::vector<cd> y = clean[std::size_t(f)];
            add_awgn(y, nv, derive_seed(seed, 0x6e6f0000ULL + s, r, f));
            for (int c = first_col; c < slots; ++c) {
                Eigen::VectorXcd yf = window_freq(su.plan, y, c);
                EqualizeResult res = equalize(eq_for(c), yf, c - cfg.half_packet);
                consume(f, c, res);
            }
        };

        // pass 1: calibration
        const int cal_frames = gaussian ? f_total : su.f_cal;
        for (int f = 0; f < cal_frames; ++f) {
            equalize_frame(f, [&](int ff, int c, const EqualizeResult& res) {
                for (int k = 0; k < n; ++k) {
                    if (oqam)
                        stats[key_of(k, c)].add(cd(res.pam[k], 0.0), grids[ff].a(k, c));
                    else
                        stats[key_of(k, c)].add(res.d_hat[k], grids[ff].a(k, c));
                }
            });
        }

        double info_sum = 0.0;
        long info_n = 0;

        if (gaussian) {
            // rate from the calibrated second-order statistics
            for (const CalStat& st : stats) {
                if (st.n == 0) continue;
                double sig = std::norm(st.gain()) * st.symbol_power();
                double v = std::max(st.resid_var(), sig * 1e-15);
                double sinr = v > 0.0 ? sig / v : 0.0;
                double rate = oqam ? 0.5 * std::log2(1.0 + sinr) : std::log2(1.0 + sinr);
                info_sum += rate * double(st.n);
                info_n += st.n;
            }
        } else {
            // pass 2: mismatched information with the auxiliary law
            for (int f = su.f_cal; f < f_total; ++f) {
                equalize_frame(f, [&](int ff, int c, const EqualizeResult& res) {
                    const Eigen::VectorXd* rn =
                        model_aux ? &row_noise[su.time_invariant ? 0 : std::size_t(c)] : nullptr;
                    for (int k = 0; k < n; ++k) {
                        const CalStat& st = stats[key_of(k, c)];
                        cd mu = st.gain();
                        double mu2 = std::norm(mu);
                        if (mu2 < 1e-12) { ++info_n; continue; }
                        double n0;
                        if (model_aux) {
                            // real-part share of the receiver-model error
                            n0 = std::max(0.5 * ((*rn)[k] / mu2 + evm2), 1e-15);
                        } else {
                            n0 = std::max(st.resid_var() / mu2, 1e-15);
                        }
                        if (oqam) {
                            double z = res.pam[k] / std::real(mu);
                            double a = std::real(grids[ff].a(k, c));
                            info_sum += mismatched_info_sample(z, nearest(su.pam_pts, a),
                                                               su.pam_pts, n0);
                        } else {
                            cd z = res.d_hat[k] / mu;
                            cd a = grids[ff].a(k, c);
                            info_sum += mismatched_info_sample(z, nearest(su.qam_pts, a),
                                                               su.qam_pts, n0);
                        }
                        ++info_n;
                    }
                });
            }
        }

        const double mean_info = info_n > 0 ? info_sum / double(info_n) : 0.0;
        double ase = cfg.guard_efficiency * n * mean_info / su.denom;
        out.ase[s] = std::max(ase, 0.0);
        out.n_symbols[s] = info_n;
    }
    return out;
}

AseCurve estimate(const LinkScenario& scenario, const std::vector<double>& snr_db,
                  int n_channels, long n_symbols, std::uint64_t rng_seed, int n_jobs) {
    if (n_channels < 1 || n_symbols < 1)
        throw std::invalid_argument("n_channels and n_symbols must be >= 1");
    for (std::size_t i = 1; i < snr_db.size(); ++i)
        if (snr_db[i] <= snr_db[i - 1])
            throw std::invalid_argument("snr grid must be strictly increasing");
    scenario.frame.validate_or_throw();

    EstimatorSetup su(scenario, n_symbols);
    std::vector<RealizationResult> results{std::size_t(n_channels)};

    const int jobs = n_jobs > 0 ? n_jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
    for (int r = 0; r < n_channels; ++r)
        results[std::size_t(r)] = run_realization(su, snr_db, r, rng_seed);

    AseCurve curve;
    curve.scenario_id = scenario.name;
    curve.seed = rng_seed;
    curve.equalizer = to_string(scenario.equalizer);
    curve.evm = scenario.evm;
    curve.points.reserve(snr_db.size());
    for (std::size_t s = 0; s < snr_db.size(); ++s) {
        AsePoint pt;
        pt.snr_db = snr_db[s];
        pt.n_channels = n_channels;
        double mean = 0.0;
        for (const auto& res : results) {
            mean += res.ase[s];
            pt.n_symbols += res.n_symbols[s];
        }
        mean /= double(n_channels);
        double var = 0.0;
        for (const auto& res : results) var += (res.ase[s] - mean) * (res.ase[s] - mean);
        double hw = 1e-9;
        if (n_channels > 1)
            hw = std::max(hw, 1.96 * std::sqrt(var / double(n_channels - 1) / double(n_channels)));
        pt.ase = mean;
        pt.half_width = hw;
        curve.points.push_back(pt);
    }
    return curve;
}

} // namespace

AseCurve estimate_ase(const LinkScenario& scenario, const std::vector<double>& snr_db,
                      int n_channels, long n_symbols, std::uint64_t rng_seed, int n_jobs) {
    return estimate(scenario, snr_db, n_channels, n_symbols, rng_seed, n_jobs);
}

AseCurve estimate_ase_gaussian_inputs(const LinkScenario& scenario,
                                      const std::vector<double>& snr_db, int n_channels,
                                      long n_symbols, std::uint64_t rng_seed, int n_jobs) {
    LinkScenario sc = scenario;
    sc.gaussian_inputs = true;
    return estimate(sc, snr_db, n_channels, n_symbols, rng_seed, n_jobs);
}

} // namespace wavesim
