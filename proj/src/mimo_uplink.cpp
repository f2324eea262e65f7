#include "wavesim/mimo_uplink.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

#include "wavesim/constellation.hpp"
#include "wavesim/fft.hpp"

namespace wavesim {

int UplinkScenario::symbol_spacing() const {
    double t = delta_t * nyquist_period();
    int s = int(std::lround(t));
    if (std::abs(t - s) > 1e-9 || s < 1)
        throw std::invalid_argument("delta_t * T must be an integer number of samples");
    return s;
}

void UplinkScenario::validate_or_throw() const {
    if (users < 1 || antennas < 1) throw std::invalid_argument("users/antennas must be >= 1");
    if (!(delta_t > 0.0 && delta_t <= 1.0)) throw std::invalid_argument("delta_t must be in (0,1]");
    if (pulse_len % pulse_grid_divisor != 0)
        throw std::invalid_argument("pulse length must be a multiple of the grid divisor");
    (void)symbol_spacing();
    if (!gaussian_inputs && !is_power_of_four(constellation_order))
        throw std::invalid_argument("constellation order must be a power of 4");
    if (power <= 0.0) throw std::invalid_argument("power must be positive");
}

namespace {

// combined receive pulses z_{u,n} = p * h_{u,n}
std::vector<std::vector<Eigen::VectorXcd>> receive_pulses(
    const UplinkScenario& sc, const std::vector<std::vector<ChannelRealization>>& chans,
    const PrototypePulse& pulse) {
    std::vector<std::vector<Eigen::VectorXcd>> z(sc.users);
    for (int u = 0; u < sc.users; ++u) {
        z[u].resize(sc.antennas);
        for (int a = 0; a < sc.antennas; ++a) {
            const ChannelRealization& h = chans[u][a];
            Eigen::VectorXcd out = Eigen::VectorXcd::Zero(pulse.length + h.span - 1);
            for (std::size_t k = 0; k < h.delay_indices.size(); ++k) {
                const int j = h.delay_indices[k];
                const cd c = h.taps(k, 0);
                for (int n = 0; n < pulse.length; ++n) out[n + j] += c * pulse.samples[n];
            }
            z[u][a] = std::move(out);
        }
    }
    return z;
}

// r_{u,u'}[m] = sum_n sum_j z_{u',n}[j + m Ns] conj(z_{u,n}[j])
Eigen::VectorXcd cross_correlation(const std::vector<Eigen::VectorXcd>& zu,
                                   const std::vector<Eigen::VectorXcd>& zup, int ns, int max_lag) {
    Eigen::VectorXcd r = Eigen::VectorXcd::Zero(2 * max_lag + 1);
    for (std::size_t n = 0; n < zu.size(); ++n) {
        const auto& a = zu[n];
        const auto& b = zup[n];
        for (int m = -max_lag; m <= max_lag; ++m) {
            cd acc(0, 0);
            const long shift = long(m) * ns;
            const long lo = std::max(0L, -shift);
            const long hi = std::min(long(a.size()), long(b.size()) - shift);
            for (long j = lo; j < hi; ++j) acc += b[j + shift] * std::conj(a[j]);
            r[m + max_lag] += acc;
        }
    }
    return r;
}

struct EffectiveSet {
    // g[u][u'] effective cross channel, lag index centered at max_lag
    std::vector<std::vector<Eigen::VectorXcd>> g;
    int max_lag = 0;
};

EffectiveSet effective_channels(const UplinkScenario& sc,
                                const std::vector<std::vector<ChannelRealization>>& chans,
                                const PrototypePulse& pulse) {
    const int ns = sc.symbol_spacing();
    auto z = receive_pulses(sc, chans, pulse);
    const int zlen = int(z[0][0].size());
    const int max_lag = (zlen - 1 + ns - 1) / ns;
    const double scale = std::sqrt(sc.power / sc.antennas);

    EffectiveSet set;
    set.max_lag = max_lag;
    set.g.assign(sc.users, std::vector<Eigen::VectorXcd>(sc.users));
    for (int u = 0; u < sc.users; ++u)
        for (int up = 0; up < sc.users; ++up)
            set.g[u][up] = scale * cross_correlation(z[u], z[up], ns, max_lag);
    return set;
}

EffectiveChannel summarize(const EffectiveSet& set, int u, double noise_var, double scale) {
    // noise at the matched-filter output has per-symbol power
    // noise_var * sum_n ||z_{u,n}||^2 = noise_var * r_uu[0] / scale
    EffectiveChannel eff;
    const Eigen::VectorXcd& guu = set.g[u][u];
    eff.center = set.max_lag;
    eff.gamma = std::real(guu[set.max_lag]);
    eff.noise_var = noise_var * std::real(guu[set.max_lag]) / scale;
    eff.isi_var = guu.squaredNorm() - std::norm(guu[set.max_lag]);
    eff.interuser_var = 0.0;
    for (std::size_t up = 0; up < set.g[u].size(); ++up) {
        if (int(up) == u) continue;
        eff.interuser_var += set.g[u][up].squaredNorm();
    }
    eff.interference_var = eff.interuser_var + eff.noise_var;

    // truncate where taps fall 60 dB below the zero-lag gain
    const double floor = 1e-6 * std::norm(guu[set.max_lag]);
    int lo = set.max_lag, hi = set.max_lag;
    for (int m = 0; m < guu.size(); ++m) {
        if (std::norm(guu[m]) >= floor) {
            lo = std::min(lo, m);
            hi = std::max(hi, m);
        }
    }
    eff.g = guu.segment(lo, hi - lo + 1);
    eff.center = set.max_lag - lo;
    return eff;
}

std::vector<cd> draw_symbols(const UplinkScenario& sc, int n_symbols, Rng& rng,
                             const std::vector<cd>& pts, std::vector<int>* idx_out) {
    std::vector<cd> d(std::size_t(n_symbols), cd(0, 0));
    if (sc.gaussian_inputs) {
        for (auto& v : d) v = rng.cnormal();
    } else {
        for (std::size_t i = 0; i < d.size(); ++i) {
            int idx = int(rng.uniform_u32(std::uint32_t(pts.size())));
            d[i] = pts[std::size_t(idx)];
            if (idx_out) (*idx_out)[i] = idx;
        }
    }
    return d;
}

} // namespace

UplinkRun simulate_uplink(const UplinkScenario& sc, int n_symbols, double noise_var,
                          std::uint64_t rng_seed, bool remove_interference) {
    sc.validate_or_throw();
    if (n_symbols < 1) throw std::invalid_argument("n_symbols must be >= 1");

    auto chans = make_mimo_channels(sc.users, sc.antennas, sc.profile, rng_seed);
    PrototypePulse pulse = make_pulse(sc.pulse_kind, sc.pulse_len, sc.pulse_grid_divisor,
                                      sc.rolloff);
    EffectiveSet set = effective_channels(sc, chans, pulse);
    const double scale = std::sqrt(sc.power / sc.antennas);

    std::vector<cd> pts;
    if (!sc.gaussian_inputs) pts = qam_points(sc.constellation_order);

    UplinkRun run;
    run.y.assign(sc.users, {});
    run.symbols.assign(sc.users, {});
    run.true_idx.assign(sc.users, std::vector<int>(std::size_t(n_symbols), 0));
    run.effective.reserve(sc.users);

    for (int u = 0; u < sc.users; ++u) {
        Rng rng(derive_seed(rng_seed, 0x73796dULL, u));
        run.symbols[u] = draw_symbols(sc, n_symbols, rng,
                                      pts, sc.gaussian_inputs ? nullptr : &run.true_idx[u]);
        run.effective.push_back(summarize(set, u, noise_var, scale));
    }

    for (int u = 0; u < sc.users; ++u) {
        const EffectiveChannel& eff = run.effective[u];
        std::vector<cd> y(std::size_t(n_symbols), cd(0, 0));

        if (remove_interference) {
            for (int l = 0; l < n_symbols; ++l) y[std::size_t(l)] = eff.gamma * run.symbols[u][std::size_t(l)];
            Rng nrng(derive_seed(rng_seed, 0x6e6fULL, u));
            const double s = std::sqrt(eff.noise_var);
            for (auto& v : y) v += s * nrng.cnormal();
        } else {
            for (int up = 0; up < sc.users; ++up) {
                const Eigen::VectorXcd& g = set.g[u][up];
                for (int m = -set.max_lag; m <= set.max_lag; ++m) {
                    const cd c = g[m + set.max_lag];
                    if (std::norm(c) == 0.0) continue;
                    for (int l = 0; l < n_symbols; ++l) {
                        const int lp = l - m;
                        if (lp < 0 || lp >= n_symbols) continue;
                        y[std::size_t(l)] += c * run.symbols[up][std::size_t(lp)];
                    }
                }
            }
            // matched-filter noise: colored with spectrum noise_var * R_uu(w);
            // generated by circulant spectral factorization
            if (noise_var > 0.0) {
                const Eigen::VectorXcd& guu = set.g[u][u];
                int k = 1;
                while (k < n_symbols + int(guu.size()) + 1) k <<= 1;
                Eigen::VectorXcd spec = Eigen::VectorXcd::Zero(k);
                for (int m = -set.max_lag; m <= set.max_lag; ++m)
                    spec[(m % k + k) % k] = guu[m + set.max_lag] / scale;
                Fft fft(k);
                Eigen::VectorXcd psd = fft.forward(spec);
                Rng nrng(derive_seed(rng_seed, 0x6e6fULL, u));
                Eigen::VectorXcd xi(k);
                for (int i = 0; i < k; ++i)
                    xi[i] = std::sqrt(std::max(psd[i].real(), 0.0) * noise_var) * nrng.cnormal();
                Eigen::VectorXcd eta = fft.backward(xi) / std::sqrt(double(k));
                for (int l = 0; l < n_symbols; ++l) y[std::size_t(l)] += eta[l];
            }
        }
        run.y[u] = std::move(y);
    }
    return run;
}

UplinkRun simulate_uplink_reference(const UplinkScenario& sc, int n_symbols, double noise_var,
                                    std::uint64_t rng_seed) {
    sc.validate_or_throw();
    auto chans = make_mimo_channels(sc.users, sc.antennas, sc.profile, rng_seed);
    PrototypePulse pulse = make_pulse(sc.pulse_kind, sc.pulse_len, sc.pulse_grid_divisor,
                                      sc.rolloff);
    auto z = receive_pulses(sc, chans, pulse);
    const int ns = sc.symbol_spacing();
    const double scale = std::sqrt(sc.power / sc.antennas);

    std::vector<cd> pts;
    if (!sc.gaussian_inputs) pts = qam_points(sc.constellation_order);

    UplinkRun run;
    run.symbols.assign(sc.users, {});
    run.true_idx.assign(sc.users, std::vector<int>(std::size_t(n_symbols), 0));
    for (int u = 0; u < sc.users; ++u) {
        Rng rng(derive_seed(rng_seed, 0x73796dULL, u));
        run.symbols[u] = draw_symbols(sc, n_symbols, rng, pts,
                                      sc.gaussian_inputs ? nullptr : &run.true_idx[u]);
    }

    const int zlen = int(z[0][0].size());
    const long stream_len = long(n_symbols - 1) * ns + zlen;

    // per-antenna received streams
    std::vector<std::vector<cd>> rx(std::size_t(sc.antennas),
                                    std::vector<cd>(std::size_t(stream_len), cd(0, 0)));
    for (int a = 0; a < sc.antennas; ++a) {
        for (int u = 0; u < sc.users; ++u) {
            const Eigen::VectorXcd& pz = z[u][a];
            for (int l = 0; l < n_symbols; ++l) {
                const cd d = scale * run.symbols[u][std::size_t(l)];
                const long base = long(l) * ns;
                for (int j = 0; j < zlen; ++j) rx[a][std::size_t(base + j)] += d * pz[j];
            }
        }
        if (noise_var > 0.0) {
            Rng nrng(derive_seed(rng_seed, 0x726566ULL, a));
            const double s = std::sqrt(noise_var);
            for (auto& v : rx[a]) v += s * nrng.cnormal();
        }
    }

    // matched-filter combining sampled at the symbol spacing
    run.y.assign(sc.users, std::vector<cd>(std::size_t(n_symbols), cd(0, 0)));
    for (int u = 0; u < sc.users; ++u) {
        for (int a = 0; a < sc.antennas; ++a) {
            const Eigen::VectorXcd& pz = z[u][a];
            for (int l = 0; l < n_symbols; ++l) {
                const long base = long(l) * ns;
                cd acc(0, 0);
                for (int j = 0; j < zlen; ++j) acc += rx[a][std::size_t(base + j)] * std::conj(pz[j]);
                run.y[u][std::size_t(l)] += acc;
            }
        }
    }

    EffectiveSet set = effective_channels(sc, chans, pulse);
    for (int u = 0; u < sc.users; ++u)
        run.effective.push_back(summarize(set, u, noise_var, scale));
    return run;
}

double mean_relative_interuser_power(const UplinkScenario& sc, int n_realizations,
                                     std::uint64_t rng_seed) {
    sc.validate_or_throw();
    PrototypePulse pulse = make_pulse(sc.pulse_kind, sc.pulse_len, sc.pulse_grid_divisor,
                                      sc.rolloff);
    // ratio of ensemble means (a per-draw ratio would be biased upward at
    // small array sizes)
    double inter_acc = 0.0;
    double sig_acc = 0.0;
    for (int r = 0; r < n_realizations; ++r) {
        auto chans = make_mimo_channels(sc.users, sc.antennas, sc.profile,
                                        derive_seed(rng_seed, 0x726eULL, r));
        EffectiveSet set = effective_channels(sc, chans, pulse);
        for (int u = 0; u < sc.users; ++u) {
            for (int up = 0; up < sc.users; ++up) {
                if (up == u) continue;
                inter_acc += set.g[u][up].squaredNorm();
            }
            sig_acc += std::norm(set.g[u][u][set.max_lag]);
        }
    }
    return inter_acc / sig_acc;
}

AseCurve uplink_ase(const UplinkScenario& sc, const std::vector<double>& snr_db,
                    UplinkEqualizer equalizer, int n_channels, int n_symbols,
                    std::uint64_t rng_seed, bool remove_interference, int n_jobs) {
    sc.validate_or_throw();
    for (std::size_t i = 1; i < snr_db.size(); ++i)
        if (snr_db[i] <= snr_db[i - 1])
            throw std::invalid_argument("snr grid must be strictly increasing");
    if (equalizer == UplinkEqualizer::FULL_ISI && !sc.gaussian_inputs)
        throw std::invalid_argument("FULL_ISI rate is defined for Gaussian inputs");

    std::vector<cd> pts;
    if (!sc.gaussian_inputs) pts = qam_points(sc.constellation_order);
    const double denom = sc.delta_t * (1.0 + sc.rolloff);

    std::vector<std::vector<double>> per_real{std::size_t(n_channels)};
    const int jobs = n_jobs > 0 ? n_jobs : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic) num_threads(jobs)
    for (int r = 0; r < n_channels; ++r) {
        std::vector<double> vals(snr_db.size(), 0.0);
        for (std::size_t s = 0; s < snr_db.size(); ++s) {
            // per-user symbol energy P over per-sample noise level
            const double nv = sc.power / db_to_lin(snr_db[s]);
            UplinkRun run = simulate_uplink(sc, n_symbols,
                                            nv, derive_seed(rng_seed, 0x72756eULL, r, s),
                                            remove_interference);
            double sum_user = 0.0;
            for (int u = 0; u < sc.users; ++u) {
                const EffectiveChannel& eff = run.effective[u];
                double rate = 0.0;
                if (equalizer == UplinkEqualizer::FULL_ISI) {
                    if (remove_interference) {
                        rate = std::log2(1.0 + eff.gamma * eff.gamma /
                                                   std::max(eff.noise_var, 1e-30));
                    } else {
                        // Gaussian rate of the ISI channel, interference as white noise
                        const int k = 2048;
                        Eigen::VectorXcd taps = Eigen::VectorXcd::Zero(k);
                        for (int m = 0; m < eff.g.size(); ++m)
                            taps[((m - eff.center) % k + k) % k] = eff.g[m];
                        Fft fft(k);
                        Eigen::VectorXcd resp = fft.forward(taps);
                        const double floor_var = std::max(eff.interference_var, 1e-30);
                        for (int i = 0; i < k; ++i)
                            rate += std::log2(1.0 + std::norm(resp[i]) / floor_var);
                        rate /= double(k);
                    }
                } else {
                    // single-tap detection; everything else is noise,
                    // calibrated empirically
                    const auto& y = run.y[u];
                    const auto& d = run.symbols[u];
                    const int n_cal = std::min(std::max(64, n_symbols / 8), n_symbols);
                    GainStat st;
                    for (int l = 0; l < n_cal; ++l) st.add(y[std::size_t(l)], d[std::size_t(l)]);
                    cd mu = st.gain();
                    double mu2 = std::norm(mu);
                    if (mu2 > 1e-30) {
                        if (sc.gaussian_inputs) {
                            rate = std::log2(1.0 + mu2 * st.symbol_power() /
                                                       std::max(st.resid_var(), 1e-30));
                        } else {
                            const double n0 = std::max(st.resid_var() / mu2, 1e-15);
                            double acc = 0.0;
                            long cnt = 0;
                            for (int l = n_cal; l < n_symbols; ++l) {
                                cd z = y[std::size_t(l)] / mu;
                                acc += mismatched_info_sample(z, run.true_idx[u][std::size_t(l)],
                                                              pts, n0);
                                ++cnt;
                            }
                            rate = cnt > 0 ? acc / double(cnt) : 0.0;
                        }
                    }
                }
                sum_user += rate;
            }
            vals[s] = std::max(sum_user / double(sc.users) / denom, 0.0);
        }
        per_real[std::size_t(r)] = std::move(vals);
    }

    AseCurve curve;
    curve.scenario_id = "uplink";
    curve.seed = rng_seed;
    curve.equalizer = equalizer == UplinkEqualizer::ONE_TAP ? "ONE_TAP" : "FULL_ISI";
    for (std::size_t s = 0; s < snr_db.size(); ++s) {
        AsePoint pt;
        pt.snr_db = snr_db[s];
        pt.n_channels = n_channels;
        pt.n_symbols = long(n_symbols) * n_channels;
        double mean = 0.0;
        for (const auto& v : per_real) mean += v[s];
        mean /= double(n_channels);
        double var = 0.0;
        for (const auto& v : per_real) var += (v[s] - mean) * (v[s] - mean);
        pt.ase = mean;
        pt.half_width = n_channels > 1
                            ? std::max(1e-9, 1.96 * std::sqrt(var / double(n_channels - 1) /
                                                              double(n_channels)))
                            : 1e-9;
        curve.points.push_back(pt);
    }
    return curve;
}

} // namespace wavesim
