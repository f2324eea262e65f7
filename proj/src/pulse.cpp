#include "wavesim/pulse.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "wavesim/fft.hpp"

namespace wavesim {

std::string to_string(PulseKind k) {
    switch (k) {
        case PulseKind::RECT: return "RECT";
        case PulseKind::RRC: return "RRC";
        case PulseKind::PHYDYAS: return "PHYDYAS";
        case PulseKind::SINC_TRUNC: return "SINC_TRUNC";
    }
    return "?";
}

PulseKind pulse_kind_from_string(const std::string& name) {
    if (name == "RECT") return PulseKind::RECT;
    if (name == "RRC") return PulseKind::RRC;
    if (name == "PHYDYAS") return PulseKind::PHYDYAS;
    if (name == "SINC_TRUNC") return PulseKind::SINC_TRUNC;
    throw std::invalid_argument("unknown pulse kind: " + name);
}

namespace {

// root-raised-cosine sample at normalized time tau (symbol intervals),
// with closed-form limits at tau = 0 and |tau| = 1/(4 beta)
double rrc_sample(double tau, double beta) {
    if (beta == 0.0) {
        if (tau == 0.0) return 1.0;
        return std::sin(kPi * tau) / (kPi * tau);
    }
    if (std::abs(tau) < 1e-12) return 1.0 - beta + 4.0 * beta / kPi;
    double knee = 1.0 / (4.0 * beta);
    if (std::abs(std::abs(tau) - knee) < 1e-10) {
        double arg = kPi / (4.0 * beta);
        return (beta / std::sqrt(2.0)) *
               ((1.0 + 2.0 / kPi) * std::sin(arg) + (1.0 - 2.0 / kPi) * std::cos(arg));
    }
    double num = std::sin(kPi * tau * (1.0 - beta)) +
                 4.0 * beta * tau * std::cos(kPi * tau * (1.0 + beta));
    double den = kPi * tau * (1.0 - 16.0 * beta * beta * tau * tau);
    return num / den;
}

double sinc(double x) {
    if (x == 0.0) return 1.0;
    return std::sin(kPi * x) / (kPi * x);
}

} // namespace

PrototypePulse make_pulse(PulseKind kind, int q, int m_grid, double rolloff) {
    if (q < 1) throw std::invalid_argument("pulse length must be positive");
    if (m_grid < 1) throw std::invalid_argument("grid divisor must be positive");
    if ((kind == PulseKind::RRC || kind == PulseKind::SINC_TRUNC) &&
        (rolloff < 0.0 || rolloff > 1.0))
        throw std::invalid_argument("rolloff must lie in [0, 1]");

    PrototypePulse p;
    p.kind = kind;
    p.rolloff = (kind == PulseKind::RRC || kind == PulseKind::SINC_TRUNC) ? rolloff : 0.0;
    p.length = q;
    p.grid_divisor = m_grid;
    p.samples.setZero(q);

    const double period = double(q) / m_grid; // design symbol interval, samples
    const double center = 0.5 * (q - 1);

    switch (kind) {
        case PulseKind::RECT:
            p.samples.setConstant(1.0);
            break;
        case PulseKind::RRC:
            for (int n = 0; n < q; ++n)
                p.samples[n] = rrc_sample((n - center) / period, rolloff);
            break;
        case PulseKind::SINC_TRUNC:
            // truncated ideal pulse; rolloff only stretches the design band
            for (int n = 0; n < q; ++n)
                p.samples[n] = sinc((n - center) / period * (1.0 + rolloff));
            break;
        case PulseKind::PHYDYAS: {
            // frequency-sampling design, overlap factor 4
            constexpr double h1 = 0.971960;
            constexpr double h2 = 0.7071067811865476;
            constexpr double h3 = 0.235147;
            const double span = 4.0 * period;
            for (int n = 0; n < q; ++n) {
                double t = n - center;
                if (std::abs(t) > span / 2.0) continue;
                double c = 2.0 * kPi * t / span;
                p.samples[n] = 1.0 + 2.0 * (h1 * std::cos(c) + h2 * std::cos(2.0 * c) +
                                            h3 * std::cos(3.0 * c));
            }
            break;
        }
    }

    double norm = std::sqrt(p.samples.squaredNorm());
    if (norm <= 0.0) throw std::invalid_argument("degenerate pulse (zero energy)");
    p.samples /= norm;
    return p;
}

cd ambiguity(const PrototypePulse& pulse, int tau_samples, double nu_cycles_per_sample) {
    const int q = pulse.length;
    if (std::abs(tau_samples) >= q) throw std::invalid_argument("ambiguity shift out of range");
    cd acc(0.0, 0.0);
    int lo = std::max(0, tau_samples);
    int hi = std::min(q, q + tau_samples);
    for (int n = lo; n < hi; ++n) {
        acc += pulse.samples[n] * std::conj(pulse.samples[n - tau_samples]) *
               std::conj(unit_phasor(nu_cycles_per_sample * n));
    }
    return acc;
}

cd lattice_cross_gain(const PrototypePulse& pulse, const FrameConfig& config, int k, int l) {
    const int q = pulse.length;
    const int shift = l * config.samples_per_symbol;
    // <g_kl, g_00> with g_kl[n] = p[n - l Ns] e^{j2pi k M (n - l Ns - o)/Q} e^{j2pi df dt k l},
    // o the scheme's modulation origin; g_00 carries no exponent
    cd acc(0.0, 0.0);
    const double fk = double(k) * config.grid_divisor / q;
    const double origin = config.modulation_origin();
    for (int n = 0; n < q; ++n) {
        int m = n - shift;
        if (m < 0 || m >= q) continue;
        acc += pulse.samples[m] * unit_phasor(fk * (m - origin)) * std::conj(pulse.samples[n]);
    }
    return acc * unit_phasor(config.packing() * double(k) * double(l));
}

OrthogonalityReport check_orthogonality(const PrototypePulse& pulse, const FrameConfig& config) {
    OrthogonalityReport rep;
    const int q = pulse.length;
    const int ns = config.samples_per_symbol;
    const int lmax = (q + ns - 1) / ns; // beyond this the supports are disjoint
    const int n = config.n_subcarriers;
    const bool oqam = config.is_oqam();

    for (int l = -lmax; l <= lmax; ++l) {
        for (int k = -(n - 1); k <= n - 1; ++k) {
            if (k == 0 && l == 0) continue;
            cd g = lattice_cross_gain(pulse, config, k, l);
            rep.max_residual = std::max(rep.max_residual, std::abs(g));
            // j^{k+l} phase pattern, then keep the real part
            int e = ((k + l) % 4 + 4) % 4;
            cd jp = (e == 0) ? cd(1, 0) : (e == 1) ? cd(0, 1) : (e == 2) ? cd(-1, 0) : cd(0, -1);
            double r = std::abs(std::real(jp * g));
            rep.oqam_max_residual = std::max(rep.oqam_max_residual, r);
            rep.interference_power += oqam ? r * r : std::norm(g);
        }
    }
    rep.interference_db = rep.interference_power > 0.0
                              ? 10.0 * std::log10(rep.interference_power)
                              : -std::numeric_limits<double>::infinity();
    return rep;
}

std::vector<std::pair<double, double>> pulse_spectrum_db(const PrototypePulse& pulse,
                                                         int pad_factor) {
    const int q = pulse.length;
    const int nfft = q * std::max(1, pad_factor);
    Eigen::VectorXcd padded = Eigen::VectorXcd::Zero(nfft);
    padded.head(q) = pulse.samples;
    Fft fft(nfft);
    Eigen::VectorXcd spec = fft.forward(padded);

    double peak = 0.0;
    for (int i = 0; i < nfft; ++i) peak = std::max(peak, std::abs(spec[i]));

    std::vector<std::pair<double, double>> out;
    out.reserve(nfft / 2 + 1);
    for (int i = 0; i <= nfft / 2; ++i) {
        double mag = std::abs(spec[i]) / peak;
        double db = mag > 0.0 ? 20.0 * std::log10(mag) : -400.0;
        out.emplace_back(double(i) / nfft, db);
    }
    return out;
}

void export_pulse_csv(const PrototypePulse& pulse, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    os << "n,real,imag\n";
    char line[96];
    for (int n = 0; n < pulse.length; ++n) {
        std::snprintf(line, sizeof(line), "%d,%.17g,%.17g\n", n, pulse.samples[n].real(),
                      pulse.samples[n].imag());
        os << line;
    }
}

} // namespace wavesim
