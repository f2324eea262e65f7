#include "support/reference.hpp"

#include <cmath>

namespace wavesim::reference {

Eigen::VectorXcd dft(const Eigen::VectorXcd& x) {
    const int n = int(x.size());
    Eigen::VectorXcd out(n);
    for (int k = 0; k < n; ++k) {
        cd acc(0, 0);
        for (int m = 0; m < n; ++m)
            acc += x[m] * std::polar(1.0, -2.0 * kPi * double(k) * double(m) / n);
        out[k] = acc / std::sqrt(double(n));
    }
    return out;
}

std::vector<cd> convolve(const ChannelRealization& chan, const std::vector<cd>& x) {
    std::vector<cd> y(x.size() + chan.span - 1, cd(0, 0));
    for (std::size_t n = 0; n < y.size(); ++n) {
        for (std::size_t k = 0; k < chan.delay_indices.size(); ++k) {
            const long j = long(n) - chan.delay_indices[k];
            if (j < 0 || j >= long(x.size())) continue;
            y[n] += chan.tap_at(k, long(n)) * x[std::size_t(j)];
        }
    }
    return y;
}

void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(std::size_t(n), 0.0);
    weights.assign(std::size_t(n), 0.0);
    const double sqrt_pi = std::sqrt(kPi);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // asymptotic starting guesses, then Newton on H_n
        double x;
        if (i == 0)
            x = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        else if (i == 1)
            x = nodes[0] - 1.14 * std::pow(double(n), 0.426) / nodes[0];
        else if (i == 2)
            x = 1.86 * nodes[1] - 0.86 * nodes[0];
        else if (i == 3)
            x = 1.91 * nodes[2] - 0.91 * nodes[1];
        else
            x = 2.0 * nodes[std::size_t(i - 1)] - nodes[std::size_t(i - 2)];

        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // recurrence for orthonormal Hermite
            double p1 = 1.0 / std::sqrt(sqrt_pi);
            double p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = x * std::sqrt(2.0 / (j + 1.0)) * p2 -
                     std::sqrt(double(j) / (j + 1.0)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-14) break;
        }
        nodes[std::size_t(i)] = x;
        weights[std::size_t(i)] = 2.0 / (pp * pp);
    }
    for (int i = 0; i < n / 2; ++i) {
        nodes[std::size_t(n - 1 - i)] = -nodes[std::size_t(i)];
        weights[std::size_t(n - 1 - i)] = weights[std::size_t(i)];
    }
    // nodes were found from largest down; mirror produces ascending negatives
}

double awgn_constrained_capacity(const std::vector<cd>& points, double es_n0, int order) {
    std::vector<double> t, w;
    gauss_hermite(order, t, w);
    const double n0 = 1.0 / es_n0; // E|x|^2 = 1
    const double sigma = std::sqrt(n0);
    const std::size_t m = points.size();

    double acc = 0.0;
    for (const cd& x : points) {
        for (int i = 0; i < order; ++i) {
            for (int j = 0; j < order; ++j) {
                const cd noise = sigma * cd(t[std::size_t(i)], t[std::size_t(j)]);
                const double en = std::norm(noise);
                // log2 sum_x' exp((|n|^2 - |y - x'|^2)/n0), y = x + n
                double emax = -1e300;
                std::vector<double> ex(m);
                for (std::size_t q = 0; q < m; ++q) {
                    ex[q] = (en - std::norm(x + noise - points[q])) / n0;
                    emax = std::max(emax, ex[q]);
                }
                double s = 0.0;
                for (double e : ex) s += std::exp(e - emax);
                acc += w[std::size_t(i)] * w[std::size_t(j)] *
                       (emax + std::log(s)) / std::log(2.0);
            }
        }
    }
    acc /= kPi * double(m);
    return std::log2(double(m)) - acc;
}

} // namespace wavesim::reference
