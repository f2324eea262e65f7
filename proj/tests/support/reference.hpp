#pragma once

// Serial reference implementations used as independent oracles for the
// production paths. Deliberately naive; correctness over speed.

#include <Eigen/Dense>
#include <vector>

#include "wavesim/channel.hpp"
#include "wavesim/common.hpp"

namespace wavesim::reference {

// O(n^2) unitary DFT
Eigen::VectorXcd dft(const Eigen::VectorXcd& x);

// textbook double-loop time-varying convolution y[n] = sum_j h(n, n-j) x[j]
std::vector<cd> convolve(const ChannelRealization& chan, const std::vector<cd>& x);

// Gauss-Hermite nodes/weights for int e^{-t^2} f(t) dt (physicists')
void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights);

// constrained capacity of a unit-energy constellation over complex AWGN with
// per-symbol SNR es_n0 (linear), by 2-D Gauss-Hermite quadrature
double awgn_constrained_capacity(const std::vector<cd>& points, double es_n0, int order = 32);

} // namespace wavesim::reference
