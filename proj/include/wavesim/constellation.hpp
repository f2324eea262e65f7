#pragma once

#include <vector>

#include "wavesim/common.hpp"

namespace wavesim {

/// Gray-mapped unit-average-power constellations. Points are indexed by the
/// raw bit pattern, so point(gray bits) follows the usual reflected mapping
/// per I/Q rail.

// L-ary PAM, E[a^2] = 1, index = bit pattern of log2(L) bits
std::vector<double> pam_points(int levels);

// M-ary square QAM, E[|c|^2] = 1, first half of the bits select I, second half Q
std::vector<cd> qam_points(int order);

// map log2(levels/order) bits (MSB first) to a point index
int bits_to_index(const std::vector<int>& bits, std::size_t offset, int n_bits);

double pam_map(const std::vector<double>& pts, const std::vector<int>& bits, std::size_t offset);
cd qam_map(const std::vector<cd>& pts, const std::vector<int>& bits, std::size_t offset);

} // namespace wavesim
