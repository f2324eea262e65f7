#include "wavesim/constellation.hpp"

#include <cmath>

namespace wavesim {

namespace {

int gray_decode(int g) {
    int b = 0;
    for (; g; g >>= 1) b ^= g;
    return b;
}

// amplitude of the PAM level selected by a gray-coded index
double pam_level(int gray_index, int levels, double step) {
    int lin = gray_decode(gray_index);
    return step * (2 * lin - (levels - 1));
}

} // namespace

std::vector<double> pam_points(int levels) {
    if (levels < 2 || (levels & (levels - 1)) != 0)
        throw std::invalid_argument("PAM levels must be a power of two >= 2");
    // E[a^2] = step^2 (L^2-1)/3 = 1
    double step = std::sqrt(3.0 / (double(levels) * levels - 1.0));
    std::vector<double> pts(levels);
    for (int i = 0; i < levels; ++i) pts[i] = pam_level(i, levels, step);
    return pts;
}

std::vector<cd> qam_points(int order) {
    if (!is_power_of_four(order))
        throw std::invalid_argument("QAM order must be a power of 4");
    int rail = static_cast<int>(std::lround(std::sqrt(double(order))));
    // per-rail power 1/2
    double step = std::sqrt(3.0 / (2.0 * (double(order) - 1.0)));
    int rail_bits = ilog2(rail);
    std::vector<cd> pts(order);
    for (int idx = 0; idx < order; ++idx) {
        int i_bits = idx >> rail_bits;
        int q_bits = idx & (rail - 1);
        pts[idx] = cd(pam_level(i_bits, rail, step), pam_level(q_bits, rail, step));
    }
    return pts;
}

int bits_to_index(const std::vector<int>& bits, std::size_t offset, int n_bits) {
    int idx = 0;
    for (int b = 0; b < n_bits; ++b) idx = (idx << 1) | (bits[offset + b] & 1);
    return idx;
}

double pam_map(const std::vector<double>& pts, const std::vector<int>& bits, std::size_t offset) {
    return pts[bits_to_index(bits, offset, ilog2(int(pts.size())))];
}

cd qam_map(const std::vector<cd>& pts, const std::vector<int>& bits, std::size_t offset) {
    return pts[bits_to_index(bits, offset, ilog2(int(pts.size())))];
}

} // namespace wavesim
