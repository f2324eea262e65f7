#pragma once

#include <complex>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace wavesim {

using cd = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

inline double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }
inline double lin_to_db(double lin) { return 10.0 * std::log10(lin); }

inline cd unit_phasor(double cycles) {
    // e^{j 2 pi cycles}, with argument reduction for large phase accumulators
    double frac = cycles - std::floor(cycles);
    return std::polar(1.0, 2.0 * kPi * frac);
}

inline bool is_power_of_four(int m) {
    if (m < 1) return false;
    while (m % 4 == 0) m /= 4;
    return m == 1;
}

inline int ilog2(int m) {
    int b = 0;
    while ((1 << b) < m) ++b;
    if ((1 << b) != m) throw std::invalid_argument("not a power of two: " + std::to_string(m));
    return b;
}

} // namespace wavesim
