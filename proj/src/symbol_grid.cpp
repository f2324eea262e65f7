#include "wavesim/symbol_grid.hpp"

#include "wavesim/constellation.hpp"

namespace wavesim {

cd lattice_rotation(double packing, int k, int l_signed) {
    return unit_phasor(packing * double(k) * double(l_signed));
}

cd oqam_phase(int k, int l_signed) {
    // j^(k+l); l may be negative
    int e = ((k + l_signed) % 4 + 4) % 4;
    switch (e) {
        case 0: return cd(1, 0);
        case 1: return cd(0, 1);
        case 2: return cd(-1, 0);
        default: return cd(0, -1);
    }
}

void refresh_transmit_symbols(SymbolGrid& grid, const FrameConfig& config) {
    const int n = grid.subcarriers();
    const int cols = grid.slots();
    grid.d_rot.resize(n, cols);
    for (int c = 0; c < cols; ++c) {
        int l = c - config.half_packet;
        for (int k = 0; k < n; ++k)
            grid.d_rot(k, c) = grid.d(k, c) * lattice_rotation(config.packing(), k, l);
    }
}

SymbolGrid map_symbols(const std::vector<int>& bits_in, const FrameConfig& config,
                       std::uint64_t rng_seed) {
    config.validate_or_throw();
    const int n = config.n_subcarriers;
    const int cols = config.slots();
    const long need = config.required_bits();

    std::vector<int> bits = bits_in;
    if (bits.empty()) {
        Rng rng(derive_seed(rng_seed, 0x6d61u));
        bits.resize(need);
        for (auto& b : bits) b = rng.bit() ? 1 : 0;
    }
    if (long(bits.size()) != need)
        throw std::invalid_argument("bit count mismatch: got " + std::to_string(bits.size()) +
                                    ", need " + std::to_string(need));

    SymbolGrid grid;
    grid.a.setZero(n, cols);
    grid.d.setZero(n, cols);

    const int bps = config.bits_per_symbol();
    std::size_t pos = 0;
    if (config.is_oqam()) {
        int levels = static_cast<int>(std::lround(std::sqrt(double(config.constellation_order))));
        auto pts = pam_points(levels);
        for (int c = 0; c < cols; ++c) {
            int l = c - config.half_packet;
            for (int k = 0; k < n; ++k) {
                double v = pam_map(pts, bits, pos);
                pos += bps;
                grid.a(k, c) = v;
                grid.d(k, c) = oqam_phase(k, l) * v;
            }
        }
    } else {
        auto pts = qam_points(config.constellation_order);
        int first = config.first_data_column();
        for (int c = first; c < cols; ++c) {
            for (int k = 0; k < n; ++k) {
                cd v = qam_map(pts, bits, pos);
                pos += bps;
                grid.a(k, c) = v;
                grid.d(k, c) = v;
            }
        }
        // SCM cyclic prefix: leading columns replicate the packet tail
        for (int c = 0; c < first; ++c) {
            grid.a.col(c) = grid.a.col(cols - first + c);
            grid.d.col(c) = grid.d.col(cols - first + c);
        }
    }
    refresh_transmit_symbols(grid, config);
    return grid;
}

void apply_evm(SymbolGrid& grid, const FrameConfig& config, double evm_fraction,
               std::uint64_t rng_seed) {
    if (evm_fraction < 0.0) throw std::invalid_argument("evm_fraction must be >= 0");
    if (evm_fraction == 0.0) return;

    double rms = std::sqrt(grid.d.squaredNorm() / double(grid.d.size()));
    double sigma = evm_fraction * rms;
    Rng rng(derive_seed(rng_seed, 0x65766du));
    const int first = config.first_data_column();
    for (int c = first; c < grid.slots(); ++c)
        for (int k = 0; k < grid.subcarriers(); ++k)
            grid.d(k, c) += sigma * rng.cnormal();
    // keep the SCM packet cyclic: prefix columns copy the perturbed tail
    for (int c = 0; c < first; ++c)
        grid.d.col(c) = grid.d.col(grid.slots() - first + c);
    refresh_transmit_symbols(grid, config);
}

void apply_evm(std::vector<cd>& stream, double evm_fraction, std::uint64_t rng_seed) {
    if (evm_fraction < 0.0) throw std::invalid_argument("evm_fraction must be >= 0");
    if (evm_fraction == 0.0 || stream.empty()) return;
    double acc = 0.0;
    for (const auto& x : stream) acc += std::norm(x);
    double sigma = evm_fraction * std::sqrt(acc / double(stream.size()));
    Rng rng(derive_seed(rng_seed, 0x65766du, 1));
    for (auto& x : stream) x += sigma * rng.cnormal();
}

} // namespace wavesim
