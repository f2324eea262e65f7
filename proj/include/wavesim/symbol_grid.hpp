#pragma once

#include <Eigen/Dense>
#include <vector>

#include "wavesim/common.hpp"
#include "wavesim/frame_config.hpp"
#include "wavesim/rng.hpp"

namespace wavesim {

/// Data and transmitted symbols on the time-frequency lattice. Columns are
/// slot indices 0..2G (slot column c corresponds to signed slot l = c - G),
/// rows are subcarriers.
struct SymbolGrid {
    Eigen::MatrixXcd a;     // data symbols (imaginary part zero for OQAM)
    Eigen::MatrixXcd d;     // transmitted symbols
    Eigen::MatrixXcd d_rot; // d * e^{j 2 pi delta_f delta_t k l}

    int subcarriers() const { return int(d.rows()); }
    int slots() const { return int(d.cols()); }
};

/// Phase rotation applied to the transmitted symbol on subcarrier k, signed
/// slot l, for a given packing product delta_f*delta_t.
cd lattice_rotation(double packing, int k, int l_signed);

/// Phase pattern relating OQAM data to transmitted symbols: d = j^{k+l} a.
cd oqam_phase(int k, int l_signed);

/// Maps a bitstream onto the lattice. `bits` may be empty, in which case
/// config.required_bits() random bits are drawn from the seed. For SCM the
/// first G_cp columns replicate the last G_cp data columns (cyclic prefix).
SymbolGrid map_symbols(const std::vector<int>& bits, const FrameConfig& config,
                       std::uint64_t rng_seed);

/// Rebuilds d / d_rot from the grid's data symbols (used after perturbing a).
void refresh_transmit_symbols(SymbolGrid& grid, const FrameConfig& config);

/// Adds a zero-mean circular complex Gaussian perturbation to the transmitted
/// symbols with RMS evm_fraction times the symbol RMS. evm_fraction = 0 is
/// the identity. SCM cyclic-prefix columns are re-replicated afterwards so
/// the transmitted packet stays cyclic.
void apply_evm(SymbolGrid& grid, const FrameConfig& config, double evm_fraction,
               std::uint64_t rng_seed);

/// Stream overload: perturbs samples with RMS evm_fraction times the sample RMS.
void apply_evm(std::vector<cd>& stream, double evm_fraction, std::uint64_t rng_seed);

} // namespace wavesim
