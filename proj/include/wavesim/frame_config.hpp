#pragma once

#include <string>
#include <vector>

#include "wavesim/common.hpp"

namespace wavesim {

enum class Scheme { OFDM, FBMC_QAM, FBMC_OQAM, SCM, TFS_QAM, TFS_OQAM };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& name);

/// Full parameterization of one waveform scenario on the sampled
/// time-frequency lattice. Symbols are spaced N_s samples apart in time and
/// grid_divisor DFT bins apart over a pulse_len-point grid.
struct FrameConfig {
    Scheme scheme = Scheme::OFDM;
    int n_subcarriers = 1;       // N
    double delta_t = 1.0;        // time packing factor
    double delta_f = 1.0;        // frequency packing factor
    int samples_per_symbol = 1;  // N_s
    int grid_divisor = 1;        // M: Q * delta_f * delta_t = M * N_s
    int pulse_len = 1;           // Q, samples
    int half_packet = 1;         // G: packet spans 2G+1 slots
    int cp_len = 0;              // G_cp: symbols (SCM) or samples (OFDM)
    int constellation_order = 4; // M-ary
    double power = 1.0;          // P (linear)
    double symbol_period = 1.0;  // T_s, seconds
    double guard_efficiency = 1.0; // zeta_g in (0, 1]

    bool is_oqam() const { return scheme == Scheme::FBMC_OQAM || scheme == Scheme::TFS_OQAM; }
    bool is_scm() const { return scheme == Scheme::SCM; }
    int slots() const { return 2 * half_packet + 1; }
    double packing() const { return delta_t * delta_f; }
    double sample_rate() const { return samples_per_symbol / symbol_period; }

    // transmit samples emitted per block (OFDM blocks carry a prepended CP)
    int block_tx_len() const {
        return scheme == Scheme::OFDM ? pulse_len + cp_len : pulse_len;
    }
    // receiver window offset into a block (OFDM skips the CP)
    int window_offset() const { return scheme == Scheme::OFDM ? cp_len : 0; }

    int frame_len() const {
        int tail = std::max(block_tx_len(), samples_per_symbol) - samples_per_symbol;
        return slots() * samples_per_symbol + tail;
    }

    // first grid column carrying payload (SCM replicates the first cp_len
    // columns from the tail as a cyclic prefix)
    int first_data_column() const { return is_scm() ? cp_len : 0; }
    int data_columns() const { return slots() - first_data_column(); }

    // time origin of the subcarrier exponents within a block. OQAM real-field
    // orthogonality needs the phase referenced to the symmetric pulse center;
    // the other schemes keep the block start so plain IDFT blocks come out
    // exactly.
    double modulation_origin() const { return is_oqam() ? 0.5 * (pulse_len - 1) : 0.0; }

    int bits_per_symbol() const {
        int m = is_oqam() ? static_cast<int>(std::lround(std::sqrt(double(constellation_order))))
                          : constellation_order;
        return ilog2(m);
    }
    long required_bits() const {
        return static_cast<long>(n_subcarriers) * data_columns() * bits_per_symbol();
    }

    /// Returns the list of violated constraints (empty when valid). Messages
    /// name the parameter rule that failed so the CLI can report them as-is.
    std::vector<std::string> validate() const;
    void validate_or_throw() const;
};

} // namespace wavesim
