#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wavesim/ase.hpp"
#include "wavesim/mimo_uplink.hpp"

namespace wavesim {

/// One entry of a run manifest: either a waveform link sweep or a
/// massive-MIMO uplink sweep.
struct ScenarioSpec {
    enum class Type { Link, Uplink };
    Type type = Type::Link;
    std::string name;
    LinkScenario link;
    UplinkScenario uplink;
    UplinkEqualizer uplink_equalizer = UplinkEqualizer::ONE_TAP;
    bool remove_interference = false;
    std::vector<double> snr_db;
    int n_channels = 100;
    long n_symbols = 2000;
    std::uint64_t seed = 1;
    std::string output;
};

struct Manifest {
    std::vector<ScenarioSpec> scenarios;
};

/// Parses a JSON manifest; errors carry the offending scenario/field path.
Manifest parse_manifest(const std::string& path);
Manifest parse_manifest_text(const std::string& text, const std::string& origin);

struct ValidationReport {
    struct Item {
        std::string scenario;
        std::string check;
        bool ok = true;
        std::string detail;
    };
    std::vector<Item> items;
    bool ok() const;
};

/// Lists every constraint checked and its status.
ValidationReport validate_manifest(const Manifest& manifest);

std::string curve_csv_text(const AseCurve& curve);
void write_curve_csv(const AseCurve& curve, const std::string& path);

struct RunOptions {
    std::optional<std::uint64_t> seed_override;
    int jobs = 0;
    std::string out_dir = ".";
};

/// Executes every scenario, writing one CSV per scenario plus a run summary.
/// Returns 0 on success, 1 on validation failure, 2 on runtime error.
int run_manifest(const Manifest& manifest, const RunOptions& options, std::ostream& log);

} // namespace wavesim
