#include <CLI11.hpp>

#include <iostream>

#include "wavesim/pulse.hpp"
#include "wavesim/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"wavesim - multicarrier waveform and achievable-rate workbench"};
    app.require_subcommand(1);

    std::string manifest_path;
    std::string out_dir = ".";
    int jobs = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;

    auto* run = app.add_subcommand("run", "execute a scenario manifest and write CSV curves");
    run->add_option("manifest", manifest_path, "manifest JSON file")->required();
    run->add_option("--out", out_dir, "output directory (default .)");
    run->add_option("--jobs", jobs, "worker count (default: all cores)");
    run->add_option("--seed", seed, "override every scenario seed")
        ->each([&](const std::string&) { seed_set = true; });

    auto* validate = app.add_subcommand("validate", "check a manifest against the scheme rules");
    validate->add_option("manifest", manifest_path, "manifest JSON file")->required();

    std::string pulse_kind = "RRC";
    int pulse_q = 1280, pulse_m = 10;
    double pulse_rolloff = 0.1;
    std::string pulse_out = "pulse.csv";
    auto* pulse = app.add_subcommand("pulse", "export a prototype pulse as CSV (n, real, imag)");
    pulse->add_option("--kind", pulse_kind, "RECT | RRC | PHYDYAS | SINC_TRUNC");
    pulse->add_option("--q", pulse_q, "pulse length in samples");
    pulse->add_option("--m", pulse_m, "grid divisor (design interval = Q/M)");
    pulse->add_option("--rolloff", pulse_rolloff, "excess bandwidth (RRC/SINC_TRUNC)");
    pulse->add_option("--out", pulse_out, "output CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(run)) {
            wavesim::Manifest m = wavesim::parse_manifest(manifest_path);
            wavesim::RunOptions opt;
            if (seed_set) opt.seed_override = seed;
            opt.jobs = jobs;
            opt.out_dir = out_dir;
            return wavesim::run_manifest(m, opt, std::cout);
        }
        if (app.got_subcommand(validate)) {
            wavesim::Manifest m = wavesim::parse_manifest(manifest_path);
            wavesim::ValidationReport rep = wavesim::validate_manifest(m);
            for (const auto& it : rep.items) {
                std::cout << (it.ok ? "ok   " : "FAIL ") << it.scenario << ": " << it.check;
                if (!it.detail.empty()) std::cout << " [" << it.detail << "]";
                std::cout << "\n";
            }
            return rep.ok() ? 0 : 1;
        }
        if (app.got_subcommand(pulse)) {
            auto p = wavesim::make_pulse(wavesim::pulse_kind_from_string(pulse_kind), pulse_q,
                                         pulse_m, pulse_rolloff);
            wavesim::export_pulse_csv(p, pulse_out);
            std::cout << "wrote " << pulse_out << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        // manifest/validation problems -> 1, execution problems -> 2
        return app.got_subcommand(validate) || app.got_subcommand(run) ? 1 : 2;
    }
    return 0;
}
