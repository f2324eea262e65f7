#include "wavesim/scenario.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace wavesim {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "wavesim 1.0.0";

[[noreturn]] void fail(const std::string& ctx, const std::string& msg) {
    throw std::runtime_error(ctx + ": " + msg);
}

template <typename T>
T get_req(const json& j, const char* key, const std::string& ctx) {
    if (!j.contains(key)) fail(ctx, std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        fail(ctx + "." + key, e.what());
    }
}

template <typename T>
T get_opt(const json& j, const char* key, const std::string& ctx, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        fail(ctx + "." + key, e.what());
    }
}

FrameConfig parse_frame(const json& j, const std::string& ctx) {
    FrameConfig f;
    f.scheme = scheme_from_string(get_req<std::string>(j, "scheme", ctx));
    f.n_subcarriers = get_req<int>(j, "n_subcarriers", ctx);
    f.delta_t = get_req<double>(j, "delta_t", ctx);
    f.delta_f = get_req<double>(j, "delta_f", ctx);
    f.samples_per_symbol = get_req<int>(j, "samples_per_symbol", ctx);
    f.grid_divisor = get_req<int>(j, "grid_divisor", ctx);
    f.pulse_len = get_req<int>(j, "pulse_len", ctx);
    f.half_packet = get_req<int>(j, "half_packet", ctx);
    f.cp_len = get_opt<int>(j, "cp_len", ctx, 0);
    f.constellation_order = get_req<int>(j, "constellation_order", ctx);
    f.power = get_opt<double>(j, "power", ctx, 1.0);
    if (j.contains("symbol_period")) {
        f.symbol_period = get_req<double>(j, "symbol_period", ctx);
    } else if (j.contains("sample_rate_hz")) {
        double fc = get_req<double>(j, "sample_rate_hz", ctx);
        if (fc <= 0.0) fail(ctx, "sample_rate_hz must be positive");
        f.symbol_period = f.samples_per_symbol / fc;
    } else {
        fail(ctx, "need symbol_period or sample_rate_hz");
    }
    f.guard_efficiency = get_opt<double>(j, "guard_efficiency", ctx, 1.0);
    return f;
}

ChannelProfile parse_channel(const json& j, const std::string& ctx) {
    ChannelProfile p;
    const double doppler = get_opt<double>(j, "doppler_hz", ctx, 0.0);
    if (j.contains("profile")) {
        std::string name = get_req<std::string>(j, "profile", ctx);
        if (name != "ETU") fail(ctx, "unknown named profile '" + name + "' (built-in: ETU)");
        p = etu_profile(doppler, 1.0); // sample period filled by the estimator
    } else {
        auto delays = get_req<std::vector<double>>(j, "delays_ns", ctx);
        auto powers = get_req<std::vector<double>>(j, "powers_db", ctx);
        if (delays.size() != powers.size()) fail(ctx, "delays_ns/powers_db length mismatch");
        for (double d : delays) p.tap_delays.push_back(d * 1e-9);
        for (double v : powers) p.tap_powers.push_back(db_to_lin(v));
        p.doppler_hz = doppler;
        p = p.normalized();
    }
    p.fading = get_opt<bool>(j, "fading", ctx, true);
    return p;
}

ScenarioSpec parse_scenario(const json& j, std::size_t index) {
    const std::string ctx = "scenarios[" + std::to_string(index) + "]";
    ScenarioSpec sc;
    sc.name = get_req<std::string>(j, "name", ctx);
    const std::string type = get_opt<std::string>(j, "type", ctx, "link");
    sc.snr_db = get_req<std::vector<double>>(j, "snr_db", ctx);
    if (j.contains("monte_carlo")) {
        const json& mc = j.at("monte_carlo");
        sc.n_channels = get_req<int>(mc, "n_channels", ctx + ".monte_carlo");
        sc.n_symbols = get_req<long>(mc, "n_symbols", ctx + ".monte_carlo");
    }
    sc.seed = get_opt<std::uint64_t>(j, "seed", ctx, 1);
    sc.output = get_opt<std::string>(j, "output", ctx, sc.name + ".csv");

    if (type == "link") {
        sc.type = ScenarioSpec::Type::Link;
        LinkScenario& l = sc.link;
        l.name = sc.name;
        if (!j.contains("frame")) fail(ctx, "missing field 'frame'");
        l.frame = parse_frame(j.at("frame"), ctx + ".frame");
        if (j.contains("pulse")) {
            const json& p = j.at("pulse");
            l.pulse_kind = pulse_kind_from_string(get_req<std::string>(p, "kind", ctx + ".pulse"));
            l.pulse_rolloff = get_opt<double>(p, "rolloff", ctx + ".pulse", 0.0);
        }
        if (!j.contains("channel")) fail(ctx, "missing field 'channel'");
        l.profile = parse_channel(j.at("channel"), ctx + ".channel");
        l.equalizer = equalizer_from_string(get_opt<std::string>(j, "equalizer", ctx, "MMSE"));
        l.evm = get_opt<double>(j, "evm", ctx, 0.0);
        l.ref_bandwidth_hz = get_opt<double>(j, "ref_bandwidth_hz", ctx, 1.92e6);
        l.f_tot_hz = get_opt<double>(j, "f_tot_hz", ctx, 0.0);
        l.gaussian_inputs = get_opt<bool>(j, "gaussian_inputs", ctx, false);
    } else if (type == "uplink") {
        sc.type = ScenarioSpec::Type::Uplink;
        UplinkScenario& u = sc.uplink;
        if (!j.contains("uplink")) fail(ctx, "missing field 'uplink'");
        const json& ju = j.at("uplink");
        const std::string uctx = ctx + ".uplink";
        u.users = get_req<int>(ju, "users", uctx);
        u.antennas = get_req<int>(ju, "antennas", uctx);
        if (ju.contains("pulse")) {
            const json& p = ju.at("pulse");
            u.pulse_kind = pulse_kind_from_string(get_req<std::string>(p, "kind", uctx + ".pulse"));
            u.rolloff = get_opt<double>(p, "rolloff", uctx + ".pulse", 0.0);
        }
        u.pulse_len = get_req<int>(ju, "pulse_len", uctx);
        u.pulse_grid_divisor = get_req<int>(ju, "pulse_grid_divisor", uctx);
        u.delta_t = get_opt<double>(ju, "delta_t", uctx, 1.0);
        u.constellation_order = get_opt<int>(ju, "constellation_order", uctx, 4);
        u.gaussian_inputs = get_opt<bool>(ju, "gaussian_inputs", uctx, false);
        u.power = get_opt<double>(ju, "power", uctx, 1.0);
        sc.remove_interference = get_opt<bool>(ju, "remove_interference", uctx, false);
        const std::string eq = get_opt<std::string>(ju, "equalizer", uctx, "ONE_TAP");
        if (eq == "ONE_TAP") sc.uplink_equalizer = UplinkEqualizer::ONE_TAP;
        else if (eq == "FULL_ISI") sc.uplink_equalizer = UplinkEqualizer::FULL_ISI;
        else fail(uctx, "equalizer must be ONE_TAP or FULL_ISI");
        if (!j.contains("channel")) fail(ctx, "missing field 'channel'");
        u.profile = parse_channel(j.at("channel"), ctx + ".channel");
        if (ju.contains("sample_period"))
            u.profile.sample_period = get_req<double>(ju, "sample_period", uctx);
    } else {
        fail(ctx, "type must be 'link' or 'uplink'");
    }
    return sc;
}

} // namespace

Manifest parse_manifest_text(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(origin + ": parse error at byte " + std::to_string(e.byte) +
                                 ": " + e.what());
    }
    Manifest m;
    if (!j.contains("scenarios"))
        throw std::runtime_error(origin + ": missing top-level 'scenarios' array");
    const json& arr = j.at("scenarios");
    if (!arr.is_array()) throw std::runtime_error(origin + ": 'scenarios' must be an array");
    for (std::size_t i = 0; i < arr.size(); ++i) m.scenarios.push_back(parse_scenario(arr[i], i));

    // names must be unique within a run
    for (std::size_t i = 0; i < m.scenarios.size(); ++i)
        for (std::size_t k = i + 1; k < m.scenarios.size(); ++k)
            if (m.scenarios[i].name == m.scenarios[k].name)
                throw std::runtime_error(origin + ": duplicate scenario name '" +
                                         m.scenarios[i].name + "'");
    return m;
}

Manifest parse_manifest(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open manifest: " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_manifest_text(ss.str(), path);
}

bool ValidationReport::ok() const {
    for (const auto& it : items)
        if (!it.ok) return false;
    return true;
}

namespace {

void check(ValidationReport& rep, const std::string& scenario, const std::string& name, bool ok,
           const std::string& detail = "") {
    rep.items.push_back({scenario, name, ok, detail});
}

std::string scheme_rule(Scheme s) {
    switch (s) {
        case Scheme::OFDM: return "delta_f = 1 and delta_t = 1 + T_cp/T";
        case Scheme::FBMC_QAM: return "delta_t*delta_f >= 1";
        case Scheme::FBMC_OQAM: return "delta_t*delta_f >= 0.5";
        case Scheme::SCM: return "N = 1 and delta_t*delta_f >= 1";
        case Scheme::TFS_QAM: return "delta_t*delta_f < 1";
        case Scheme::TFS_OQAM: return "delta_t*delta_f < 0.5";
    }
    return "?";
}

void validate_link(ValidationReport& rep, const ScenarioSpec& sc) {
    const FrameConfig& f = sc.link.frame;
    auto issues = f.validate();
    auto has = [&](const char* needle) {
        for (const auto& s : issues)
            if (s.find(needle) != std::string::npos) return true;
        return false;
    };

    {
        std::ostringstream os;
        os << "Q*delta_f*delta_t = " << f.pulse_len * f.delta_f * f.delta_t
           << " vs M*N_s = " << double(f.grid_divisor) * f.samples_per_symbol;
        check(rep, sc.name, "grid alignment Q*delta_f*delta_t = M*N_s", !has("grid alignment"),
              os.str());
    }
    {
        std::ostringstream os;
        os << to_string(f.scheme) << " packing " << f.packing();
        bool ok = true;
        for (const auto& s : issues) {
            if (s.find("requires") != std::string::npos) { ok = false; os << "; " << s; }
        }
        check(rep, sc.name, "scheme rule: " + scheme_rule(f.scheme), ok, os.str());
    }
    check(rep, sc.name, "zeta_g in (0, 1]", !has("zeta_g"));
    check(rep, sc.name, "constellation order valid for scheme",
          !has("constellation") && !has("sqrt(M)"));
    {
        bool rest = true;
        for (const auto& s : issues) {
            if (s.find("grid alignment") == std::string::npos &&
                s.find("requires") == std::string::npos && s.find("zeta_g") == std::string::npos &&
                s.find("constellation") == std::string::npos &&
                s.find("sqrt(M)") == std::string::npos)
                rest = false;
        }
        check(rep, sc.name, "frame dimensions positive and consistent", rest,
              rest ? "" : issues.front());
    }
    try {
        sc.link.profile.normalized().validate_or_throw();
        check(rep, sc.name, "channel profile valid", true);
    } catch (const std::exception& e) {
        check(rep, sc.name, "channel profile valid", false, e.what());
    }
    try {
        (void)make_pulse(sc.link.pulse_kind, f.pulse_len, f.grid_divisor, sc.link.pulse_rolloff);
        check(rep, sc.name, "pulse constructible", true);
    } catch (const std::exception& e) {
        check(rep, sc.name, "pulse constructible", false, e.what());
    }
    check(rep, sc.name, "evm_fraction >= 0", sc.link.evm >= 0.0);
}

void validate_common(ValidationReport& rep, const ScenarioSpec& sc) {
    bool inc = true;
    for (std::size_t i = 1; i < sc.snr_db.size(); ++i)
        if (sc.snr_db[i] <= sc.snr_db[i - 1]) inc = false;
    check(rep, sc.name, "snr grid strictly increasing", inc && !sc.snr_db.empty());
    check(rep, sc.name, "monte_carlo counts positive", sc.n_channels >= 1 && sc.n_symbols >= 1);
    check(rep, sc.name, "output path set", !sc.output.empty());
}

void validate_uplink(ValidationReport& rep, const ScenarioSpec& sc) {
    try {
        sc.uplink.validate_or_throw();
        check(rep, sc.name, "uplink parameters valid", true);
    } catch (const std::exception& e) {
        check(rep, sc.name, "uplink parameters valid", false, e.what());
    }
    check(rep, sc.name, "delta_t in (0, 1]",
          sc.uplink.delta_t > 0.0 && sc.uplink.delta_t <= 1.0);
}

} // namespace

ValidationReport validate_manifest(const Manifest& manifest) {
    ValidationReport rep;
    for (const auto& sc : manifest.scenarios) {
        if (sc.type == ScenarioSpec::Type::Link)
            validate_link(rep, sc);
        else
            validate_uplink(rep, sc);
        validate_common(rep, sc);
    }
    return rep;
}

std::string curve_csv_text(const AseCurve& curve) {
    std::string out = "scenario_id,snr_db,ase_bps_hz,ci_half_width,n_symbols,n_channels,seed\n";
    char line[256];
    for (const auto& pt : curve.points) {
        std::snprintf(line, sizeof(line), "%s,%.10g,%.10g,%.10g,%ld,%d,%llu\n",
                      curve.scenario_id.c_str(), pt.snr_db, pt.ase, pt.half_width, pt.n_symbols,
                      pt.n_channels, static_cast<unsigned long long>(curve.seed));
        out += line;
    }
    return out;
}

void write_curve_csv(const AseCurve& curve, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path);
    os << curve_csv_text(curve);
}

int run_manifest(const Manifest& manifest, const RunOptions& options, std::ostream& log) {
    if (manifest.scenarios.empty()) {
        log << "warning: empty scenario list, nothing to do\n";
        return 0;
    }
    ValidationReport rep = validate_manifest(manifest);
    if (!rep.ok()) {
        for (const auto& it : rep.items)
            if (!it.ok)
                log << "validation failed: " << it.scenario << ": " << it.check
                    << (it.detail.empty() ? "" : " (" + it.detail + ")") << "\n";
        return 1;
    }

    std::error_code ec;
    std::filesystem::create_directories(options.out_dir, ec);

    std::ostringstream summary;
    summary << kVersion << "\n";

    try {
        for (const auto& sc : manifest.scenarios) {
            const std::uint64_t seed = options.seed_override.value_or(sc.seed);
            const auto t0 = std::chrono::steady_clock::now();
            AseCurve curve;
            if (sc.type == ScenarioSpec::Type::Link) {
                curve = estimate_ase(sc.link, sc.snr_db, sc.n_channels, sc.n_symbols, seed,
                                     options.jobs);
            } else {
                curve = uplink_ase(sc.uplink, sc.snr_db, sc.uplink_equalizer, sc.n_channels,
                                   int(sc.n_symbols), seed, sc.remove_interference, options.jobs);
            }
            curve.scenario_id = sc.name;
            const std::string path =
                (std::filesystem::path(options.out_dir) / sc.output).string();
            write_curve_csv(curve, path);
            const auto t1 = std::chrono::steady_clock::now();
            const double secs = std::chrono::duration<double>(t1 - t0).count();
            char buf[256];
            std::snprintf(buf, sizeof(buf), "%s: seed=%llu wall=%.2fs -> %s\n", sc.name.c_str(),
                          static_cast<unsigned long long>(seed), secs, path.c_str());
            summary << buf;
            log << buf;
        }
    } catch (const std::exception& e) {
        log << "runtime error: " << e.what() << "\n";
        return 2;
    }

    std::ofstream os(std::filesystem::path(options.out_dir) / "run_summary.txt");
    os << summary.str();
    return 0;
}

} // namespace wavesim
