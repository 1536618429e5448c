#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "nvfield/error.hpp"
#include "nvfield/io.hpp"
#include "nvfield/params.hpp"

namespace nvfield {

enum class OutputFormat { Csv, Json };

inline OutputFormat parse_format(const std::string& s) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    throw ArgumentError("format must be 'csv' or 'json', got '" + s + "'");
}

/// Photon budget of the optical readout.
struct PhotonBudget {
    double contrast = 0.3;
    double photons_per_readout = 0.03;
    double overhead = 3e-6;  ///< s per shot
    bool central_line_only = true;

    void validate() const {
        if (!(contrast > 0.0 && contrast <= 1.0)) throw ArgumentError("contrast must be in (0, 1]");
        if (!(photons_per_readout > 0.0)) throw ArgumentError("photons_per_readout must be > 0");
        if (!(overhead >= 0.0)) throw ArgumentError("overhead must be >= 0");
    }
};

/// Everything a CLI run depends on besides the per-command flags.
///
/// The JSON form is a flat object. Accepted keys: d_gs, d_par, d_perp, g_e,
/// mu_b_over_h, a_hf, t2_star_perp, t2_star_par, t2, b_z_max,
/// envelope_exponent, contrast, photons_per_readout, overhead,
/// central_line_only, seed, out, format. Anything else is rejected.
struct RunConfig {
    NVParams nv;
    DecoherenceParams decoherence;
    PhotonBudget budget;
    std::uint64_t seed = 1;
    std::string out = ".";
    OutputFormat format = OutputFormat::Csv;

    void validate() const {
        nv.validate();
        decoherence.validate();
        budget.validate();
    }
};

namespace detail {

inline double number_of(const nlohmann::json& v, const std::string& key) {
    if (!v.is_number()) throw ArgumentError("config key '" + key + "' must be a number");
    return v.get<double>();
}

}  // namespace detail

inline void apply_config_json(RunConfig& c, const nlohmann::json& j) {
    if (!j.is_object()) throw ArgumentError("config must be a flat JSON object");
    for (const auto& [key, v] : j.items()) {
        auto num = [&] { return detail::number_of(v, key); };
        if (key == "d_gs") c.nv.d_gs = num();
        else if (key == "d_par") c.nv.d_par = num();
        else if (key == "d_perp") c.nv.d_perp = num();
        else if (key == "g_e") c.nv.g_e = num();
        else if (key == "mu_b_over_h") c.nv.mu_b_over_h = num();
        else if (key == "a_hf") c.nv.a_hf = num();
        else if (key == "t2_star_perp") c.decoherence.t2_star_perp = num();
        else if (key == "t2_star_par") c.decoherence.t2_star_par = num();
        else if (key == "t2") c.decoherence.t2 = num();
        else if (key == "b_z_max") c.decoherence.b_z_max = num();
        else if (key == "envelope_exponent") c.decoherence.envelope_exponent = num();
        else if (key == "contrast") c.budget.contrast = num();
        else if (key == "photons_per_readout") c.budget.photons_per_readout = num();
        else if (key == "overhead") c.budget.overhead = num();
        else if (key == "central_line_only") {
            if (!v.is_boolean()) throw ArgumentError("config key 'central_line_only' must be a boolean");
            c.budget.central_line_only = v.get<bool>();
        } else if (key == "seed") {
            if (!v.is_number_unsigned()) throw ArgumentError("config key 'seed' must be a non-negative integer");
            c.seed = v.get<std::uint64_t>();
        } else if (key == "out") {
            if (!v.is_string()) throw ArgumentError("config key 'out' must be a string");
            c.out = v.get<std::string>();
        } else if (key == "format") {
            if (!v.is_string()) throw ArgumentError("config key 'format' must be a string");
            c.format = parse_format(v.get<std::string>());
        } else {
            throw ArgumentError("unknown config key '" + key + "'");
        }
    }
}

/// Reads a config file. Missing or unreadable files are I/O errors; bad JSON
/// is a parse error with the offending line.
inline RunConfig load_config(const std::filesystem::path& path, RunConfig base = {}) {
    const std::string text = io::read_file(path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1;
        for (std::size_t i = 0; i < std::min<std::size_t>(e.byte, text.size()); ++i)
            if (text[i] == '\n') ++line;
        throw ParseError(path.string(), line, "invalid JSON");
    }
    apply_config_json(base, j);
    return base;
}

inline nlohmann::ordered_json config_to_json(const RunConfig& c) {
    return {{"d_gs", c.nv.d_gs},
            {"d_par", c.nv.d_par},
            {"d_perp", c.nv.d_perp},
            {"g_e", c.nv.g_e},
            {"mu_b_over_h", c.nv.mu_b_over_h},
            {"a_hf", c.nv.a_hf},
            {"t2_star_perp", c.decoherence.t2_star_perp},
            {"t2_star_par", c.decoherence.t2_star_par},
            {"t2", c.decoherence.t2},
            {"b_z_max", c.decoherence.b_z_max},
            {"envelope_exponent", c.decoherence.envelope_exponent},
            {"contrast", c.budget.contrast},
            {"photons_per_readout", c.budget.photons_per_readout},
            {"overhead", c.budget.overhead},
            {"central_line_only", c.budget.central_line_only},
            {"seed", c.seed},
            {"out", c.out},
            {"format", c.format == OutputFormat::Csv ? "csv" : "json"}};
}

}  // namespace nvfield
