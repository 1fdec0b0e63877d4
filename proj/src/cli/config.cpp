#include <cmath>
#include <sstream>

#include <json.hpp>

#include "homlab/cli.hpp"
#include "homlab/errors.hpp"

namespace homlab::cli {

using nlohmann::json;

SweepSpec parse_sweep(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() != 4 || parts[0].empty())
        throw UsageError("sweep must look like var:start:stop:count, got '" + text + "'");
    SweepSpec spec{parts[0], {}};
    try {
        std::size_t used = 0;
        spec.range.start = std::stod(parts[1], &used);
        if (used != parts[1].size()) throw std::invalid_argument("start");
        spec.range.stop = std::stod(parts[2], &used);
        if (used != parts[2].size()) throw std::invalid_argument("stop");
        spec.range.count = std::stoi(parts[3], &used);
        if (used != parts[3].size()) throw std::invalid_argument("count");
    } catch (const std::logic_error&) {
        throw UsageError("sweep '" + text + "' has a malformed number");
    }
    try {
        spec.range.validate();
    } catch (const ContractViolation& e) {
        throw UsageError(e.what());
    }
    return spec;
}

namespace {

double number(const json& j, const char* key) {
    const json& v = j.at(key);
    if (!v.is_number()) throw UsageError(std::string("config field '") + key + "' must be a number");
    return v.get<double>();
}

template <typename F>
void if_present(const json& j, const char* key, F&& apply) {
    if (j.contains(key) && !j.at(key).is_null()) apply();
}

PolarizationAmplitudes amplitudes_from(const json& v) {
    if (!v.is_array() || v.size() != 8) throw UsageError("config field 'amps' needs 8 numbers (re, im for HH, HV, VH, VV)");
    std::array<double, 8> x{};
    for (std::size_t i = 0; i < 8; ++i) {
        if (!v[i].is_number()) throw UsageError("config field 'amps' must hold numbers");
        x[i] = v[i].get<double>();
    }
    try {
        return PolarizationAmplitudes::normalize({x[0], x[1]}, {x[2], x[3]}, {x[4], x[5]}, {x[6], x[7]});
    } catch (const Error& e) {
        throw UsageError(std::string("amps: ") + e.what());
    }
}

SweepSpec sweep_from(const json& v) {
    if (v.is_string()) return parse_sweep(v.get<std::string>());
    if (!v.is_object()) throw UsageError("config field 'sweep' must be a string or an object");
    SweepSpec s;
    s.var = v.value("var", "");
    s.range.start = number(v, "start");
    s.range.stop = number(v, "stop");
    if (!v.at("count").is_number_integer()) throw UsageError("sweep count must be an integer");
    s.range.count = v.at("count").get<int>();
    if (s.var.empty()) throw UsageError("sweep needs a 'var'");
    try {
        s.range.validate();
    } catch (const ContractViolation& e) {
        throw UsageError(e.what());
    }
    return s;
}

}  // namespace

RunConfig apply_config_json(const std::string& text, RunConfig base) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw UsageError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw UsageError("config must be a JSON object");

    try {
        if_present(j, "command", [&] { base.command = j.at("command").get<std::string>(); });
        if_present(j, "out", [&] { base.out = j.at("out").get<std::string>(); });
        if_present(j, "report", [&] { base.report = j.at("report").get<std::string>(); });
        if_present(j, "eta", [&] { base.eta = number(j, "eta"); });
        if_present(j, "k", [&] { base.k = number(j, "k"); });
        if_present(j, "sigma", [&] { base.sigma = number(j, "sigma"); });
        if_present(j, "mu", [&] {
            if (!j.contains("sigma")) throw UsageError("config field 'mu' needs 'sigma'");
            base.eta = number(j, "mu") / number(j, "sigma");
        });
        if_present(j, "dtau_f", [&] { base.dtau_f = number(j, "dtau_f"); });
        if_present(j, "amps", [&] { base.amps = amplitudes_from(j.at("amps")); });
        if_present(j, "sweep", [&] { base.sweep = sweep_from(j.at("sweep")); });
        if_present(j, "seed", [&] {
            if (!j.at("seed").is_number_unsigned()) throw UsageError("config field 'seed' must be a non-negative integer");
            base.seed = j.at("seed").get<std::uint64_t>();
        });
        if_present(j, "oracle_order", [&] { base.oracle_order = j.at("oracle_order").get<int>(); });
        if_present(j, "configurations", [&] { base.configurations = j.at("configurations").get<int>(); });
        if_present(j, "protocol", [&] { base.protocol = j.at("protocol").get<std::string>(); });
        if_present(j, "n_medium", [&] { base.n_medium = number(j, "n_medium"); });
        if_present(j, "physical", [&] {
            const json& p = j.at("physical");
            if (p.is_boolean()) {
                base.physical = p.get<bool>();
                return;
            }
            if (!p.is_object()) throw UsageError("config field 'physical' must be a boolean or an object");
            base.physical = true;
            auto& s = base.physical_setup;
            if_present(p, "delta_n", [&] { s.delta_n = number(p, "delta_n"); });
            if_present(p, "n_base", [&] { s.n_base = number(p, "n_base"); });
            if_present(p, "path_difference_mm", [&] { s.path_difference_mm = number(p, "path_difference_mm"); });
        });
        if_present(j, "curves", [&] {
            base.curves.clear();
            for (const auto& c : j.at("curves")) {
                if (!c.is_array() || c.size() != 2) throw UsageError("each tomography curve is a [K, |dtau_f|] pair");
                base.curves.emplace_back(c[0].get<double>(), c[1].get<double>());
            }
        });
        if_present(j, "samples", [&] {
            base.samples.clear();
            for (const auto& s : j.at("samples")) {
                if (!s.is_array() || s.size() != 2) throw UsageError("each tomography sample is a [tauA, |coherence|] pair");
                base.samples.push_back({s[0].get<double>(), s[1].get<double>()});
            }
        });
    } catch (const json::exception& e) {
        throw UsageError(std::string("config has a field of the wrong type: ") + e.what());
    }
    return base;
}

}  // namespace homlab::cli
