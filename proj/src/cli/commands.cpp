// The homlab command line: dip, bell, tomography, discriminate, validate.

#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "homlab/analytic.hpp"
#include "homlab/cli.hpp"
#include "homlab/errors.hpp"
#include "homlab/format.hpp"

namespace homlab::cli {

namespace {

using protocols::ProtocolResult;
using protocols::Sweep;

struct Streams {
    std::ostream& out;
    std::ostream& err;
};

Sweep sweep_for(const RunConfig& cfg, const std::string& var, Sweep fallback) {
    if (!cfg.sweep) return fallback;
    if (cfg.sweep->var != var)
        throw UsageError("command '" + cfg.command + "' sweeps '" + var + "', not '" + cfg.sweep->var + "'");
    return cfg.sweep->range;
}

void require(bool ok, const std::string& what) {
    if (!ok) throw InvariantViolation(what);
}

void require_unit_interval(const ProtocolResult& r, const std::string& column, double slack = 1e-12) {
    for (double x : r.column(column).values)
        require(x >= -slack && x <= 1.0 + slack, column + " left [0, 1]: " + format_double(x));
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw UsageError("failed writing '" + path + "'");
}

void emit(const RunConfig& cfg, const ProtocolResult& result, Streams io) {
    if (!cfg.out) {
        write_csv(result, io.out);
        return;
    }
    std::ostringstream csv;
    write_csv(result, csv);
    write_text(*cfg.out, csv.str());
    write_text(*cfg.out + ".meta.json", metadata_json(result));
}

// Copies every column of `part` into `into` with a prefix.
void merge(ProtocolResult& into, const ProtocolResult& part, const std::string& prefix) {
    for (const auto& c : part.columns()) into.add_column(prefix + c.name, c.provenance, c.values);
    for (const auto& [key, value] : part.metadata()) into.set_metadata(prefix + key, value);
}

int cmd_dip(const RunConfig& cfg, Streams io) {
    const Sweep range = sweep_for(cfg, "scaled_delay", {-3.0, 3.0, 121});
    ProtocolResult result = protocols::dip_scan(range, cfg.n_medium);
    if (cfg.amps) {
        const auto spectral = SpectralParams::dimensionless(cfg.eta, cfg.k);
        std::vector<double> pc;
        for (double x : result.sweep())
            pc.push_back(analytic::coincidence_probability(*cfg.amps, ScaledConfig::post_only(x, 0.0, 0.0), spectral));
        result.add_column("pc_input", "configured input state, no dephasing", std::move(pc));
        result.set_metadata("k", format_double(cfg.k));
    }
    for (const auto& c : result.columns()) require_unit_interval(result, c.name);
    emit(cfg, result, io);
    return kSuccess;
}

std::vector<std::pair<std::string, protocols::BellProtocol>> bell_protocols(const std::string& name) {
    using protocols::BellProtocol;
    const std::vector<std::pair<std::string, BellProtocol>> all{{"parallel", BellProtocol::parallel},
                                                                {"perpendicular", BellProtocol::perpendicular},
                                                                {"one_sided", BellProtocol::one_sided},
                                                                {"none", BellProtocol::none}};
    if (name == "all") return all;
    for (const auto& p : all)
        if (p.first == name) return {p};
    throw UsageError("unknown Bell protocol '" + name + "' (parallel, perpendicular, one_sided, none, all)");
}

int cmd_bell(const RunConfig& cfg, Streams io) {
    if (!(std::abs(cfg.k) <= 1.0)) throw UsageError("|k| must be <= 1");
    const auto chosen = bell_protocols(cfg.protocol);

    std::unique_ptr<ProtocolResult> result;
    if (cfg.physical) {
        auto setup = cfg.physical_setup;
        setup.k = cfg.k;
        setup.eta = cfg.eta;
        if (cfg.sigma) setup.sigma = *cfg.sigma;
        if (cfg.sweep && cfg.sweep->var == "path_mm") {
            result = std::make_unique<ProtocolResult>(protocols::free_path_scan(setup.sigma, cfg.k, cfg.sweep->range));
        } else {
            const Sweep range = sweep_for(cfg, "thickness_mm", {0.0, 20.0, 401});
            result = std::make_unique<ProtocolResult>("thickness_mm", range.values());
            for (const auto& [name, p] : chosen) {
                const auto part = protocols::bell_scan_physical(p, setup, range);
                merge(*result, part, chosen.size() > 1 ? name + "_" : "");
            }
        }
    } else {
        const double dtau_f = cfg.dtau_f.value_or(-1.36);
        const Sweep range = sweep_for(cfg, "tau", {-1.0, 4.0, 251});
        result = std::make_unique<ProtocolResult>("tau", range.values());
        for (const auto& [name, p] : chosen) {
            const auto part = protocols::bell_scan(p, dtau_f, cfg.k, cfg.eta, range);
            merge(*result, part, chosen.size() > 1 ? name + "_" : "");
        }
    }
    for (const auto& c : result->columns())
        if (c.name.find("_abs") != std::string::npos || c.name == "coherence") require_unit_interval(*result, c.name);
    emit(cfg, *result, io);
    return kSuccess;
}

nlohmann::ordered_json fit_entry(const protocols::TomographyFit& fit) {
    return {{"k_hat", fit.k_hat},
            {"abs_dtau_f_hat", fit.abs_dtau_f_hat},
            {"residual_norm", fit.residual_norm},
            {"iterations", fit.iterations},
            {"peak_unresolved", fit.peak_unresolved}};
}

std::vector<protocols::TomographySample> samples_of(const ProtocolResult& r, const std::string& column) {
    std::vector<protocols::TomographySample> out;
    const auto& v = r.column(column).values;
    for (std::size_t i = 0; i < r.rows(); ++i) out.push_back({r.sweep()[i], v[i]});
    return out;
}

int cmd_tomography(const RunConfig& cfg, Streams io) {
    for (const auto& [k, d] : cfg.curves)
        if (!(k >= -1.0 && k < 1.0) || !(d > 0.0)) throw UsageError("tomography curves need K in [-1, 1) and |dtau_f| > 0");
    const Sweep range = sweep_for(cfg, "tauA", {0.0, 10.0, 201});
    const ProtocolResult scan = protocols::deadtime_coherence_scan(cfg.curves, range);

    using nlohmann::ordered_json;
    ordered_json report;
    ordered_json curves = ordered_json::array();
    for (std::size_t i = 0; i < cfg.curves.size(); ++i) {
        const auto& column = scan.columns()[i + 1];
        const auto fit = protocols::tomography_fit(samples_of(scan, column.name));
        auto entry = fit_entry(fit);
        entry["column"] = column.name;
        entry["k"] = cfg.curves[i].first;
        entry["abs_dtau_f"] = cfg.curves[i].second;
        curves.push_back(std::move(entry));
    }
    report["curves"] = std::move(curves);
    auto plain = fit_entry(protocols::tomography_fit(samples_of(scan, "kappa_abs")));
    plain["column"] = "kappa_abs";
    report["kappa"] = std::move(plain);
    if (!cfg.samples.empty()) report["samples"] = fit_entry(protocols::tomography_fit(cfg.samples));

    emit(cfg, scan, io);
    const std::string text = report.dump(2) + "\n";
    if (cfg.report)
        write_text(*cfg.report, text);
    else if (cfg.out)
        write_text(*cfg.out + ".fit.json", text);
    else
        io.err << text;
    return kSuccess;
}

int cmd_discriminate(const RunConfig& cfg, Streams io) {
    if (cfg.k != -1.0) throw UsageError("discriminate runs at K = -1");
    const double dtau_f = cfg.dtau_f.value_or(-3.0);
    const Sweep range = sweep_for(cfg, "tauA", {0.0, 12.0, 241});
    ProtocolResult result = protocols::discrimination_scan(dtau_f, cfg.eta, range);
    const auto h = protocols::pseudo_hom_scan(dtau_f, cfg.eta, range, Pol::H);
    const auto v = protocols::pseudo_hom_scan(dtau_f, cfg.eta, range, Pol::V);
    for (const auto* part : {&h, &v}) {
        const std::string prefix = part == &h ? "pseudo_h_" : "pseudo_v_";
        for (const auto& c : part->columns()) {
            require_unit_interval(*part, c.name, 1e-9);
            result.add_column(prefix + c.name, c.provenance, c.values);
        }
    }
    for (std::size_t i = 0; i < result.rows(); ++i) {
        require(std::abs(h.column("c_fraction").values[i] + v.column("c_fraction").values[i] - 1.0) < 1e-9,
                "pseudo-HOM c fractions do not add to 1");
        require(std::abs(h.column("raw_fraction").values[i] + v.column("raw_fraction").values[i] - 1.0) < 1e-9,
                "pseudo-HOM raw fractions do not add to 1");
    }
    for (const char* name : {"trace_distance", "trace_distance_nu", "success_idealized", "success_exact", "pc"})
        require_unit_interval(result, name, 1e-9);
    emit(cfg, result, io);
    return kSuccess;
}

int cmd_validate(const RunConfig& cfg, Streams io) {
    ValidationOptions options;
    options.seed = cfg.seed;
    options.configurations = cfg.configurations;
    options.oracle_order = cfg.oracle_order;
    const ValidationSummary summary = run_validation(options);
    if (cfg.out)
        write_text(*cfg.out, summary.report);
    else
        io.out << summary.report;
    if (!summary.pass) io.err << "validation failed: max error " << format_double(summary.max_abs_error) << '\n';
    return summary.pass ? kSuccess : kInvariantFailure;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot read config '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::uint64_t seed_from_env() {
    const char* env = std::getenv("HOMLAB_SEED");
    if (env == nullptr || *env == '\0') return kDefaultSeed;
    const std::string text(env);
    if (text.find_first_not_of("0123456789") != std::string::npos)
        throw UsageError("HOMLAB_SEED must be a non-negative integer");
    try {
        return std::stoull(text);
    } catch (const std::out_of_range&) {
        throw UsageError("HOMLAB_SEED is out of range");
    }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"HOM interference under engineered dephasing: closed forms, oracle checks and protocol scans", "homlab"};
    app.require_subcommand(1, 1);
    app.fallthrough();

    std::string config_path, out_path, report_path, sweep_text, protocol;
    std::uint64_t seed = 0;
    int order = 0, configurations = 0;
    double k = 0.0, eta = 0.0, dtau_f = 0.0, n_medium = 0.0, sigma = 0.0;
    std::vector<double> amps;
    bool physical = false;

    auto* o_config = app.add_option("--config", config_path, "JSON config file; flags override its values");
    auto* o_out = app.add_option("--out", out_path, "output file (default: standard output)");
    auto* o_report = app.add_option("--report", report_path, "tomography fit report file");
    auto* o_seed = app.add_option("--seed", seed, "seed of the randomized validation (fallback: HOMLAB_SEED)");
    auto* o_order = app.add_option("--oracle-order", order, "oracle node order floor, 16..256");
    auto* o_sweep = app.add_option("--sweep", sweep_text, "var:start:stop:count");
    auto* o_k = app.add_option("--k", k, "frequency correlation K in [-1, 1]");
    auto* o_eta = app.add_option("--eta", eta, "mu / sigma");
    auto* o_dtau = app.add_option("--dtau-f", dtau_f, "scaled free path difference");
    auto* o_sigma = app.add_option("--sigma", sigma, "bandwidth in rad/s (physical scans)");
    auto* o_amps = app.add_option("--amps", amps, "re,im of C_HH, C_HV, C_VH, C_VV (8 numbers)")
                       ->delimiter(',')
                       ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    auto* o_protocol = app.add_option("--protocol", protocol, "bell: parallel, perpendicular, one_sided, none or all");
    auto* o_physical = app.add_flag("--physical", physical, "bell: sweep slab thickness in mm (or path_mm)");
    auto* o_n = app.add_option("--n-medium", n_medium, "dip: refractive index of the noisy medium");
    auto* o_count = app.add_option("--configurations", configurations, "validate: number of random configurations");

    app.add_subcommand("dip", "HOM dips: classical K = 0, K = -1 and the noisy-medium dip");
    app.add_subcommand("bell", "|Lambda_c| along the Bell-engineering protocols");
    app.add_subcommand("tomography", "dead-time decoherence curves and (K, |dtau_f|) fits");
    app.add_subcommand("discriminate", "c/b photon discrimination and pseudo-HOM dips");
    app.add_subcommand("validate", "randomized closed-form versus oracle report (JSON)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsageError;
    }

    try {
        RunConfig cfg;
        cfg.seed = seed_from_env();
        if (o_config->count() > 0) {
            cfg.config_path = config_path;
            cfg = apply_config_json(read_file(config_path), cfg);
        }
        cfg.command = app.get_subcommands().front()->get_name();
        if (o_out->count() > 0) cfg.out = out_path;
        if (o_report->count() > 0) cfg.report = report_path;
        if (o_seed->count() > 0) cfg.seed = seed;
        if (o_order->count() > 0) cfg.oracle_order = order;
        if (o_sweep->count() > 0) cfg.sweep = parse_sweep(sweep_text);
        if (o_k->count() > 0) cfg.k = k;
        if (o_eta->count() > 0) cfg.eta = eta;
        if (o_dtau->count() > 0) cfg.dtau_f = dtau_f;
        if (o_sigma->count() > 0) cfg.sigma = sigma;
        if (o_protocol->count() > 0) cfg.protocol = protocol;
        if (o_physical->count() > 0) cfg.physical = physical;
        if (o_n->count() > 0) cfg.n_medium = n_medium;
        if (o_count->count() > 0) cfg.configurations = configurations;
        if (o_amps->count() > 0) {
            if (amps.size() != 8) throw UsageError("--amps needs 8 numbers (re, im for HH, HV, VH, VV)");
            cfg.amps = PolarizationAmplitudes::normalize({amps[0], amps[1]}, {amps[2], amps[3]}, {amps[4], amps[5]},
                                                         {amps[6], amps[7]});
        }

        const Streams io{out, err};
        static const std::map<std::string, int (*)(const RunConfig&, Streams)> commands{
            {"dip", cmd_dip},
            {"bell", cmd_bell},
            {"tomography", cmd_tomography},
            {"discriminate", cmd_discriminate},
            {"validate", cmd_validate}};
        return commands.at(cfg.command)(cfg, io);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsageError;
    } catch (const ContractViolation& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsageError;
    } catch (const UnitConversionError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        err << "invariant violation: " << e.what() << '\n';
        return kInvariantFailure;
    }
}

}  // namespace homlab::cli
