// cli.hpp: command-line front end: configuration, CSV output and the
// randomized analytic-versus-oracle validation suite.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "homlab/protocols.hpp"
#include "homlab/types.hpp"

namespace homlab::cli {

inline constexpr std::uint64_t kDefaultSeed = 20260101;

enum ExitCode : int { kSuccess = 0, kUsageError = 2, kInvariantFailure = 3 };

// Bad flags, malformed config files or parameters outside a command's domain.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SweepSpec {
    std::string var;
    protocols::Sweep range;
};

// Parses "var:start:stop:count". Throws UsageError.
SweepSpec parse_sweep(const std::string& text);

struct RunConfig {
    std::string command;
    std::optional<std::string> config_path;
    std::optional<std::string> out;
    std::optional<std::string> report;   // tomography fit report

    double eta{8.0};
    double k{-1.0};
    std::optional<double> sigma;         // rad/s
    std::optional<double> dtau_f;
    std::optional<PolarizationAmplitudes> amps;
    std::optional<SweepSpec> sweep;

    std::uint64_t seed{kDefaultSeed};
    int oracle_order{64};
    int configurations{20};

    // bell
    std::string protocol{"all"};
    bool physical{false};
    protocols::PhysicalBellSetup physical_setup;
    // dip
    double n_medium{2.903};
    // tomography
    std::vector<std::pair<double, double>> curves{{-1.0, 2.0}, {-1.0, 3.0}, {-0.8, 3.0}};
    std::vector<protocols::TomographySample> samples;
};

// Applies the fields of a JSON document on top of `base`. Throws UsageError.
RunConfig apply_config_json(const std::string& text, RunConfig base);

// Header row then one row per sweep point; shortest round-trip floats.
void write_csv(const protocols::ProtocolResult& result, std::ostream& out);
// Metadata and column provenance as a JSON object.
std::string metadata_json(const protocols::ProtocolResult& result);

struct ValidationOptions {
    std::uint64_t seed{kDefaultSeed};
    int configurations{20};
    int oracle_order{64};
    double tolerance{1e-6};
    double completeness_tolerance{1e-8};
    double convergence_tolerance{1e-8};
    int convergence_checks{3};
};

struct ValidationSummary {
    double max_abs_error{0.0};
    double max_completeness_error{0.0};       // oracle
    double max_closed_form_completeness{0.0};
    double max_convergence_delta{0.0};
    int max_order_used{0};
    bool any_under_resolved{false};
    bool pass{false};
    std::string report;  // deterministic JSON text
};

// Random configurations with eta <= 8, |K| <= 0.95, |tau| <= 4, |dtau_f| <= 4.
// Compares every closed-form probability, two-photon matrix, partial trace and
// detector mixture with the quadrature oracle.
ValidationSummary run_validation(const ValidationOptions& options);

// Entry point of the homlab executable. Returns one of the ExitCode values.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace homlab::cli
