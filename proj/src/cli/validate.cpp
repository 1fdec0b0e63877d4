// Randomized agreement check between the closed forms and the oracle.

#include <algorithm>
#include <cmath>
#include <random>

#include <json.hpp>

#include "homlab/analytic.hpp"
#include "homlab/cli.hpp"
#include "homlab/oracle.hpp"

namespace homlab::cli {

namespace {

constexpr double kStateThreshold = 1e-6;

struct Case {
    PolarizationAmplitudes amps;
    PolarizationAmplitudes separable;
    ScaledConfig sc;
    SpectralParams spectral;
};

class CaseGenerator {
public:
    explicit CaseGenerator(std::uint64_t seed) : rng_(seed) {}

    Case next() {
        const auto amps = PolarizationAmplitudes::normalize(unit(), unit(), unit(), unit());
        const auto sep = PolarizationAmplitudes::separable(unit(), unit());
        const double dtau_f = uniform(-4.0, 4.0);
        const double s0h = uniform(-2.0, 2.0), s0v = uniform(-2.0, 2.0);
        const double s1h = uniform(-2.0, 2.0), s1v = uniform(-2.0, 2.0);
        const double tauA = uniform(-4.0, 4.0), tauB = uniform(-4.0, 4.0);
        const double eta = uniform(0.5, 8.0), k = uniform(-0.95, 0.95);
        return {amps, sep, ScaledConfig::from_delays(dtau_f, s0h, s0v, s1h, s1v, tauA, tauB),
                SpectralParams::dimensionless(eta, k)};
    }

private:
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    cplx unit() {
        const double re = uniform(-1.0, 1.0);
        return {re, uniform(-1.0, 1.0)};
    }

    std::mt19937_64 rng_;
};

double diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

struct CaseErrors {
    double probabilities{0.0};
    double two_photon{0.0};
    double single_photon{0.0};
    double mixtures{0.0};
    double completeness{0.0};
    double closed_form_completeness{0.0};
    int order{0};
    bool under_resolved{false};

    double max() const { return std::max({probabilities, two_photon, single_photon, mixtures}); }
};

CaseErrors compare(const Case& c, int floor) {
    using namespace homlab::oracle;
    CaseErrors e;
    const auto& [amps, sep, sc, sp] = c;
    const OracleResult r = oracle::run(amps, sc, sp, floor);
    e.order = r.order;
    e.under_resolved = r.under_resolved;

    const double pc = analytic::coincidence_probability(amps, sc, sp);
    const double pb = analytic::bunching_probability(amps, sc, sp);
    e.probabilities = std::max({std::abs(pc - r.coincidence.probability), std::abs(pb - r.bunch_a.probability),
                                std::abs(pb - r.bunch_b.probability)});
    e.completeness = std::abs(r.coincidence.probability + r.bunch_a.probability + r.bunch_b.probability - 1.0);
    e.closed_form_completeness = std::abs(pc + 2.0 * pb - 1.0);

    e.two_photon = std::max({diff(r.coincidence.moments, analytic::coincidence_moments(amps, sc, sp)),
                             diff(r.bunch_a.moments, analytic::bunching_moments(amps, sc, sp, Side::A)),
                             diff(r.bunch_b.moments, analytic::bunching_moments(amps, sc, sp, Side::B))});
    if (r.coincidence.probability > kStateThreshold && pc > kStateThreshold)
        e.two_photon = std::max(e.two_photon, diff(r.coincidence.state->matrix(),
                                                   analytic::biphoton_coincidence_state(amps, sc, sp).matrix()));
    if (r.bunch_a.probability > kStateThreshold && pb > kStateThreshold) {
        e.two_photon = std::max(e.two_photon, diff(r.bunch_a.state->matrix(),
                                                   analytic::biphoton_bunching_state(amps, sc, sp, Side::A).matrix()));
        e.two_photon = std::max(e.two_photon, diff(r.bunch_b.state->matrix(),
                                                   analytic::biphoton_bunching_state(amps, sc, sp, Side::B).matrix()));
    }

    if (pc > kStateThreshold && pb > kStateThreshold) {
        for (Side side : {Side::A, Side::B}) {
            const auto ref = analytic::single_photon_states(amps, sc, sp, side);
            const auto c_state = oracle_single_photon(amps, sc, sp, Outcome::coincidence, side, floor);
            const auto b_state =
                oracle_single_photon(amps, sc, sp, side == Side::A ? Outcome::bunch_a : Outcome::bunch_b, side, floor);
            e.single_photon = std::max({e.single_photon, diff(c_state.matrix(), ref.coincidence.matrix()),
                                        diff(b_state.matrix(), ref.bunching.matrix())});
        }
    }

    // Detector mixtures need a configuration without pre-splitter birefringence.
    const auto post = ScaledConfig::post_only(sc.dtau_f, sc.tauA, sc.tauB);
    const auto ideal = oracle_ideal_detector(oracle::run(amps, post, sp, floor));
    e.mixtures = diff(ideal.matrix(), analytic::ideal_detector_state(amps, post, sp).matrix());
    const auto filtered = oracle_deadtime(oracle::run(sep, post, sp, floor));
    e.mixtures = std::max(e.mixtures, diff(filtered.matrix(), analytic::deadtime_state(sep, post, sp).matrix()));
    return e;
}

double convergence_delta(const Case& c, int floor) {
    using namespace homlab::oracle;
    const int base = resolving_order(c.sc, c.spectral, floor);
    const int other = base >= kMaxOrder ? kMaxOrder - 64 : std::min(2 * base, kMaxOrder);
    const OracleResult a = oracle::run(c.amps, c.sc, c.spectral, base);
    const auto grid = build_grid(c.spectral, other);
    const auto branches = propagate(c.amps, c.sc, c.spectral, grid);
    double delta = 0.0;
    for (Outcome o : {Outcome::coincidence, Outcome::bunch_a, Outcome::bunch_b}) {
        const Projection p = project(branches, grid, o);
        delta = std::max({delta, std::abs(p.probability - a.at(o).probability), diff(p.moments, a.at(o).moments)});
    }
    return delta;
}

}  // namespace

ValidationSummary run_validation(const ValidationOptions& options) {
    if (options.configurations < 1) throw UsageError("validation needs at least one configuration");
    if (options.oracle_order < oracle::kMinOrder || options.oracle_order > oracle::kMaxOrder)
        throw UsageError("oracle order must lie in [16, 256]");

    using nlohmann::ordered_json;
    ValidationSummary s;
    ordered_json cases = ordered_json::array();
    CaseGenerator gen(options.seed);
    for (int i = 0; i < options.configurations; ++i) {
        const Case c = gen.next();
        const CaseErrors e = compare(c, options.oracle_order);
        s.max_abs_error = std::max(s.max_abs_error, e.max());
        s.max_completeness_error = std::max(s.max_completeness_error, e.completeness);
        s.max_closed_form_completeness = std::max(s.max_closed_form_completeness, e.closed_form_completeness);
        s.max_order_used = std::max(s.max_order_used, e.order);
        s.any_under_resolved = s.any_under_resolved || e.under_resolved;
        if (i < options.convergence_checks)
            s.max_convergence_delta = std::max(s.max_convergence_delta, convergence_delta(c, options.oracle_order));

        const auto& a = c.amps.data();
        ordered_json amps = ordered_json::array();
        for (const cplx& z : a) amps.push_back({z.real(), z.imag()});
        cases.push_back({{"index", i},
                         {"eta", c.spectral.eta()},
                         {"k", c.spectral.k()},
                         {"dtau_f", c.sc.dtau_f},
                         {"tau0", c.sc.tau0},
                         {"tau1", c.sc.tau1},
                         {"tauA", c.sc.tauA},
                         {"tauB", c.sc.tauB},
                         {"amps", amps},
                         {"oracle_order", e.order},
                         {"under_resolved", e.under_resolved},
                         {"error_probabilities", e.probabilities},
                         {"error_two_photon", e.two_photon},
                         {"error_single_photon", e.single_photon},
                         {"error_mixtures", e.mixtures},
                         {"completeness_error", e.completeness}});
    }

    const bool equivalence = s.max_abs_error < options.tolerance && !s.any_under_resolved;
    const bool completeness = s.max_completeness_error < options.completeness_tolerance &&
                              s.max_closed_form_completeness < 1e-12;
    const bool convergence = s.max_convergence_delta < options.convergence_tolerance;
    s.pass = equivalence && completeness && convergence;

    ordered_json report;
    report["seed"] = options.seed;
    report["configurations"] = options.configurations;
    report["oracle_order_floor"] = options.oracle_order;
    report["max_oracle_order_used"] = s.max_order_used;
    report["tolerance"] = options.tolerance;
    report["max_abs_error"] = s.max_abs_error;
    report["max_completeness_error"] = s.max_completeness_error;
    report["max_closed_form_completeness_error"] = s.max_closed_form_completeness;
    report["convergence"] = {{"checked", std::min(options.convergence_checks, options.configurations)},
                             {"max_delta", s.max_convergence_delta}};
    report["checks"] = {{"oracle_equivalence", equivalence}, {"completeness", completeness}, {"convergence", convergence}};
    report["pass"] = s.pass;
    report["cases"] = std::move(cases);
    s.report = report.dump(2) + "\n";
    return s;
}

}  // namespace homlab::cli
