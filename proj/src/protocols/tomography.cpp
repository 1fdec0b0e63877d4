// Dead-time filtering requirement and the (K, |dtau_f|) fit of the
// renormalized decoherence function.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "homlab/errors.hpp"
#include "homlab/format.hpp"
#include "homlab/protocols.hpp"

namespace homlab::protocols {

DeadTimeSpec deadtime_requirement(double t, double n_h, double n_v, double dt_f) {
    if (!(n_h >= 1.0 && n_v >= 1.0)) throw InvariantViolation("deadtime_requirement: indices must be >= 1");
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvariantViolation("deadtime_requirement: t must be >= 0");
    if (!std::isfinite(dt_f)) throw InvariantViolation("deadtime_requirement: dt_f must be finite");
    const double span = std::abs(n_h - n_v) / std::min(n_h, n_v) * t + std::abs(dt_f);
    return {t, n_h, n_v, dt_f, span, std::abs(dt_f)};
}

double kappa_rn_magnitude(double tauA, double k, double abs_dtau_f) {
    return std::abs(analytic::kappa_rn(tauA, abs_dtau_f, k, 1.0));
}

namespace {

constexpr double kMinK = -1.0;
constexpr double kMaxK = 1.0 - 1e-9;
constexpr double kMinD = 1e-6;
constexpr double kMaxD = 50.0;

using Params = std::array<double, 2>;  // (K, |dtau_f|)

Params project(Params p) {
    return {std::clamp(p[0], kMinK, kMaxK), std::clamp(p[1], kMinD, kMaxD)};
}

class Problem {
public:
    Problem(const std::vector<TomographySample>& samples, double floor) : samples_(samples) {
        double peak = 0.0;
        for (const auto& s : samples) peak = std::max(peak, std::abs(s.magnitude));
        for (const auto& s : samples) weights_.push_back(1.0 / (std::abs(s.magnitude) + floor * peak));
    }

    std::size_t size() const { return samples_.size(); }

    void residuals(const Params& p, std::vector<double>& r) const {
        r.resize(samples_.size());
        for (std::size_t i = 0; i < samples_.size(); ++i)
            r[i] = weights_[i] * (kappa_rn_magnitude(samples_[i].tauA, p[0], p[1]) - samples_[i].magnitude);
    }

    double cost(const Params& p) const {
        std::vector<double> r;
        residuals(p, r);
        double c = 0.0;
        for (double x : r) c += x * x;
        return c;
    }

    // Forward/backward differences that stay inside the box.
    void jacobian(const Params& p, std::vector<std::array<double, 2>>& jac) const {
        jac.assign(samples_.size(), {0.0, 0.0});
        std::vector<double> lo, hi;
        for (int j = 0; j < 2; ++j) {
            const double h = 1e-7 * std::max(1.0, std::abs(p[j]));
            Params a = p, b = p;
            a[j] -= h;
            b[j] += h;
            a = project(a);
            b = project(b);
            residuals(a, lo);
            residuals(b, hi);
            const double span = b[j] - a[j];
            for (std::size_t i = 0; i < samples_.size(); ++i) jac[i][j] = (hi[i] - lo[i]) / span;
        }
    }

private:
    const std::vector<TomographySample>& samples_;
    std::vector<double> weights_;
};

}  // namespace

TomographyFit tomography_fit(const std::vector<TomographySample>& samples, const TomographyOptions& options) {
    if (samples.size() < 8) throw NoFitError("tomography_fit: at least 8 samples are required");
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& s : samples) {
        if (!std::isfinite(s.tauA) || !std::isfinite(s.magnitude))
            throw NoFitError("tomography_fit: samples must be finite");
        lo = std::min(lo, s.magnitude);
        hi = std::max(hi, s.magnitude);
    }
    if (hi - lo <= 1e-12 * std::max(1.0, std::abs(hi))) throw NoFitError("tomography_fit: data are constant");

    const Problem problem(samples, options.relative_floor);

    // Deterministic coarse grid.
    Params best{0.0, 1.0};
    double best_cost = std::numeric_limits<double>::infinity();
    for (int ik = 0; ik <= 40; ++ik) {
        const double k = std::min(-1.0 + 0.05 * ik, kMaxK);
        for (int id = 1; id <= 80; ++id) {
            const Params p{k, 0.1 * id};
            const double c = problem.cost(p);
            if (c < best_cost) best_cost = c, best = p;
        }
    }

    // Projected Levenberg-Marquardt refinement.
    Params p = best;
    double cost = best_cost;
    double lambda = 1e-3;
    int it = 0;
    std::vector<double> r;
    std::vector<std::array<double, 2>> jac;
    for (; it < options.max_iterations && cost > 0.0; ++it) {
        problem.residuals(p, r);
        problem.jacobian(p, jac);
        double a00 = 0.0, a01 = 0.0, a11 = 0.0, g0 = 0.0, g1 = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            a00 += jac[i][0] * jac[i][0];
            a01 += jac[i][0] * jac[i][1];
            a11 += jac[i][1] * jac[i][1];
            g0 += jac[i][0] * r[i];
            g1 += jac[i][1] * r[i];
        }
        bool improved = false;
        double step = 0.0;
        while (lambda < 1e12) {
            const double m00 = a00 * (1.0 + lambda) + 1e-300, m11 = a11 * (1.0 + lambda) + 1e-300;
            const double det = m00 * m11 - a01 * a01;
            const Params trial =
                project({p[0] - (m11 * g0 - a01 * g1) / det, p[1] - (m00 * g1 - a01 * g0) / det});
            const double trial_cost = problem.cost(trial);
            if (trial_cost < cost) {
                step = std::abs(trial[0] - p[0]) + std::abs(trial[1] - p[1]);
                p = trial;
                cost = trial_cost;
                lambda = std::max(lambda / 3.0, 1e-12);
                improved = true;
                break;
            }
            lambda *= 4.0;
        }
        if (!improved || step < 1e-15) break;
    }

    double departure = 0.0;
    for (const auto& s : samples)
        departure = std::max(departure, std::abs(kappa_rn_magnitude(s.tauA, p[0], p[1]) -
                                                 std::exp(-0.5 * s.tauA * s.tauA)));
    const bool unresolved = departure < options.resolution_threshold || p[0] > 1.0 - 1e-3;
    return {p[0], p[1], std::sqrt(cost), it, unresolved};
}

TomographyFit tomography_fit(const std::vector<std::pair<double, cplx>>& coherences, const TomographyOptions& options) {
    std::vector<TomographySample> samples;
    samples.reserve(coherences.size());
    for (const auto& [tau, value] : coherences) samples.push_back({tau, std::abs(value)});
    return tomography_fit(samples, options);
}

ProtocolResult deadtime_coherence_scan(const std::vector<std::pair<double, double>>& k_and_dtau, const Sweep& tauA) {
    ProtocolResult out("tauA", tauA.values());
    std::vector<double> plain;
    for (double t : out.sweep()) plain.push_back(std::exp(-0.5 * t * t));
    out.add_column("kappa_abs", "Gaussian single-photon dephasing", std::move(plain));
    for (const auto& [k, d] : k_and_dtau) {
        std::vector<double> col;
        for (double t : out.sweep()) col.push_back(kappa_rn_magnitude(t, k, std::abs(d)));
        out.add_column("kappa_rn_abs_k" + format_double(k) + "_d" + format_double(std::abs(d)),
                       "dead-time renormalized coherence", std::move(col));
    }
    return out;
}

}  // namespace homlab::protocols
