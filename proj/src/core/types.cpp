#include "homlab/types.hpp"

#include <cmath>
#include <string>

#include "homlab/errors.hpp"

namespace homlab {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw InvariantViolation(what);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

// ------------------------------ SpectralParams ------------------------------

SpectralParams::SpectralParams(double eta, double k, std::optional<double> mu,
                               std::optional<double> sigma)
    : eta_(eta), k_(k), mu_(mu), sigma_(sigma) {
    require(finite(eta) && eta > 0.0, "SpectralParams: eta must be finite and > 0");
    require(finite(k) && std::abs(k) <= 1.0, "SpectralParams: |k| must be <= 1");
    if (sigma) require(finite(*sigma) && *sigma > 0.0, "SpectralParams: sigma must be > 0");
    if (mu && sigma) {
        const double ratio = *mu / *sigma;
        require(std::abs(ratio - eta) <= 1e-12 * std::abs(eta),
                "SpectralParams: eta must equal mu/sigma");
    }
}

SpectralParams SpectralParams::dimensionless(double eta, double k) {
    return SpectralParams(eta, k, std::nullopt, std::nullopt);
}

SpectralParams SpectralParams::physical(double mu, double sigma, double k) {
    require(finite(sigma) && sigma > 0.0, "SpectralParams: sigma must be > 0");
    return SpectralParams(mu / sigma, k, mu, sigma);
}

SpectralParams SpectralParams::with_sigma(double eta, double k, double sigma) {
    return SpectralParams(eta, k, eta * sigma, sigma);
}

double SpectralParams::require_sigma() const {
    if (!sigma_) throw UnitConversionError("spectral sigma is required for unit conversion");
    return *sigma_;
}

// -------------------------- PolarizationAmplitudes --------------------------

PolarizationAmplitudes::PolarizationAmplitudes(cplx hh, cplx hv, cplx vh, cplx vv)
    : c_{hh, hv, vh, vv} {
    double norm = 0.0;
    for (const auto& c : c_) {
        require(finite(c.real()) && finite(c.imag()), "PolarizationAmplitudes: non-finite amplitude");
        norm += std::norm(c);
    }
    require(std::abs(norm - 1.0) <= 1e-12, "PolarizationAmplitudes: squared norm must be 1");
}

PolarizationAmplitudes PolarizationAmplitudes::normalize(cplx hh, cplx hv, cplx vh, cplx vv) {
    const double norm = std::sqrt(std::norm(hh) + std::norm(hv) + std::norm(vh) + std::norm(vv));
    require(norm > 0.0 && finite(norm), "PolarizationAmplitudes: cannot normalize a zero vector");
    return {hh / norm, hv / norm, vh / norm, vv / norm};
}

PolarizationAmplitudes PolarizationAmplitudes::horizontal_vertical() { return {0.0, 1.0, 0.0, 0.0}; }

PolarizationAmplitudes PolarizationAmplitudes::singlet() {
    const double s = 1.0 / std::sqrt(2.0);
    return {0.0, s, -s, 0.0};
}

PolarizationAmplitudes PolarizationAmplitudes::psi_plus() {
    const double s = 1.0 / std::sqrt(2.0);
    return {0.0, s, s, 0.0};
}

PolarizationAmplitudes PolarizationAmplitudes::plus_plus() { return {0.5, 0.5, 0.5, 0.5}; }

PolarizationAmplitudes PolarizationAmplitudes::separable(cplx ch, cplx cv) {
    return normalize(ch * ch, ch * cv, cv * ch, cv * cv);
}

PolarizationAmplitudes PolarizationAmplitudes::discrimination_optimal() {
    return {0.5, 1.0 / std::sqrt(2.0), 0.0, 0.5};
}

bool PolarizationAmplitudes::is_separable_identical(double tol) const noexcept {
    // Rank one and symmetric.
    return std::abs(hv() - vh()) <= tol && std::abs(hh() * vv() - hv() * vh()) <= tol;
}

// -------------------------------- PathChannel --------------------------------

PathChannel::PathChannel(double n_h, double n_v, double t) : n_h_(n_h), n_v_(n_v), t_(t) {
    require(finite(n_h) && n_h >= 1.0, "PathChannel: n_h must be >= 1");
    require(finite(n_v) && n_v >= 1.0, "PathChannel: n_v must be >= 1");
    require(finite(t) && t >= 0.0, "PathChannel: t must be >= 0");
}

PathChannel PathChannel::slab(double n_h, double n_v, double thickness_m) {
    return {n_h, n_v, thickness_m / kSpeedOfLight};
}

void InterferometerConfig::validate() const {
    require(finite(t0f) && finite(t1f), "InterferometerConfig: free-evolution times must be finite");
}

// -------------------------------- ScaledConfig -------------------------------

bool ScaledConfig::pre_dephasing_free(double tol) const noexcept {
    return std::abs(tau0) <= tol && std::abs(tau1) <= tol;
}

ScaledConfig ScaledConfig::post_only(double dtau_f, double tauA, double tauB) {
    return from_delays(dtau_f, 0.0, 0.0, 0.0, 0.0, tauA, tauB);
}

ScaledConfig ScaledConfig::from_delays(double dtau_f, double s0h, double s0v, double s1h,
                                       double s1v, double tauA, double tauB) {
    ScaledConfig sc;
    sc.dtau_f = dtau_f;
    const std::array<double, 2> s0{s0h, s0v};
    const std::array<double, 2> s1{s1h, s1v};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) sc.dtau[a][b] = dtau_f + (s0[a] - s1[b]);
    sc.tau0 = s0h - s0v;
    sc.tau1 = s1h - s1v;
    sc.tauA = tauA;
    sc.tauB = tauB;
    for (const auto& row : sc.dtau)
        for (double d : row) require(finite(d), "ScaledConfig: non-finite delay");
    require(finite(sc.tau0) && finite(sc.tau1) && finite(tauA) && finite(tauB),
            "ScaledConfig: non-finite dephasing time");
    return sc;
}

ScaledConfig scale(const InterferometerConfig& config, const SpectralParams& spectral) {
    const double sigma = spectral.require_sigma();
    config.validate();

    // Differences are formed in seconds before scaling so large common free
    // times cancel exactly.
    ScaledConfig sc;
    const double dt_f = config.t0f - config.t1f;
    sc.dtau_f = sigma * dt_f;
    for (Pol a : kPols) {
        for (Pol b : kPols) {
            const double noise = config.path0.n(a) * config.path0.t() - config.path1.n(b) * config.path1.t();
            sc.dtau[static_cast<int>(a)][static_cast<int>(b)] = sigma * (dt_f + noise);
        }
    }
    auto tau_of = [sigma](const PathChannel& p) { return sigma * (p.n_h() - p.n_v()) * p.t(); };
    sc.tau0 = tau_of(config.path0);
    sc.tau1 = tau_of(config.path1);
    sc.tauA = tau_of(config.pathA);
    sc.tauB = tau_of(config.pathB);

    for (const auto& row : sc.dtau)
        for (double d : row) require(finite(d), "scale: non-finite scaled delay");
    require(finite(sc.dtau_f) && finite(sc.tauA) && finite(sc.tauB), "scale: non-finite scaled time");
    return sc;
}

}  // namespace homlab
