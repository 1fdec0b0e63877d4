// Single-photon polarization states seen by one receiver.

#include <cmath>

#include "gaussian.hpp"
#include "homlab/analytic.hpp"
#include "homlab/errors.hpp"

namespace homlab::analytic {

using detail::eta_phase;

namespace {

constexpr double kMinBranchProbability = 1e-12;

Eigen::MatrixXcd with_coherence(const Eigen::Matrix2cd& populations_and_coherence, cplx factor) {
    Eigen::MatrixXcd m = populations_and_coherence;
    m(0, 1) *= factor;
    m(1, 0) = std::conj(m(0, 1));
    return m;
}

// Reduced single-photon state of the input pair's first photon.
Eigen::Matrix2cd input_reduced(const PolarizationAmplitudes& a) {
    Eigen::Matrix2cd m;
    m(0, 0) = std::norm(a.hh()) + std::norm(a.hv());
    m(1, 1) = std::norm(a.vh()) + std::norm(a.vv());
    m(0, 1) = a.hh() * std::conj(a.vh()) + a.hv() * std::conj(a.vv());
    m(1, 0) = std::conj(m(0, 1));
    return m;
}

// exp(-tau^2/2) * E cosh((1-K) d tau) with E = exp(-(1-K) d^2), evaluated
// without forming the (possibly overflowing) cosh.
double damped_revival(double tau, double d, double k) {
    const double a = (1.0 - k) * d * d;
    const double b = (1.0 - k) * d * tau;
    const double base = -0.5 * tau * tau - a;
    return 0.5 * (std::exp(base + b) + std::exp(base - b));
}

}  // namespace

SinglePhotonStates single_photon_states(const PolarizationAmplitudes& amps, const ScaledConfig& sc,
                                        const SpectralParams& spectral, Side side) {
    const DensityMatrix rho_c = biphoton_coincidence_state(amps, sc, spectral);
    const DensityMatrix rho_b = biphoton_bunching_state(amps, sc, spectral, side);
    const double pc = coincidence_probability(amps, sc, spectral);
    // Alice holds the first photon of a coincidence, Bob the second.
    DensityMatrix c = side == Side::A ? rho_c.trace_out_second() : rho_c.trace_out_first();
    return {c, rho_b.trace_out_second(), pc, 0.5 * (1.0 - pc)};
}

cplx kappa(double tauA, double eta) { return eta_phase(eta, tauA) * detail::gauss(tauA); }

cplx kappa_pm(double tauA, double dtau_f, double k, double eta, int sign) {
    const double s = sign < 0 ? -1.0 : 1.0;
    // 1 - E computed with expm1 so near-unit E keeps its precision.
    const double one_minus_e = -std::expm1(-(1.0 - k) * dtau_f * dtau_f);
    const double denom = s < 0 ? one_minus_e : 2.0 - one_minus_e;
    if (denom < kMinBranchProbability)
        throw UndefinedStateError("kappa_pm: coincidence branch has zero probability", 0.5 * denom);
    const double magnitude = (detail::gauss(tauA) + s * damped_revival(tauA, dtau_f, k)) / denom;
    return eta_phase(eta, tauA) * magnitude;
}

cplx kappa_rn(double tauA, double dtau_f, double k, double eta) {
    const double e = std::exp(-(1.0 - k) * dtau_f * dtau_f);
    const double magnitude = (3.0 * detail::gauss(tauA) - damped_revival(tauA, dtau_f, k)) / (3.0 - e);
    return eta_phase(eta, tauA) * magnitude;
}

DensityMatrix ideal_detector_state(const PolarizationAmplitudes& amps, const ScaledConfig& sc,
                                   const SpectralParams& spectral) {
    if (!sc.pre_dephasing_free())
        throw ContractViolation("ideal_detector_state: birefringence before the beam splitter is not supported");
    const cplx hh = amps.hh(), hv = amps.hv(), vh = amps.vh(), vv = amps.vv();
    Eigen::Matrix2cd m;
    m(0, 0) = 0.5 * (1.0 + std::norm(hh) - std::norm(vv));
    m(1, 1) = 0.5 * (1.0 - std::norm(hh) + std::norm(vv));
    m(0, 1) = 0.5 * (hh * std::conj(hv + vh) + (hv + vh) * std::conj(vv));
    m(1, 0) = std::conj(m(0, 1));
    return DensityMatrix(with_coherence(m, kappa(sc.tauA, spectral.eta())));
}

DensityMatrix deadtime_state(const PolarizationAmplitudes& amps, const ScaledConfig& sc,
                             const SpectralParams& spectral) {
    if (!amps.is_separable_identical())
        throw ContractViolation("deadtime_state: input must be a separable product of identical qubits");
    if (!sc.pre_dephasing_free())
        throw ContractViolation("deadtime_state: birefringence before the beam splitter is not supported");
    // Without pre-splitter birefringence every dtau entry is the same delay.
    const double delay = sc.delay(Pol::H, Pol::H);
    return DensityMatrix(with_coherence(input_reduced(amps), kappa_rn(sc.tauA, delay, spectral.k(), spectral.eta())));
}

}  // namespace homlab::analytic
