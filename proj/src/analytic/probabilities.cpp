#include <algorithm>
#include <cmath>

#include "gaussian.hpp"
#include "homlab/analytic.hpp"
#include "homlab/errors.hpp"

namespace homlab::analytic {

using detail::corr_gauss;
using detail::dip_factor;
using detail::eta_phase;

DecoherenceValue::DecoherenceValue(cplx value) : value_(value) {
    if (!(std::abs(value) <= 1.0 + 1e-12)) throw InvariantViolation("decoherence factor exceeds 1 in magnitude");
}

double coincidence_probability(const PolarizationAmplitudes& amps, const ScaledConfig& sc,
                               const SpectralParams& spectral) {
    const double k = spectral.k();
    const double d_hh = sc.delay(Pol::H, Pol::H);
    const double d_vv = sc.delay(Pol::V, Pol::V);
    const double cross = 2.0 * (amps.hv() * std::conj(amps.vh()) * eta_phase(spectral.eta(), sc.tau0 - sc.tau1)).real() *
                         corr_gauss(d_hh, d_vv, k);
    const double pc = 0.5 * (1.0 - std::norm(amps.hh()) * dip_factor(d_hh, k) -
                             std::norm(amps.vv()) * dip_factor(d_vv, k) - cross);
    return std::clamp(pc, 0.0, 1.0);
}

double bunching_probability(const PolarizationAmplitudes& amps, const ScaledConfig& sc,
                            const SpectralParams& spectral) {
    return 0.5 * (1.0 - coincidence_probability(amps, sc, spectral));
}

double pc_classical_dip(double dtau_f, double k) { return 0.5 * (1.0 - dip_factor(dtau_f, k)); }

double pc_zero_delay(const PolarizationAmplitudes& amps) { return 0.5 * std::norm(amps.hv() - amps.vh()); }

double pc_product_state(double n_lambda, double t0, double t1, double k, double sigma) {
    return 0.5 * (1.0 - dip_factor(sigma * n_lambda * (t0 - t1), k));
}

double pc_perpendicular(const PolarizationAmplitudes& amps, double tau, double k, double eta) {
    const double diag = std::norm(amps.hh()) + std::norm(amps.vv());
    const double theta = std::arg(amps.hv()) - std::arg(amps.vh());
    const double cross = 2.0 * std::abs(amps.hv()) * std::abs(amps.vh()) * std::exp(-(1.0 + k) * tau * tau) *
                         std::cos(2.0 * eta * tau + theta);
    return 0.5 * (1.0 - diag * std::exp(-(1.0 - k) * tau * tau) - cross);
}

DecoherenceValue lambda_c(double tauA, double tauB, double dtau_f, double k, double eta) {
    return DecoherenceValue(-eta_phase(eta, tauA - tauB) * corr_gauss(tauA + dtau_f, tauB + dtau_f, k));
}

DecoherenceValue lambda_b(double tau, double dtau_f, double k) {
    return DecoherenceValue(dip_factor(tau + dtau_f, k));
}

BellStates bell_states(double tauA, double tauB, double dtau_f, double k, double eta) {
    auto block = [](cplx coherence) {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
        m(1, 1) = m(2, 2) = 0.5;
        m(1, 2) = 0.5 * coherence;
        m(2, 1) = 0.5 * std::conj(coherence);
        return DensityMatrix(m);
    };
    return {block(lambda_c(tauA, tauB, dtau_f, k, eta).value()), block(lambda_b(tauA, dtau_f, k).value())};
}

}  // namespace homlab::analytic
