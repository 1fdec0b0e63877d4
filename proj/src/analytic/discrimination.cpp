// Local discrimination of coincidence and bunching photons.

#include <cmath>

#include "gaussian.hpp"
#include "homlab/analytic.hpp"
#include "homlab/errors.hpp"

namespace homlab::analytic {

using detail::eta_phase;
using detail::gauss;

double trace_distance_cb_approx(const PolarizationAmplitudes& amps, double dtau_f, double tauA, double k) {
    auto gamma = [&](double s) {
        const double shifted = dtau_f + s * tauA;
        return dtau_f * dtau_f - 2.0 * k * dtau_f * shifted + shifted * shifted;
    };
    const double ep = std::exp(-0.5 * gamma(+1.0));
    const double em = std::exp(-0.5 * gamma(-1.0));
    const cplx value = amps.hh() * (std::conj(amps.hv()) * ep + std::conj(amps.vh()) * em) +
                       std::conj(amps.vv()) * (amps.hv() * ep + amps.vh() * em);
    return std::abs(value);
}

cplx nu(double tauA, double dtau_f, double eta, int sign) {
    const double s = sign < 0 ? -1.0 : 1.0;
    return eta_phase(eta, tauA) * ((gauss(tauA) + s * gauss(tauA + 2.0 * dtau_f)) / std::sqrt(2.0));
}

NuStates nu_states(double tauA, double dtau_f, double eta) {
    auto state = [](cplx coherence) {
        Eigen::MatrixXcd m(2, 2);
        m << 0.5, 0.5 * coherence, 0.5 * std::conj(coherence), 0.5;
        return DensityMatrix(m);
    };
    return {state(nu(tauA, dtau_f, eta, -1)), state(nu(tauA, dtau_f, eta, +1))};
}

Matrix2c rotation_half_pi(double phi) {
    const cplx p = std::polar(1.0, phi);
    Matrix2c r;
    r << 1.0, -p, std::conj(p), 1.0;
    return r / std::sqrt(2.0);
}

DiscriminationOutcome discrimination_pipeline(double dtau_f, double eta, Weighting weighting) {
    const double tauA = -2.0 * dtau_f;
    const Matrix2c rot = rotation_half_pi(-2.0 * eta * dtau_f);

    double weight_c = 0.5;
    double weight_b = 0.5;
    Eigen::MatrixXcd rc;
    Eigen::MatrixXcd rb;
    if (weighting == Weighting::idealized) {
        const NuStates states = nu_states(tauA, dtau_f, eta);
        rc = states.coincidence.matrix();
        rb = states.bunching.matrix();
    } else {
        const auto spectral = SpectralParams::dimensionless(eta, -1.0);
        const auto states = single_photon_states(PolarizationAmplitudes::discrimination_optimal(),
                                                 ScaledConfig::post_only(dtau_f, tauA, 0.0), spectral, Side::A);
        rc = states.coincidence.matrix();
        rb = states.bunching.matrix();
        // Per photon reaching Alice: c photons arrive with weight Pc, bunched
        // photons with 2 Pb^A = 1 - Pc.
        weight_c = states.pc;
        weight_b = 1.0 - states.pc;
    }

    const DensityMatrix rotated_c = DensityMatrix(rc).transformed(rot);
    const DensityMatrix rotated_b = DensityMatrix(rb).transformed(rot);
    const double c_in_h = weight_c * rotated_c(0, 0).real();
    const double b_in_h = weight_b * rotated_b(0, 0).real();
    const double b_in_v = weight_b * rotated_b(1, 1).real();
    return {rotated_c, rotated_b, weight_c, weight_b, c_in_h / (c_in_h + b_in_h), c_in_h + b_in_v};
}

}  // namespace homlab::analytic
