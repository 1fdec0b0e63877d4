// analytic.hpp: closed-form coincidence/bunching probabilities, decoherence
// functions and polarization states of a two-photon interferometer with
// birefringent dephasing before and after a balanced beam splitter.
//
// All inputs are dimensionless (see types.hpp). Sign and phase conventions:
// a photon of polarization l that spends scaled time T in a medium picks up
// exp(i T_l omega); the beam splitter maps a -> (A + B)/sqrt2, b -> (A - B)/sqrt2.
// Density-matrix elements are rho_{ij} = <i|rho|j>, so an H/V coherence
// carries exp(+i eta tau).

#pragma once

#include "homlab/density_matrix.hpp"
#include "homlab/types.hpp"

namespace homlab::analytic {

/// A complex decoherence factor; |value| <= 1 (+1e-12) is checked on construction.
class DecoherenceValue {
public:
    explicit DecoherenceValue(cplx value);
    cplx value() const noexcept { return value_; }
    double magnitude() const noexcept { return std::abs(value_); }

private:
    cplx value_;
};

// ------------------------------ probabilities ------------------------------

// Pc for a general input; free evolution is carried inside sc.dtau.
double coincidence_probability(const PolarizationAmplitudes& amps, const ScaledConfig& sc,
                               const SpectralParams& spectral);

// Probability that one given receiver gets both photons: (1 - Pc)/2.
double bunching_probability(const PolarizationAmplitudes& amps, const ScaledConfig& sc,
                            const SpectralParams& spectral);

// Classical dip, 1/2 [1 - exp(-(1-K) dtau_f^2)].
double pc_classical_dip(double dtau_f, double k);

// Zero path difference with identical channels: 1/2 |C_HV - C_VH|^2.
double pc_zero_delay(const PolarizationAmplitudes& amps);

// |ll> input through identical media of index n_lambda and interaction times
// t0, t1 (seconds); sigma in rad/s.
double pc_product_state(double n_lambda, double t0, double t1, double k, double sigma);

// Equal media with perpendicular fast axes (tau0 = -tau1 = tau), no path difference.
double pc_perpendicular(const PolarizationAmplitudes& amps, double tau, double k, double eta);

// -------------------------- Bell-state engineering --------------------------

// Nonlocal decoherence function of the |HV> input after post-splitter dephasing.
DecoherenceValue lambda_c(double tauA, double tauB, double dtau_f, double k, double eta);

// Bunching coherence exp(-(1-K)(tau + dtau_f)^2); equals -lambda_c(tau, tau).
DecoherenceValue lambda_b(double tau, double dtau_f, double k);

struct BellStates {
    DensityMatrix coincidence;
    DensityMatrix bunching_a;
};

// |HV> input, no dephasing before the beam splitter.
BellStates bell_states(double tauA, double tauB, double dtau_f, double k, double eta);

// --------------------------- two-photon states ------------------------------

// Probability-weighted (unnormalized) matrices: Pc * rho_c and Pb * rho_b.
Matrix4c coincidence_moments(const PolarizationAmplitudes& amps, const ScaledConfig& sc,
                             const SpectralParams& spectral);
Matrix4c bunching_moments(const PolarizationAmplitudes& amps, const ScaledConfig& sc,
                          const SpectralParams& spectral, Side side);

// Throw UndefinedStateError when the branch probability is below 1e-12.
DensityMatrix biphoton_coincidence_state(const PolarizationAmplitudes& amps, const ScaledConfig& sc,
                                         const SpectralParams& spectral);
DensityMatrix biphoton_bunching_state(const PolarizationAmplitudes& amps, const ScaledConfig& sc,
                                      const SpectralParams& spectral, Side side);

// -------------------------- single-photon states ----------------------------

struct SinglePhotonStates {
    DensityMatrix coincidence;   // the receiver's photon after a coincidence
    DensityMatrix bunching;      // one photon of a pair bunched at the receiver
    double pc;                   // coincidence probability
    double pb;                   // probability that this receiver gets both photons
};

SinglePhotonStates single_photon_states(const PolarizationAmplitudes& amps, const ScaledConfig& sc,
                                        const SpectralParams& spectral, Side side);

// Single-photon Gaussian dephasing exp(i eta tau - tau^2/2).
cplx kappa(double tauA, double eta);

// Coherence factors of the coincidence (sign = -1) and bunching (sign = +1)
// photon for separable identical inputs. Throws UndefinedStateError when the
// corresponding branch has zero probability.
cplx kappa_pm(double tauA, double dtau_f, double k, double eta, int sign);

// Coherence after a detector dead time removes every second bunched photon.
cplx kappa_rn(double tauA, double dtau_f, double k, double eta);

// Alice's state with a zero-dead-time detector: Pc rho_c + 2 Pb^A rho_b.
// Requires no birefringence before the beam splitter (ContractViolation).
DensityMatrix ideal_detector_state(const PolarizationAmplitudes& amps, const ScaledConfig& sc,
                                   const SpectralParams& spectral);

// Alice's renormalized state with dead-time filtering. Requires a separable
// identical input and no birefringence before the beam splitter.
DensityMatrix deadtime_state(const PolarizationAmplitudes& amps, const ScaledConfig& sc,
                             const SpectralParams& spectral);

// ------------------------- coincidence vs bunching --------------------------

// Leading-order trace distance between Alice's c and b photon states. Only
// meaningful well outside the dip, (1-K) dtau_f^2 >> 1; the caller owns that.
double trace_distance_cb_approx(const PolarizationAmplitudes& amps, double dtau_f, double tauA,
                                double k);

// nu_-(tau) for sign = -1 and nu_+(tau) for sign = +1.
cplx nu(double tauA, double dtau_f, double eta, int sign);

struct NuStates {
    DensityMatrix coincidence;  // off-diagonal nu_-
    DensityMatrix bunching;     // off-diagonal nu_+
};

// Alice's c/b states for the discrimination-optimal input at K = -1.
NuStates nu_states(double tauA, double dtau_f, double eta);

// Rotation by pi/2 about (sin phi, cos phi, 0).
Matrix2c rotation_half_pi(double phi);

enum class Weighting {
    idealized,  // Pc = Pb = 1/2, states from nu_states
    exact,      // true Pc and exact single-photon states of the optimal input
};

struct DiscriminationOutcome {
    DensityMatrix rotated_c;
    DensityMatrix rotated_b;
    double weight_c;             // share of Alice's photons that are c photons
    double weight_b;
    double h_branch_c_fraction;  // c photons among H-branch clicks
    double success_rate;         // guess "c" on H, "b" on V
};

// Dephase for tauA = -2 dtau_f, rotate by R(pi/2) with phi = -2 eta dtau_f,
// then split H/V with a polarizing beam splitter.
DiscriminationOutcome discrimination_pipeline(double dtau_f, double eta, Weighting weighting);

}  // namespace homlab::analytic
