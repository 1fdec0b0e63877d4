// Two-photon polarization states conditioned on coincidence or bunching.
//
// Only the ten independent elements are evaluated; the lower triangle follows
// from Hermiticity.

#include <cmath>

#include "gaussian.hpp"
#include "homlab/analytic.hpp"
#include "homlab/errors.hpp"

namespace homlab::analytic {

using detail::corr_gauss;
using detail::dip_factor;
using detail::eta_phase;
using detail::gauss;

namespace {

constexpr int HH = pair_index(Pol::H, Pol::H);
constexpr int HV = pair_index(Pol::H, Pol::V);
constexpr int VH = pair_index(Pol::V, Pol::H);
constexpr int VV = pair_index(Pol::V, Pol::V);

constexpr double kMinBranchProbability = 1e-12;

void fill_lower(Matrix4c& m) {
    for (int i = 0; i < 4; ++i) {
        m(i, i) = m(i, i).real();
        for (int j = i + 1; j < 4; ++j) m(j, i) = std::conj(m(i, j));
    }
}

// Shared scalars of one evaluation.
struct Terms {
    cplx hh, hv, vh, vv;
    double d_hh, d_hv, d_vh, d_vv;
    double t0, t1;
    double k, eta;
    // 2 Re(C_HV C_VH^* e^{i eta (tau0 - tau1)}) exp(-(d_HH^2 - 2K d_HH d_VV + d_VV^2)/2)
    double cross;

    Terms(const PolarizationAmplitudes& a, const ScaledConfig& sc, const SpectralParams& sp)
        : hh(a.hh()), hv(a.hv()), vh(a.vh()), vv(a.vv()),
          d_hh(sc.delay(Pol::H, Pol::H)), d_hv(sc.delay(Pol::H, Pol::V)),
          d_vh(sc.delay(Pol::V, Pol::H)), d_vv(sc.delay(Pol::V, Pol::V)),
          t0(sc.tau0), t1(sc.tau1), k(sp.k()), eta(sp.eta()) {
        cross = 2.0 * (hv * std::conj(vh) * eta_phase(eta, t0 - t1)).real() * corr_gauss(d_hh, d_vv, k);
    }

    cplx phase(double x) const { return eta_phase(eta, x); }
    double g2(double u, double v) const { return corr_gauss(u, v, k); }
};

}  // namespace

Matrix4c coincidence_moments(const PolarizationAmplitudes& amps, const ScaledConfig& sc,
                             const SpectralParams& spectral) {
    const Terms t(amps, sc, spectral);
    const double ta = sc.tauA;
    const double tb = sc.tauB;

    Matrix4c m = Matrix4c::Zero();
    m(HH, HH) = 0.5 * std::norm(t.hh) * (1.0 - dip_factor(t.d_hh, t.k));
    m(VV, VV) = 0.5 * std::norm(t.vv) * (1.0 - dip_factor(t.d_vv, t.k));
    m(HV, HV) = m(VH, VH) = 0.25 * (std::norm(t.hv) + std::norm(t.vh) - t.cross);

    // <HH|.|HV> differs from <HH|.|VH> only in which receiver's photon flips.
    auto hh_row = [&](double tau) {
        return 0.25 * t.hh *
               (std::conj(t.hv) * t.phase(t.t1 + tau) * (gauss(t.t1 + tau) - t.g2(t.d_hh, t.d_hv + tau)) +
                std::conj(t.vh) * t.phase(t.t0 + tau) * (gauss(t.t0 + tau) - t.g2(t.d_hh, t.d_vh - tau)));
    };
    m(HH, HV) = hh_row(tb);
    m(HH, VH) = hh_row(ta);

    auto vv_col = [&](double tau) {
        return 0.25 * std::conj(t.vv) *
               (t.hv * t.phase(t.t0 + tau) * (gauss(t.t0 + tau) - t.g2(t.d_vv, t.d_hv + tau)) +
                t.vh * t.phase(t.t1 + tau) * (gauss(t.t1 + tau) - t.g2(t.d_vv, t.d_vh - tau)));
    };
    m(HV, VV) = vv_col(ta);
    m(VH, VV) = vv_col(tb);

    m(HH, VV) = 0.25 * t.hh * std::conj(t.vv) * t.phase(t.t0 + t.t1 + ta + tb) *
                (t.g2(t.t0 + ta, -(t.t1 + tb)) + t.g2(t.t0 + tb, -(t.t1 + ta)) -
                 t.g2(t.d_hv + ta, t.d_vh - tb) - t.g2(t.d_hv + tb, t.d_vh - ta));

    m(HV, VH) = 0.25 * (t.hv * std::conj(t.vh) * t.phase(t.t0 - t.t1 + ta - tb) * t.g2(t.t0 + ta, t.t1 + tb) +
                        std::conj(t.hv) * t.vh * t.phase(-t.t0 + t.t1 + ta - tb) * t.g2(t.t0 + tb, t.t1 + ta) -
                        std::norm(t.hv) * t.phase(ta - tb) * t.g2(t.d_hv + ta, t.d_hv + tb) -
                        std::norm(t.vh) * t.phase(ta - tb) * t.g2(t.d_vh - ta, t.d_vh - tb));

    fill_lower(m);
    return m;
}

Matrix4c bunching_moments(const PolarizationAmplitudes& amps, const ScaledConfig& sc,
                          const SpectralParams& spectral, Side side) {
    const Terms t(amps, sc, spectral);
    const double ts = sc.tau_side(side);

    Matrix4c m = Matrix4c::Zero();
    m(HH, HH) = 0.25 * std::norm(t.hh) * (1.0 + dip_factor(t.d_hh, t.k));
    m(VV, VV) = 0.25 * std::norm(t.vv) * (1.0 + dip_factor(t.d_vv, t.k));
    m(HV, HV) = m(VH, VH) = 0.125 * (std::norm(t.hv) + std::norm(t.vh) + t.cross);

    m(HH, HV) = m(HH, VH) =
        0.125 * t.hh *
        (std::conj(t.hv) * t.phase(t.t1 + ts) * (gauss(t.t1 + ts) + t.g2(t.d_hh, t.d_hv + ts)) +
         std::conj(t.vh) * t.phase(t.t0 + ts) * (gauss(t.t0 + ts) + t.g2(t.d_hh, t.d_vh - ts)));

    m(HV, VV) = m(VH, VV) =
        0.125 * std::conj(t.vv) *
        (t.hv * t.phase(t.t0 + ts) * (gauss(t.t0 + ts) + t.g2(t.d_vv, t.d_hv + ts)) +
         t.vh * t.phase(t.t1 + ts) * (gauss(t.t1 + ts) + t.g2(t.d_vv, t.d_vh - ts)));

    m(HH, VV) = 0.25 * t.hh * std::conj(t.vv) * t.phase(t.t0 + t.t1 + 2.0 * ts) *
                (t.g2(t.t0 + ts, -(t.t1 + ts)) + t.g2(t.d_hv + ts, t.d_vh - ts));

    m(HV, VH) = 0.125 * (std::norm(t.hv) * dip_factor(t.d_hv + ts, t.k) +
                         std::norm(t.vh) * dip_factor(t.d_vh - ts, t.k) +
                         2.0 * (t.hv * std::conj(t.vh) * t.phase(t.t0 - t.t1)).real() *
                             t.g2(t.t0 + ts, t.t1 + ts));

    fill_lower(m);
    return m;
}

DensityMatrix biphoton_coincidence_state(const PolarizationAmplitudes& amps, const ScaledConfig& sc,
                                         const SpectralParams& spectral) {
    return DensityMatrix::from_unnormalized(coincidence_moments(amps, sc, spectral), kMinBranchProbability);
}

DensityMatrix biphoton_bunching_state(const PolarizationAmplitudes& amps, const ScaledConfig& sc,
                                      const SpectralParams& spectral, Side side) {
    return DensityMatrix::from_unnormalized(bunching_moments(amps, sc, spectral, side), kMinBranchProbability);
}

}  // namespace homlab::analytic
