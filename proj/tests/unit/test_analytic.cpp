#include "doctest.h"

#include <cmath>

#include "homlab/analytic.hpp"
#include "homlab/errors.hpp"
#include "support.hpp"

using namespace homlab;
using namespace homlab::analytic;
using homlab::testing::Generator;
using homlab::testing::max_abs_diff;

namespace {

const double kRt2 = std::sqrt(2.0);

SpectralParams spec(double eta, double k) { return SpectralParams::dimensionless(eta, k); }

ScaledConfig zero_config() { return ScaledConfig::post_only(0.0, 0.0, 0.0); }

}  // namespace

TEST_CASE("coincidence probability: headline values") {
    CHECK(coincidence_probability(PolarizationAmplitudes::singlet(), zero_config(), spec(8, 0.0)) ==
          doctest::Approx(1.0).epsilon(1e-15));
    CHECK(coincidence_probability(PolarizationAmplitudes::separable({0.3, 0.2}, {0.8, -0.1}), zero_config(),
                                  spec(8, -0.7)) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(bunching_probability(PolarizationAmplitudes::psi_plus(), zero_config(), spec(8, 0.2)) ==
          doctest::Approx(0.5));

    // |++> behind perpendicular equal media approaches one half.
    const double tau = 9.0;
    const auto sc = ScaledConfig::from_delays(0.0, 0.5 * tau, -0.5 * tau, -0.5 * tau, 0.5 * tau, 0.0, 0.0);
    CHECK(coincidence_probability(PolarizationAmplitudes::plus_plus(), sc, spec(8, 0.0)) ==
          doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("coincidence probability matches frozen reference moments") {
    // Reference values from an independent uniform-grid quadrature in a different phase gauge.
    const auto amps = PolarizationAmplitudes::normalize({0.3, 0.1}, {0.5, -0.2}, {-0.4, 0.3}, {0.2, 0.55});
    const auto sc = ScaledConfig::from_delays(0.7, 0.4, -0.3, 0.2, 0.5, 1.1, -0.6);
    const auto sp = spec(5.0, -0.4);
    CHECK(coincidence_probability(amps, sc, sp) == doctest::Approx(0.41039556493456886).epsilon(1e-10));

    const Matrix4c c = coincidence_moments(amps, sc, sp);
    CHECK(std::abs(c(0, 0) - 0.0345168598361) < 1e-11);
    CHECK(std::abs(c(0, 1) - cplx(-0.00267821127032, -0.0252808525219)) < 1e-11);
    CHECK(std::abs(c(0, 2) - cplx(-0.0146733504561, -0.0364054977181)) < 1e-11);
    CHECK(std::abs(c(0, 3) - cplx(-0.00205809037345, -0.00101489601852)) < 1e-11);
    CHECK(std::abs(c(1, 1) - 0.186727751763) < 1e-11);
    CHECK(std::abs(c(1, 2) - cplx(0.0766175946265, -0.0582268353051)) < 1e-11);
    CHECK(std::abs(c(1, 3) - cplx(0.00154005173476, -0.00923826896166)) < 1e-11);
    CHECK(std::abs(c(2, 3) - cplx(0.0058655672669, -0.000484071913651)) < 1e-11);
    CHECK(std::abs(c(3, 3) - 0.0024232015725) < 1e-11);

    const Matrix4c b = bunching_moments(amps, sc, sp, Side::A);
    CHECK(std::abs(b(0, 0) - 0.0336321553237) < 1e-11);
    CHECK(std::abs(b(0, 1) - cplx(0.0138449811262, -0.00916419205613)) < 1e-11);
    CHECK(std::abs(b(0, 3) - cplx(0.0229458153029, -0.0115590199476)) < 1e-11);
    CHECK(std::abs(b(1, 1) - 0.0440407042712) < 1e-11);
    CHECK(std::abs(b(1, 2) - 0.00798320733333) < 1e-11);
    CHECK(std::abs(b(1, 3) - cplx(0.035113831346, -0.0268386970666)) < 1e-11);
    CHECK(std::abs(b(3, 3) - 0.173088653667) < 1e-11);
    CHECK(b.trace().real() == doctest::Approx(0.29480221753273694).epsilon(1e-10));
}

TEST_CASE("special-case probabilities") {
    CHECK(pc_classical_dip(0.0, -0.3) == 0.0);
    CHECK(pc_classical_dip(2.5, 1.0) == 0.0);
    CHECK(pc_classical_dip(1.0, -1.0) == doctest::Approx(0.43233235838169365).epsilon(1e-14));

    CHECK(pc_zero_delay(PolarizationAmplitudes::singlet()) == doctest::Approx(1.0));
    CHECK(pc_zero_delay(PolarizationAmplitudes::plus_plus()) == doctest::Approx(0.0));
    CHECK(pc_zero_delay(PolarizationAmplitudes::psi_plus()) == doctest::Approx(0.0));

    const double sigma = 1e13;
    CHECK(pc_product_state(2.903, 4e-13, 4e-13, -1.0, sigma) == 0.0);
    CHECK(pc_product_state(2.903, 0.3 / sigma, 0.0, -1.0, sigma) ==
          doctest::Approx(0.39030821500022167).epsilon(1e-12));

    // |HH>: no cross term, Pc = 0 at tau = 0.
    CHECK(pc_perpendicular(PolarizationAmplitudes(1.0, 0.0, 0.0, 0.0), 0.0, 0.3, 8.0) == doctest::Approx(0.0));
    // (|HV> + e^{i phi}|VH>)/sqrt2 at K = -1 with 2 eta tau - phi = pi reaches 1.
    const double phi = 0.7, eta = 8.0;
    const double tau = (M_PI + phi) / (2.0 * eta);
    const auto amps = PolarizationAmplitudes(0.0, 1.0 / kRt2, std::polar(1.0 / kRt2, phi), 0.0);
    CHECK(pc_perpendicular(amps, tau, -1.0, eta) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("reduction chain at 25 parameter points each") {
    Generator gen(11);
    for (int i = 0; i < 25; ++i) {
        const double k = gen.uniform(-1.0, 1.0);
        const double eta = gen.uniform(0.5, 12.0);
        const auto sp = spec(eta, k);

        // Classical dip: separable identical input, free delay only.
        const double d = gen.uniform(-4.0, 4.0);
        const auto sep = gen.separable();
        CHECK(coincidence_probability(sep, ScaledConfig::post_only(d, gen.uniform(-3, 3), gen.uniform(-3, 3)), sp) ==
              doctest::Approx(pc_classical_dip(d, k)).epsilon(1e-12));

        // Zero delay with identical channels.
        const auto amps = gen.amplitudes();
        const double sh = gen.uniform(-2, 2), sv = gen.uniform(-2, 2);
        CHECK(coincidence_probability(amps, ScaledConfig::from_delays(0.0, sh, sv, sh, sv, 1.0, 2.0), sp) ==
              doctest::Approx(pc_zero_delay(amps)).epsilon(1e-12));

        // |ll> through the same medium with different interaction times.
        const double sigma = 2.0 * M_PI * 650e9;
        const double n = gen.uniform(1.0, 3.0), t0 = gen.uniform(0.0, 2e-12), t1 = gen.uniform(0.0, 2e-12);
        const double other = gen.uniform(1.0, 3.0);
        const auto hh = PolarizationAmplitudes(1.0, 0.0, 0.0, 0.0);
        const auto sc_hh = ScaledConfig::from_delays(0.0, sigma * n * t0, sigma * other * t0, sigma * n * t1,
                                                     sigma * other * t1, 0.0, 0.0);
        CHECK(coincidence_probability(hh, sc_hh, sp) ==
              doctest::Approx(pc_product_state(n, t0, t1, k, sigma)).epsilon(1e-12));

        // Perpendicular fast axes.
        const double tau = gen.uniform(-3.0, 3.0), c = gen.uniform(-1.0, 1.0);
        const auto sc_perp = ScaledConfig::from_delays(0.0, c + 0.5 * tau, c - 0.5 * tau, c - 0.5 * tau,
                                                       c + 0.5 * tau, 0.0, 0.0);
        CHECK(coincidence_probability(amps, sc_perp, sp) ==
              doctest::Approx(pc_perpendicular(amps, tau, k, eta)).epsilon(1e-12));
    }
}

TEST_CASE("Bell decoherence functions") {
    const double d = -1.36;
    CHECK(std::abs(lambda_c(-d, -d, d, -0.4, 8.0).value() - cplx(-1.0, 0.0)) < 1e-15);
    CHECK(std::abs(lambda_c(0.7, 0.7, 2.0, 1.0, 8.0).value() - cplx(-1.0, 0.0)) < 1e-15);
    CHECK(lambda_b(-d, d, 0.3).value().real() == 1.0);
    CHECK(lambda_b(0.4, d, 1.0).value().real() == 1.0);
    CHECK(lambda_b(0.0, d, 0.0).magnitude() == doctest::Approx(0.15730007376080368).epsilon(1e-14));

    Generator gen(5);
    for (int i = 0; i < 50; ++i) {
        const double tau = gen.uniform(-5, 5), dd = gen.uniform(-5, 5), k = gen.uniform(-1, 1);
        CHECK(std::abs(lambda_b(tau, dd, k).value() + lambda_c(tau, tau, dd, k, gen.uniform(1, 20)).value()) <
              1e-12);
    }

    // One-sided noise at K = -1 recoheres fully at tauA = -2 dtau_f.
    CHECK(lambda_c(-2.0 * d, 0.0, d, -1.0, 8.0).magnitude() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("Bell states from the |HV> input") {
    const double d = 0.9;
    const auto at_peak = bell_states(-d, -d, d, -0.3, 8.0);
    CHECK(at_peak.coincidence.fidelity_with_pure(bell::psi_minus()) == doctest::Approx(1.0).epsilon(1e-14));

    const auto washed = bell_states(0.0, 0.0, 30.0, 0.0, 8.0);
    CHECK(std::abs(washed.coincidence(1, 2)) < 1e-15);
    CHECK(std::abs(washed.bunching_a(1, 2)) < 1e-15);
    CHECK(washed.bunching_a(1, 1).real() == doctest::Approx(0.5));

    // Agrees with the general coincidence state for |HV> without pre-splitter noise.
    Generator gen(8);
    for (int i = 0; i < 10; ++i) {
        const double ta = gen.uniform(-4, 4), tb = gen.uniform(-4, 4), dd = gen.uniform(-4, 4);
        const double k = gen.uniform(-1, 1), eta = gen.uniform(1, 12);
        const auto sc = ScaledConfig::post_only(dd, ta, tb);
        const auto hv = PolarizationAmplitudes::horizontal_vertical();
        const auto general_c = biphoton_coincidence_state(hv, sc, spec(eta, k));
        const auto general_b = biphoton_bunching_state(hv, sc, spec(eta, k), Side::A);
        const auto bell = bell_states(ta, tb, dd, k, eta);
        CHECK(max_abs_diff(general_c.matrix(), bell.coincidence.matrix()) < 1e-12);
        CHECK(max_abs_diff(general_b.matrix(), bell.bunching_a.matrix()) < 1e-12);
    }
}

TEST_CASE("biphoton states: exact special cases and errors") {
    const auto singlet = biphoton_coincidence_state(PolarizationAmplitudes::singlet(), zero_config(), spec(8, 0.0));
    CHECK(singlet.fidelity_with_pure(bell::psi_minus()) == doctest::Approx(1.0).epsilon(1e-14));

    const auto plus = biphoton_bunching_state(PolarizationAmplitudes::psi_plus(), zero_config(), spec(8, 0.4), Side::A);
    CHECK(plus.fidelity_with_pure(bell::psi_plus()) == doctest::Approx(1.0).epsilon(1e-14));

    CHECK_THROWS_AS(biphoton_coincidence_state(PolarizationAmplitudes::plus_plus(), zero_config(), spec(8, 0.0)),
                    UndefinedStateError);
    CHECK_THROWS_AS(
        biphoton_bunching_state(PolarizationAmplitudes::singlet(), zero_config(), spec(8, 0.0), Side::B),
        UndefinedStateError);
}

TEST_CASE("biphoton states satisfy density-matrix invariants on random inputs") {
    Generator gen(99);
    for (int i = 0; i < 100; ++i) {
        const auto amps = gen.amplitudes();
        const auto sc = gen.config(4.0);
        const auto sp = spec(gen.uniform(0.5, 12.0), gen.uniform(-1.0, 1.0));
        // Construction validates Hermiticity, trace and positivity.
        const auto c = biphoton_coincidence_state(amps, sc, sp);
        const auto a = biphoton_bunching_state(amps, sc, sp, Side::A);
        const auto b = biphoton_bunching_state(amps, sc, sp, Side::B);
        // Both photons of a bunched pair carry the same reduced state.
        CHECK(max_abs_diff(a.trace_out_first().matrix(), a.trace_out_second().matrix()) < 1e-12);
        CHECK(max_abs_diff(b.trace_out_first().matrix(), b.trace_out_second().matrix()) < 1e-12);
        const double pc = coincidence_probability(amps, sc, sp);
        CHECK(pc + 2.0 * bunching_probability(amps, sc, sp) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(coincidence_moments(amps, sc, sp).trace().real() == doctest::Approx(pc).epsilon(1e-12));
        CHECK(bunching_moments(amps, sc, sp, Side::B).trace().real() ==
              doctest::Approx(0.5 * (1.0 - pc)).epsilon(1e-12));
        (void)c;
    }
}

TEST_CASE("single-photon states and the kappa factors") {
    const auto sep = PolarizationAmplitudes::separable(1.0, 1.0);
    const auto sp = spec(8.0, -0.6);
    const auto at_zero = single_photon_states(sep, ScaledConfig::post_only(1.5, 0.0, 0.0), sp, Side::A);
    const auto plus = DensityMatrix::pure(Eigen::Vector2cd(1.0 / kRt2, 1.0 / kRt2));
    CHECK(max_abs_diff(at_zero.coincidence.matrix(), plus.matrix()) < 1e-12);
    CHECK(max_abs_diff(at_zero.bunching.matrix(), plus.matrix()) < 1e-12);
    CHECK(std::abs(kappa_pm(0.0, 1.5, -0.6, 8.0, -1) - 1.0) < 1e-14);
    CHECK(std::abs(kappa_pm(0.0, 1.5, -0.6, 8.0, +1) - 1.0) < 1e-14);

    Generator gen(21);
    for (int i = 0; i < 30; ++i) {
        const auto amps = gen.separable();
        const double ta = gen.uniform(-5, 5), d = gen.uniform(-4, 4), k = gen.uniform(-1, 0.9);
        const double eta = gen.uniform(1, 12);
        const auto st = single_photon_states(amps, ScaledConfig::post_only(d, ta, gen.uniform(-3, 3)), spec(eta, k), Side::A);
        const cplx in = amps.hh() * std::conj(amps.vh()) + amps.hv() * std::conj(amps.vv());
        CHECK(std::abs(st.coincidence(0, 1) - in * kappa_pm(ta, d, k, eta, -1)) < 1e-12);
        CHECK(std::abs(st.bunching(0, 1) - in * kappa_pm(ta, d, k, eta, +1)) < 1e-12);
        CHECK(st.pc + 2.0 * st.pb == doctest::Approx(1.0));
    }

    // The bunching coherence tends to the single-photon dephasing as K -> 1.
    for (double ta : {-2.0, 0.5, 3.0})
        CHECK(std::abs(kappa_pm(ta, 2.0, 1.0 - 1e-9, 8.0, +1) - kappa(ta, 8.0)) < 1e-7);

    CHECK_THROWS_AS(kappa_pm(1.0, 0.0, 0.0, 8.0, -1), UndefinedStateError);
}

TEST_CASE("ideal-detector state") {
    const auto pp = PolarizationAmplitudes::plus_plus();
    const auto rho = ideal_detector_state(pp, ScaledConfig::post_only(2.0, 1.0, 0.0), spec(8.0, 0.3));
    CHECK(std::abs(rho(0, 1) - 0.5 * std::exp(cplx(-0.5, 8.0))) < 1e-15);

    // At tauA = 0 it is the average of the two input single-photon states.
    const auto amps = PolarizationAmplitudes::normalize({0.3, 0.1}, {0.5, -0.2}, {-0.4, 0.3}, {0.2, 0.55});
    const auto avg = ideal_detector_state(amps, ScaledConfig::post_only(1.0, 0.0, 0.5), spec(8.0, 0.0));
    Eigen::Matrix2cd first, second;
    first << std::norm(amps.hh()) + std::norm(amps.hv()), amps.hh() * std::conj(amps.vh()) + amps.hv() * std::conj(amps.vv()),
        0.0, std::norm(amps.vh()) + std::norm(amps.vv());
    second << std::norm(amps.hh()) + std::norm(amps.vh()), amps.hh() * std::conj(amps.hv()) + amps.vh() * std::conj(amps.vv()),
        0.0, std::norm(amps.hv()) + std::norm(amps.vv());
    first(1, 0) = std::conj(first(0, 1));
    second(1, 0) = std::conj(second(0, 1));
    CHECK(max_abs_diff(avg.matrix(), 0.5 * (first + second)) < 1e-15);

    // Coherence magnitude does not depend on K or the free delay.
    const cplx input = 0.5 * (first(0, 1) + second(0, 1));
    for (double k : {-1.0, -0.5, 0.0, 0.5, 1.0})
        for (double d : {0.0, 1.0, 3.0}) {
            const auto r = ideal_detector_state(amps, ScaledConfig::post_only(d, 1.3, 0.0), spec(8.0, k));
            CHECK(std::abs(r(0, 1)) == doctest::Approx(std::abs(input) * std::exp(-0.5 * 1.3 * 1.3)).epsilon(1e-14));
        }

    CHECK_THROWS_AS(ideal_detector_state(pp, ScaledConfig::from_delays(0, 1, 0, 0, 0, 0, 0), spec(8.0, 0.0)),
                    ContractViolation);
}

TEST_CASE("dead-time state") {
    const auto sep = PolarizationAmplitudes::separable(1.0, 1.0);
    const auto at_zero = deadtime_state(sep, ScaledConfig::post_only(2.0, 0.0, 0.0), spec(8.0, -1.0));
    CHECK(at_zero(0, 1).real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(std::abs(kappa_rn(0.0, 2.0, -1.0, 8.0) - 1.0) < 1e-15);

    for (double ta : {-1.0, 2.0, 4.0})
        CHECK(std::abs(kappa_rn(ta, 2.0, 1.0, 8.0) - kappa(ta, 8.0)) < 1e-15);

    // K = -1, |dtau_f| = 2: the recoherence peak sits near 2|dtau_f| with
    // height close to 1/6.
    double best = 0.0, at = 0.0;
    for (double ta = 3.0; ta <= 6.0; ta += 1e-3) {
        const double m = std::abs(kappa_rn(ta, 2.0, -1.0, 8.0));
        if (m > best) best = m, at = ta;
    }
    CHECK(at == doctest::Approx(4.0).epsilon(0.02));
    CHECK(best == doctest::Approx(1.0 / 6.0).epsilon(1e-3));

    CHECK_THROWS_AS(deadtime_state(PolarizationAmplitudes::singlet(), ScaledConfig::post_only(1, 0, 0), spec(8, 0)),
                    ContractViolation);
}

TEST_CASE("trace-distance approximation and nu states") {
    const auto opt = PolarizationAmplitudes::discrimination_optimal();
    CHECK(trace_distance_cb_approx(opt, -3.0, 6.0, -1.0) == doctest::Approx(1.0 / kRt2).epsilon(1e-12));
    CHECK(trace_distance_cb_approx(opt, -12.0, 0.0, -1.0) < 1e-30);

    // Exact and approximate trace distances agree well outside the dip.
    for (const auto& amps : {opt, PolarizationAmplitudes::separable(1.0, 1.0)}) {
        for (double ta = -10.0; ta <= 10.0; ta += 0.25) {
            const auto st = single_photon_states(amps, ScaledConfig::post_only(-3.0, ta, 0.0), spec(8.0, -1.0), Side::A);
            CHECK(trace_distance(st.coincidence, st.bunching) ==
                  doctest::Approx(trace_distance_cb_approx(amps, -3.0, ta, -1.0)).epsilon(1e-6));
        }
    }

    // Separable optimum: one half at tauA = +-2 dtau_f.
    CHECK(trace_distance_cb_approx(PolarizationAmplitudes::separable(1, 1), -3.0, 6.0, -1.0) ==
          doctest::Approx(0.5).epsilon(1e-9));
    CHECK(trace_distance_cb_approx(PolarizationAmplitudes::separable(1, 1), -3.0, -6.0, -1.0) ==
          doctest::Approx(0.5).epsilon(1e-9));

    const auto early = nu_states(0.0, -8.0, 3.0);
    CHECK(max_abs_diff(early.coincidence.matrix(), early.bunching.matrix()) < 1e-13);
    const auto peak = nu_states(16.0, -8.0, 3.0);
    CHECK(trace_distance(peak.coincidence, peak.bunching) == doctest::Approx(1.0 / kRt2).epsilon(1e-12));

    // Halfway: both revival terms equal e^{-dtau_f^2/2}, nu_- vanishes.
    const cplx half_minus = nu(3.0, -3.0, 1.0, -1);
    const cplx half_plus = nu(3.0, -3.0, 1.0, +1);
    CHECK(std::abs(half_minus) < 1e-16);
    CHECK(std::abs(half_plus - std::polar(kRt2 * std::exp(-4.5), 3.0)) < 1e-15);

    // The nu states are the exact K = -1 single-photon states up to the tiny
    // deviation of Pc from one half.
    for (double ta : {0.0, 2.0, 6.0, 9.0}) {
        const auto exact = single_photon_states(opt, ScaledConfig::post_only(-6.0, ta, 0.0), spec(8.0, -1.0), Side::A);
        const auto nus = nu_states(ta, -6.0, 8.0);
        CHECK(max_abs_diff(exact.coincidence.matrix(), nus.coincidence.matrix()) < 1e-14);
        CHECK(max_abs_diff(exact.bunching.matrix(), nus.bunching.matrix()) < 1e-14);
    }
}

TEST_CASE("discrimination pipeline") {
    const double hi = (kRt2 + 1.0) / (2.0 * kRt2);
    const double lo = (kRt2 - 1.0) / (2.0 * kRt2);
    const auto ideal = discrimination_pipeline(-6.0, 8.0, Weighting::idealized);
    CHECK(ideal.success_rate == doctest::Approx((2.0 + kRt2) / 4.0).epsilon(1e-12));
    CHECK(std::abs(ideal.rotated_c(0, 1)) < 1e-12);
    CHECK(std::abs(ideal.rotated_b(0, 1)) < 1e-12);
    CHECK(ideal.rotated_c(0, 0).real() == doctest::Approx(hi).epsilon(1e-12));
    CHECK(ideal.rotated_b(1, 1).real() == doctest::Approx(hi).epsilon(1e-12));
    CHECK(ideal.rotated_b(0, 0).real() == doctest::Approx(lo).epsilon(1e-12));
    CHECK(ideal.h_branch_c_fraction == doctest::Approx(hi).epsilon(1e-12));

    const auto exact = discrimination_pipeline(-3.0, 8.0, Weighting::exact);
    CHECK(std::abs(exact.success_rate - 0.8535533905932737) < 1e-7);
    CHECK(exact.weight_c + exact.weight_b == doctest::Approx(1.0));

    // Rotating by R(pi/2) with phi = 0 sends |+> to |V> and |-> to |H>.
    const Matrix2c r = rotation_half_pi(0.0);
    CHECK(std::abs((r * Eigen::Vector2cd(1.0 / kRt2, 1.0 / kRt2))(0)) < 1e-15);
    CHECK(std::abs((r * Eigen::Vector2cd(1.0 / kRt2, -1.0 / kRt2))(1)) < 1e-15);
    CHECK((r * r.adjoint() - Matrix2c::Identity()).norm() < 1e-15);
}

TEST_CASE("decoherence values are bounded") {
    CHECK_THROWS_AS(DecoherenceValue(cplx(0.9, 0.5)), InvariantViolation);
    CHECK(DecoherenceValue(std::polar(1.0, 0.3)).magnitude() == doctest::Approx(1.0));
}
