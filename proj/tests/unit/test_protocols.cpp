#include <doctest.h>

#include <cmath>
#include <random>

#include "homlab/errors.hpp"
#include "homlab/protocols.hpp"
#include "support.hpp"

using namespace homlab;
using namespace homlab::protocols;

namespace {

constexpr double kSigma = 2.0 * M_PI * 650e9;

std::vector<TomographySample> kappa_rn_samples(double k, double d, int count = 41, double hi = 10.0) {
    std::vector<TomographySample> out;
    for (int i = 0; i < count; ++i) {
        const double t = hi * i / (count - 1);
        out.push_back({t, kappa_rn_magnitude(t, k, d)});
    }
    return out;
}

}  // namespace

TEST_CASE("sweep and result plumbing") {
    const Sweep s{-1.0, 1.0, 5};
    CHECK(s.values() == std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});
    CHECK(s.at(4) == 1.0);
    CHECK_THROWS_AS(Sweep({0.0, 1.0, 1}).validate(), ContractViolation);
    CHECK_THROWS_AS(Sweep({0.0, INFINITY, 3}).validate(), ContractViolation);

    ProtocolResult r("x", {0.0, 1.0});
    r.add_column("a", "test", {1.0, 2.0});
    CHECK_THROWS_AS(r.add_column("b", "test", {1.0}), InvariantViolation);
    CHECK_THROWS_AS(r.add_column("c", "test", {1.0, NAN}), InvariantViolation);
    r.add_complex_column("z", "test", {cplx{1, 2}, cplx{3, 4}});
    CHECK(r.column("z_im").values[1] == 4.0);
    CHECK_THROWS_AS(r.column("missing"), ContractViolation);

    const Peak p = maximize([](double x) { return -(x - 0.3) * (x - 0.3); }, -2.0, 2.0);
    CHECK(p.at == doctest::Approx(0.3).epsilon(1e-8));
}

TEST_CASE("dip scan rows and width ratio") {
    const auto r = dip_scan({-2.0, 2.0, 41});
    for (const auto& c : r.columns()) CHECK(c.values[20] == doctest::Approx(0.0).epsilon(1e-15));
    const auto noisy = dip_scan({0.3, 0.6, 2}).column("pc_noisy_medium").values[0];
    CHECK(noisy == doctest::Approx(0.39030821500022167).epsilon(1e-14));

    const double classical = dip_fwhm([](double x) { return analytic::pc_classical_dip(x, -1.0); }, 0.5, 10.0);
    const double medium =
        dip_fwhm([](double x) { return analytic::pc_product_state(2.903, x, 0.0, -1.0, 1.0); }, 0.5, 10.0);
    CHECK(std::abs(medium - classical / 2.903) < 1e-6);
    CHECK_THROWS_AS(dip_fwhm([](double) { return 0.0; }, 0.5, 1.0), ContractViolation);
}

TEST_CASE("parallel Bell scan peaks at -dtau_f with unit height for every K") {
    const double dtau_f = -1.36;
    for (double k : {-1.0, -0.5, 0.0, 0.5, 0.95}) {
        const auto r = bell_scan(BellProtocol::parallel, dtau_f, k, 4.0, {0.0, 3.0, 301});
        const Peak p = column_peak(r, "lambda_c_abs");
        CHECK(p.at == doctest::Approx(-dtau_f).epsilon(1e-12));
        CHECK(p.value == doctest::Approx(1.0).epsilon(1e-12));
    }
    // Fully correlated frequencies never dephase on the parallel line.
    const auto flat = bell_scan(BellProtocol::parallel, dtau_f, 1.0, 4.0, {0.0, 3.0, 31});
    for (double v : flat.column("lambda_c_abs").values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(bell_scan(BellProtocol::parallel, dtau_f, 1.2, 4.0, {0.0, 1.0, 2}), ContractViolation);
}

TEST_CASE("none protocol is flat and one-sided reaches unity at K = -1") {
    const double dtau_f = -1.36, k = -0.4;
    const auto flat = bell_scan(BellProtocol::none, dtau_f, k, 4.0, {-3.0, 3.0, 31});
    for (double v : flat.column("lambda_c_abs").values)
        CHECK(v == doctest::Approx(std::exp(-(1.0 - k) * dtau_f * dtau_f)).epsilon(1e-14));

    const auto one = bell_scan(BellProtocol::one_sided, dtau_f, -1.0, 4.0, {0.0, 6.0, 601});
    CHECK(column_peak(one, "lambda_c_abs").value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(column_peak(one, "lambda_c_abs").at == doctest::Approx(2.72).epsilon(1e-12));
    for (double v : one.column("tauB").values) CHECK(v == 0.0);
}

TEST_CASE("physical Bell scan peaks near 11.1 mm") {
    for (double k : {0.0, -1.0}) {
        PhysicalBellSetup setup;
        setup.k = k;
        const auto r = bell_scan_physical(BellProtocol::parallel, setup, {5.0, 17.0, 1201});
        const Peak p = column_peak(r, "lambda_c_abs");
        CHECK(std::abs(p.at - 11.1) < 0.3);
        CHECK(p.value == doctest::Approx(1.0).epsilon(1e-6));
        const auto perp = bell_scan_physical(BellProtocol::perpendicular, setup, {5.0, 17.0, 121});
        CHECK(column_peak(perp, "lambda_c_abs").value <= 1.0 + 1e-12);
    }
    for (double k : {0.0, -0.5, -1.0}) {
        const auto free = free_path_scan(kSigma, k, {0.0, 0.2, 3});
        CHECK(free.column("coherence").values[0] == 1.0);
        CHECK(free.column("coherence").values[2] < 0.02);
    }
    CHECK_THROWS_AS(free_path_scan(0.0, 0.0, {0.0, 1.0, 2}), ContractViolation);
}

TEST_CASE("sigma_z trick yields Psi+ on every branch") {
    for (double k : {-1.0, -0.3, 0.0, 0.7}) {
        const auto o = sigma_z_protocol(-1.5, k, 6.0);
        CHECK(o.fidelity_coincidence == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(o.fidelity_bunch_a == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(o.fidelity_bunch_b == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(o.p_coincidence + o.p_bunch_a + o.p_bunch_b == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(o.success_rate == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("detuned sigma_z fidelity follows the closed form") {
    const double dtau_f = -2.0, k = -0.6;
    const auto o = sigma_z_protocol(dtau_f, k, 6.0, -dtau_f * 1.1);
    const double expected = 0.5 * (1.0 + std::exp(-(1.0 - k) * std::pow(0.1 * dtau_f, 2)));
    CHECK(o.fidelity_coincidence == doctest::Approx(expected).epsilon(1e-12));
    CHECK(o.fidelity_coincidence < 1.0);
}

TEST_CASE("dead-time requirement arithmetic") {
    const auto a = deadtime_requirement(1e-9, 1.509, 1.5, 3.3e-13);
    CHECK(std::abs(a.required_off_span - 6.33e-12) < 1e-12 * 6.33e-12);
    CHECK(a.min_pair_spacing == 3.3e-13);
    const auto b = deadtime_requirement(0.0, 1.54, 1.549, -2e-13);
    CHECK(b.required_off_span == 2e-13);
    const auto c = deadtime_requirement(2e-9, 1.5, 2.0, 0.0);
    CHECK(std::abs(c.required_off_span - 2e-9 / 3.0) < 1e-12 * c.required_off_span);

    double previous = -1.0;
    for (int i = 0; i <= 20; ++i) {
        const double span = deadtime_requirement(i * 1e-10, 1.509, 1.5, 3.3e-13).required_off_span;
        CHECK(span > previous);
        previous = span;
    }
    CHECK_THROWS_AS(deadtime_requirement(1e-9, 0.5, 1.5, 0.0), InvariantViolation);
    CHECK_THROWS_AS(deadtime_requirement(-1.0, 1.5, 1.5, 0.0), InvariantViolation);
}

TEST_CASE("tomography recovers noiseless parameters") {
    for (auto [k, d] : {std::pair{-1.0, 2.0}, std::pair{-0.8, 3.0}, std::pair{-0.3, 2.5}}) {
        const auto fit = tomography_fit(kappa_rn_samples(k, d));
        CHECK(std::abs(fit.k_hat - k) < 1e-6);
        CHECK(std::abs(fit.abs_dtau_f_hat - d) < 1e-6);
        CHECK_FALSE(fit.peak_unresolved);
    }
}

TEST_CASE("tomography accepts complex coherences") {
    std::vector<std::pair<double, cplx>> data;
    for (int i = 0; i < 30; ++i) {
        const double t = 0.3 * i;
        data.emplace_back(t, analytic::kappa_rn(t, 2.0, -1.0, 7.0));
    }
    const auto fit = tomography_fit(data);
    CHECK(std::abs(fit.k_hat + 1.0) < 1e-6);
    CHECK(std::abs(fit.abs_dtau_f_hat - 2.0) < 1e-6);
}

TEST_CASE("plain Gaussian dephasing raises the unresolved flag") {
    std::vector<TomographySample> data;
    for (int i = 0; i < 41; ++i) {
        const double t = 0.25 * i;
        data.push_back({t, std::abs(analytic::kappa(t, 3.0))});
    }
    CHECK(tomography_fit(data).peak_unresolved);
}

TEST_CASE("tomography rejects degenerate data") {
    std::vector<TomographySample> few(7, {0.0, 1.0});
    CHECK_THROWS_AS(tomography_fit(few), NoFitError);
    std::vector<TomographySample> flat;
    for (int i = 0; i < 10; ++i) flat.push_back({0.1 * i, 0.5});
    CHECK_THROWS_AS(tomography_fit(flat), NoFitError);
    flat[3].magnitude = NAN;
    CHECK_THROWS_AS(tomography_fit(flat), NoFitError);
}

TEST_CASE("tomography with one percent noise stays within five percent") {
    const auto clean = kappa_rn_samples(-0.8, 3.0);
    int within = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> noise(0.0, 0.01);
        auto data = clean;
        for (auto& s : data) s.magnitude *= 1.0 + noise(rng);
        const auto fit = tomography_fit(data);
        if (std::abs(fit.k_hat + 0.8) < 0.05 * 0.8 && std::abs(fit.abs_dtau_f_hat - 3.0) < 0.05 * 3.0) ++within;
    }
    CHECK(within == 100);
}

TEST_CASE("dead-time coherence scan columns") {
    const auto r = deadtime_coherence_scan({{-1.0, 2.0}, {-0.8, 3.0}}, {0.0, 8.0, 81});
    CHECK(r.columns().size() == 3);
    CHECK(r.column("kappa_rn_abs_k-1_d2").values[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.column("kappa_rn_abs_k-0.8_d3").values[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.column("kappa_abs").values[0] == 1.0);
}

TEST_CASE("discrimination scan reaches 1/sqrt2 and the ideal success rate") {
    const double dtau_f = -3.0;
    const auto r = discrimination_scan(dtau_f, 8.0, {0.0, 12.0, 241});
    const Peak d = column_peak(r, "trace_distance");
    CHECK(d.at == doctest::Approx(-2.0 * dtau_f));
    CHECK(d.value == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));
    const auto row = static_cast<std::size_t>(120);
    CHECK(r.sweep()[row] == 6.0);
    CHECK(r.column("success_idealized").values[row] == doctest::Approx(0.8535533905932737).epsilon(1e-6));
    CHECK(r.column("success_exact").values[row] == doctest::Approx(0.8535533905932737).epsilon(1e-6));
    // The c and b trajectories overlap away from the recoherence peak.
    CHECK(std::abs(r.column("bloch_c_x").values[0] - r.column("bloch_b_x").values[0]) < 1e-6);
    CHECK(std::abs(r.column("bloch_c_y").values[0] - r.column("bloch_b_y").values[0]) < 1e-6);
    for (std::size_t i = 0; i < r.rows(); ++i) {
        CHECK(std::abs(r.column("trace_distance").values[i] - r.column("trace_distance_approx").values[i]) < 2e-6);
        CHECK(std::abs(std::hypot(r.column("nu_minus_re").values[i], r.column("nu_minus_im").values[i]) -
                       r.column("nu_minus_abs").values[i]) < 1e-15);
    }
}

TEST_CASE("purity at the recoherence peak matches the zero-delay purity") {
    const auto r = discrimination_scan(-3.0, 8.0, {0.0, 6.0, 2});
    CHECK(r.column("purity_c").values[1] == doctest::Approx(r.column("purity_c").values[0]).epsilon(1e-9));
    CHECK(r.column("purity_b").values[1] == doctest::Approx(r.column("purity_b").values[0]).epsilon(1e-9));
    CHECK(r.column("purity_c").values[0] == doctest::Approx(0.75).epsilon(1e-7));
}

TEST_CASE("pseudo-HOM fractions are probabilities and branches are complementary") {
    const Sweep sweep{0.0, 12.0, 97};
    const auto h = pseudo_hom_scan(-3.0, 8.0, sweep, Pol::H);
    const auto v = pseudo_hom_scan(-3.0, 8.0, sweep, Pol::V);
    for (const auto* r : {&h, &v})
        for (const auto& c : r->columns())
            for (double x : c.values) {
                CHECK(x >= -1e-15);
                CHECK(x <= 1.0 + 1e-15);
            }
    for (std::size_t i = 0; i < sweep.values().size(); ++i) {
        CHECK(h.column("c_fraction").values[i] + v.column("c_fraction").values[i] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(h.column("raw_fraction").values[i] + v.column("raw_fraction").values[i] == doctest::Approx(1.0).epsilon(1e-12));
    }
    // At the peak the H branch is enriched in c photons.
    CHECK(h.column("corrected_fraction").values[48] > 0.8);
}

TEST_CASE("temporal densities are normalized") {
    const double sigma = 1.7;
    const auto spectral = SpectralParams::with_sigma(4.0, -0.6, sigma);
    const double h = 0.01 / sigma, span = 8.0 / sigma;
    const int n = static_cast<int>(2 * span / h);
    double joint = 0.0, margin = 0.0, conditional = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double s0 = -span + i * h;
        const auto one = temporal_distribution(spectral, s0, 0.3);
        margin += one.margin0 * h;
        conditional += one.conditional * h;
        for (int j = 0; j <= n; j += 4) joint += temporal_distribution(spectral, s0, -span + j * h).joint * h * 4 * h;
    }
    CHECK(joint == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(margin == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(conditional == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("conditional arrival time") {
    const double sigma = 2.0;
    const auto anti = SpectralParams::with_sigma(1.0, -0.99, sigma);
    CHECK(conditional_mean(anti, 2.0 / sigma) == doctest::Approx(1.98 / sigma).epsilon(1e-14));
    CHECK(conditional_variance(anti) == doctest::Approx(1.0 / (4.0 * sigma * sigma)).epsilon(1e-15));

    const auto free = SpectralParams::with_sigma(1.0, 0.0, sigma);
    CHECK(conditional_density(free, 0.4, -3.0) == doctest::Approx(conditional_density(free, 0.4, 5.0)).epsilon(1e-15));
    CHECK(conditional_density(free, 0.4, 1.0) == doctest::Approx(temporal_distribution(free, 0.4, 1.0).margin0).epsilon(1e-14));

    const auto edge = SpectralParams::with_sigma(1.0, -1.0, sigma);
    CHECK_THROWS_AS(temporal_distribution(edge, 0.0, 0.0), DegenerateDistributionError);
    CHECK(conditional_mean(edge, 1.5) == 1.5);
    CHECK(std::isfinite(conditional_density(edge, 1.5, 1.5)));
    CHECK_THROWS(conditional_density(SpectralParams::dimensionless(1.0, 0.0), 0.0, 0.0));
}

TEST_CASE("tomography refines parameters that fall between coarse grid nodes") {
    for (auto [k, d] : {std::pair{-0.437, 2.71}, std::pair{-0.912, 1.63}, std::pair{0.35, 3.33}}) {
        const auto fit = tomography_fit(kappa_rn_samples(k, d, 61, 12.0));
        CHECK(std::abs(fit.k_hat - k) < 1e-6);
        CHECK(std::abs(fit.abs_dtau_f_hat - d) < 1e-6);
        CHECK(fit.iterations > 0);
    }
}
