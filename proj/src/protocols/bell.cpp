// Bell-state engineering with post-splitter dephasing.

#include <cmath>

#include "homlab/errors.hpp"
#include "homlab/format.hpp"
#include "homlab/protocols.hpp"

namespace homlab::protocols {

namespace {

const char* protocol_name(BellProtocol p) {
    switch (p) {
        case BellProtocol::parallel: return "parallel";
        case BellProtocol::perpendicular: return "perpendicular";
        case BellProtocol::one_sided: return "one_sided";
        case BellProtocol::none: return "none";
    }
    return "unknown";
}

std::pair<double, double> receiver_times(BellProtocol p, double tau) {
    switch (p) {
        case BellProtocol::parallel: return {tau, tau};
        case BellProtocol::perpendicular: return {tau, -tau};
        case BellProtocol::one_sided: return {tau, 0.0};
        case BellProtocol::none: return {0.0, 0.0};
    }
    return {0.0, 0.0};
}

// Fills the columns shared by the dimensionless and physical scans.
void add_bell_columns(ProtocolResult& out, const std::vector<double>& ta, const std::vector<double>& tb,
                      double dtau_f, double k, double eta) {
    std::vector<double> c_abs, b_abs;
    std::vector<cplx> c_val;
    for (std::size_t i = 0; i < ta.size(); ++i) {
        const auto lc = analytic::lambda_c(ta[i], tb[i], dtau_f, k, eta);
        c_abs.push_back(lc.magnitude());
        c_val.push_back(lc.value());
        b_abs.push_back(analytic::lambda_b(ta[i], dtau_f, k).magnitude());
    }
    out.add_column("tauA", "receiver A dephasing time", ta);
    out.add_column("tauB", "receiver B dephasing time", tb);
    out.add_column("lambda_c_abs", "nonlocal decoherence function of the coincidence state", std::move(c_abs));
    out.add_complex_column("lambda_c", "nonlocal decoherence function of the coincidence state", c_val);
    out.add_column("lambda_b_abs", "coherence of pairs bunched at A", std::move(b_abs));
}

}  // namespace

ProtocolResult bell_scan(BellProtocol protocol, double dtau_f, double k, double eta, const Sweep& tau) {
    if (!(std::abs(k) <= 1.0)) throw ContractViolation("bell_scan: |k| must be <= 1");
    ProtocolResult out("tau", tau.values());
    std::vector<double> ta, tb;
    for (double t : out.sweep()) {
        const auto [a, b] = receiver_times(protocol, t);
        ta.push_back(a);
        tb.push_back(b);
    }
    add_bell_columns(out, ta, tb, dtau_f, k, eta);
    out.set_metadata("protocol", protocol_name(protocol));
    out.set_metadata("dtau_f", format_double(dtau_f));
    out.set_metadata("k", format_double(k));
    out.set_metadata("eta", format_double(eta));
    return out;
}

ProtocolResult bell_scan_physical(BellProtocol protocol, const PhysicalBellSetup& setup, const Sweep& thickness_mm) {
    const auto spectral = SpectralParams::with_sigma(setup.eta, setup.k, setup.sigma);
    ProtocolResult out("thickness_mm", thickness_mm.values());
    std::vector<double> ta, tb;
    double dtau_f = 0.0;
    for (double d_mm : out.sweep()) {
        const double d = d_mm * 1e-3;
        InterferometerConfig cfg;
        cfg.t0f = setup.path_difference_mm * 1e-3 / kSpeedOfLight;
        const auto slow_h = PathChannel::slab(setup.n_base + setup.delta_n, setup.n_base, d);
        const auto slow_v = PathChannel::slab(setup.n_base, setup.n_base + setup.delta_n, d);
        switch (protocol) {
            case BellProtocol::parallel: cfg.pathA = cfg.pathB = slow_h; break;
            case BellProtocol::perpendicular: cfg.pathA = slow_h, cfg.pathB = slow_v; break;
            case BellProtocol::one_sided: cfg.pathA = slow_h; break;
            case BellProtocol::none: break;
        }
        const ScaledConfig sc = scale(cfg, spectral);
        ta.push_back(sc.tauA);
        tb.push_back(sc.tauB);
        dtau_f = sc.dtau_f;
    }
    add_bell_columns(out, ta, tb, dtau_f, setup.k, setup.eta);
    out.set_metadata("protocol", protocol_name(protocol));
    out.set_metadata("sigma_rad_per_s", format_double(setup.sigma));
    out.set_metadata("delta_n", format_double(setup.delta_n));
    out.set_metadata("path_difference_mm", format_double(setup.path_difference_mm));
    out.set_metadata("dtau_f", format_double(dtau_f));
    out.set_metadata("k", format_double(setup.k));
    out.set_metadata("eta", format_double(setup.eta));
    return out;
}

ProtocolResult free_path_scan(double sigma, double k, const Sweep& path_difference_mm) {
    if (!(sigma > 0.0)) throw ContractViolation("free_path_scan: sigma must be positive");
    ProtocolResult out("path_difference_mm", path_difference_mm.values());
    std::vector<double> dtau, coherence;
    for (double mm : out.sweep()) {
        const double d = sigma * mm * 1e-3 / kSpeedOfLight;
        dtau.push_back(d);
        coherence.push_back(std::exp(-(1.0 - k) * d * d));
    }
    out.add_column("dtau_f", "scaled free delay", std::move(dtau));
    out.add_column("coherence", "noise-free coherence exp(-(1-K) dtau_f^2)", std::move(coherence));
    out.set_metadata("sigma_rad_per_s", format_double(sigma));
    out.set_metadata("k", format_double(k));
    return out;
}

SigmaZOutcome sigma_z_protocol(double dtau_f, double k, double eta) { return sigma_z_protocol(dtau_f, k, eta, -dtau_f); }

SigmaZOutcome sigma_z_protocol(double dtau_f, double k, double eta, double tau) {
    const auto hv = PolarizationAmplitudes::horizontal_vertical();
    const auto sc = ScaledConfig::post_only(dtau_f, tau, tau);
    const auto spectral = SpectralParams::dimensionless(eta, k);
    const Matrix4c z_first = Eigen::Vector4cd(1.0, 1.0, -1.0, -1.0).asDiagonal();
    const Matrix4c z_both = Eigen::Vector4cd(1.0, -1.0, -1.0, 1.0).asDiagonal();

    const double pc = analytic::coincidence_probability(hv, sc, spectral);
    const double pb = 0.5 * (1.0 - pc);
    auto state_or_mixed = [&](auto make, double p) {
        // Zero-probability branches contribute nothing; keep a placeholder state.
        if (p < 1e-12) return DensityMatrix(Eigen::MatrixXcd::Identity(4, 4) / 4.0);
        return make();
    };
    const auto c = state_or_mixed([&] { return analytic::biphoton_coincidence_state(hv, sc, spectral); }, pc)
                       .transformed(z_first);
    const auto a = state_or_mixed([&] { return analytic::biphoton_bunching_state(hv, sc, spectral, Side::A); }, pb)
                       .transformed(z_both);
    const auto b = state_or_mixed([&] { return analytic::biphoton_bunching_state(hv, sc, spectral, Side::B); }, pb);

    const auto target = bell::psi_plus();
    const double fc = c.fidelity_with_pure(target);
    const double fa = a.fidelity_with_pure(target);
    const double fb = b.fidelity_with_pure(target);
    return {c, a, b, pc, pb, pb, fc, fa, fb, pc * fc + pb * fa + pb * fb};
}

}  // namespace homlab::protocols
