// Scans of Alice's c/b photon discrimination and the pseudo-HOM dips.

#include <cmath>

#include "homlab/errors.hpp"
#include "homlab/format.hpp"
#include "homlab/protocols.hpp"

namespace homlab::protocols {

namespace {

struct PointStates {
    DensityMatrix c;
    DensityMatrix b;
    double pc;
};

PointStates exact_states(double tauA, double dtau_f, double eta) {
    const auto st = analytic::single_photon_states(PolarizationAmplitudes::discrimination_optimal(),
                                                   ScaledConfig::post_only(dtau_f, tauA, 0.0),
                                                   SpectralParams::dimensionless(eta, -1.0), Side::A);
    return {st.coincidence, st.bunching, st.pc};
}

// The c/b split of the idealized analysis needs 2 dtau_f^2 well above 1.
constexpr double kMinSeparation = 8.0;

void require_separated(double dtau_f) {
    if (!(2.0 * dtau_f * dtau_f >= kMinSeparation))
        throw ContractViolation("discrimination needs (1 - K) dtau_f^2 >= 8 at K = -1, i.e. |dtau_f| >= 2");
}

void tag(ProtocolResult& out, double dtau_f, double eta) {
    out.set_metadata("dtau_f", format_double(dtau_f));
    out.set_metadata("eta", format_double(eta));
    out.set_metadata("k", "-1");
    out.set_metadata("input", "C_HH = C_VV = 1/2, C_HV = 1/sqrt2, C_VH = 0");
    out.set_metadata("rotation_phi", format_double(-2.0 * eta * dtau_f));
}

}  // namespace

ProtocolResult discrimination_scan(double dtau_f, double eta, const Sweep& tauA) {
    require_separated(dtau_f);
    ProtocolResult out("tauA", tauA.values());
    const Matrix2c rot = analytic::rotation_half_pi(-2.0 * eta * dtau_f);
    const auto opt = PolarizationAmplitudes::discrimination_optimal();

    std::vector<cplx> nu_m, nu_p;
    std::vector<double> nu_m_abs, nu_p_abs, pc, d_exact, d_nu, d_approx, cx, cy, bx, by, pur_c, pur_b,
        success_ideal, success_exact, h_frac;
    for (double t : out.sweep()) {
        const cplx m = analytic::nu(t, dtau_f, eta, -1);
        const cplx p = analytic::nu(t, dtau_f, eta, +1);
        nu_m.push_back(m);
        nu_p.push_back(p);
        nu_m_abs.push_back(std::abs(m));
        nu_p_abs.push_back(std::abs(p));

        const auto nus = analytic::nu_states(t, dtau_f, eta);
        const auto ex = exact_states(t, dtau_f, eta);
        pc.push_back(ex.pc);
        d_exact.push_back(trace_distance(ex.c, ex.b));
        d_nu.push_back(trace_distance(nus.coincidence, nus.bunching));
        d_approx.push_back(analytic::trace_distance_cb_approx(opt, dtau_f, t, -1.0));
        const auto bc = ex.c.bloch(), bb = ex.b.bloch();
        cx.push_back(bc[0]);
        cy.push_back(bc[1]);
        bx.push_back(bb[0]);
        by.push_back(bb[1]);
        pur_c.push_back(ex.c.purity());
        pur_b.push_back(ex.b.purity());

        const auto rc_i = nus.coincidence.transformed(rot), rb_i = nus.bunching.transformed(rot);
        const double ch = 0.5 * rc_i(0, 0).real(), bh = 0.5 * rb_i(0, 0).real();
        success_ideal.push_back(ch + 0.5 * rb_i(1, 1).real());
        h_frac.push_back(ch / (ch + bh));

        const auto rc = ex.c.transformed(rot), rb = ex.b.transformed(rot);
        success_exact.push_back(ex.pc * rc(0, 0).real() + (1.0 - ex.pc) * rb(1, 1).real());
    }

    out.add_complex_column("nu_minus", "coincidence-photon coherence", nu_m);
    out.add_column("nu_minus_abs", "coincidence-photon coherence", std::move(nu_m_abs));
    out.add_complex_column("nu_plus", "bunched-photon coherence", nu_p);
    out.add_column("nu_plus_abs", "bunched-photon coherence", std::move(nu_p_abs));
    out.add_column("pc", "exact coincidence probability", std::move(pc));
    out.add_column("trace_distance", "exact, from the full single-photon states", std::move(d_exact));
    out.add_column("trace_distance_nu", "exact, from the nu states", std::move(d_nu));
    out.add_column("trace_distance_approx", "leading-order approximation", std::move(d_approx));
    out.add_column("bloch_c_x", "c photon Bloch x", std::move(cx));
    out.add_column("bloch_c_y", "c photon Bloch y", std::move(cy));
    out.add_column("bloch_b_x", "b photon Bloch x", std::move(bx));
    out.add_column("bloch_b_y", "b photon Bloch y", std::move(by));
    out.add_column("purity_c", "c photon purity", std::move(pur_c));
    out.add_column("purity_b", "b photon purity", std::move(pur_b));
    out.add_column("h_branch_c_fraction", "c photons among H clicks, Pc = Pb = 1/2", std::move(h_frac));
    out.add_column("success_idealized", "guess c on H and b on V, Pc = Pb = 1/2", std::move(success_ideal));
    out.add_column("success_exact", "same rule with the exact Pc and states", std::move(success_exact));
    tag(out, dtau_f, eta);
    return out;
}

ProtocolResult pseudo_hom_scan(double dtau_f, double eta, const Sweep& tauA, Pol branch) {
    require_separated(dtau_f);
    ProtocolResult out("tauA", tauA.values());
    const Matrix2c rot = analytic::rotation_half_pi(-2.0 * eta * dtau_f);
    const int x = static_cast<int>(branch);
    std::vector<double> c_frac, raw, corrected;
    for (double t : out.sweep()) {
        const auto ex = exact_states(t, dtau_f, eta);
        const double c_share = ex.c.transformed(rot)(x, x).real();
        const double b_share = ex.b.transformed(rot)(x, x).real();
        const double total = ex.pc * c_share + (1.0 - ex.pc) * b_share;
        c_frac.push_back(c_share);
        raw.push_back(total);
        corrected.push_back(total > 0.0 ? ex.pc * c_share / total : 0.0);
    }
    out.add_column("c_fraction", "share of c photons sent to the branch", std::move(c_frac));
    out.add_column("raw_fraction", "share of all of Alice's photons in the branch", std::move(raw));
    out.add_column("corrected_fraction", "share of branch clicks that are c photons", std::move(corrected));
    tag(out, dtau_f, eta);
    out.set_metadata("branch", branch == Pol::H ? "H" : "V");
    return out;
}

}  // namespace homlab::protocols
