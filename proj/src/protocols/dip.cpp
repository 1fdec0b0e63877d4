// HOM dip curves and their widths.

#include <cmath>

#include "homlab/errors.hpp"
#include "homlab/format.hpp"
#include "homlab/protocols.hpp"

namespace homlab::protocols {

double dip_fwhm(const std::function<double(double)>& pc, double plateau, double x_max) {
    const double half = 0.5 * plateau;
    double lo = 0.0, hi = x_max;
    if (!(pc(hi) > half)) throw ContractViolation("dip_fwhm: dip does not reach half depth inside the range");
    for (int it = 0; it < 200 && hi - lo > 1e-15 * x_max; ++it) {
        const double mid = 0.5 * (lo + hi);
        (pc(mid) < half ? lo : hi) = mid;
    }
    return lo + hi;  // twice the midpoint
}

ProtocolResult dip_scan(const Sweep& scaled_delay, double n_medium) {
    ProtocolResult out("scaled_delay", scaled_delay.values());
    std::vector<double> k0, km1, noisy;
    for (double x : out.sweep()) {
        k0.push_back(analytic::pc_classical_dip(x, 0.0));
        km1.push_back(analytic::pc_classical_dip(x, -1.0));
        // sigma = 1 so the delay is already sigma (t0 - t1).
        noisy.push_back(analytic::pc_product_state(n_medium, x, 0.0, -1.0, 1.0));
    }
    out.add_column("pc_classical_k0", "classical dip, K = 0", std::move(k0));
    out.add_column("pc_classical_km1", "classical dip, K = -1", std::move(km1));
    out.add_column("pc_noisy_medium", "|ll> through equal media, K = -1", std::move(noisy));
    out.set_metadata("n_medium", format_double(n_medium));
    return out;
}

}  // namespace homlab::protocols
