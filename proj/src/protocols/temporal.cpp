// Arrival-time distribution of the pair, Fourier dual of the joint spectrum.

#include <cmath>

#include "homlab/errors.hpp"
#include "homlab/protocols.hpp"

namespace homlab::protocols {

double conditional_density(const SpectralParams& spectral, double s0, double s1) {
    const double sigma = spectral.require_sigma();
    const double a = 2.0 * sigma * sigma;
    const double shifted = s0 + spectral.k() * s1;
    return std::sqrt(a / M_PI) * std::exp(-a * shifted * shifted);
}

double conditional_mean(const SpectralParams& spectral, double s1) { return -spectral.k() * s1; }

double conditional_variance(const SpectralParams& spectral) {
    const double sigma = spectral.require_sigma();
    return 1.0 / (4.0 * sigma * sigma);
}

TemporalDensities temporal_distribution(const SpectralParams& spectral, double s0, double s1) {
    const double sigma = spectral.require_sigma();
    const double k = spectral.k();
    const double one_minus_k2 = 1.0 - k * k;
    if (!(one_minus_k2 > 0.0))
        throw DegenerateDistributionError("temporal_distribution: |K| = 1 has no joint density");
    const double a = 2.0 * sigma * sigma;
    auto margin = [&](double s) { return std::sqrt(a * one_minus_k2 / M_PI) * std::exp(-a * one_minus_k2 * s * s); };
    const double joint = a * std::sqrt(one_minus_k2) / M_PI * std::exp(-a * (s0 * s0 + 2.0 * k * s0 * s1 + s1 * s1));
    return {joint, margin(s0), margin(s1), conditional_density(spectral, s0, s1)};
}

}  // namespace homlab::protocols
