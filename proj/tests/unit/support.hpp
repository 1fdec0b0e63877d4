// Shared helpers for the unit tests: seeded generators and matrix comparison.
#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>

#include "homlab/types.hpp"

namespace homlab::testing {

class Generator {
public:
    explicit Generator(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    cplx complex_unit() { return {uniform(-1.0, 1.0), uniform(-1.0, 1.0)}; }

    PolarizationAmplitudes amplitudes() {
        return PolarizationAmplitudes::normalize(complex_unit(), complex_unit(), complex_unit(), complex_unit());
    }
    PolarizationAmplitudes separable() { return PolarizationAmplitudes::separable(complex_unit(), complex_unit()); }

    // Delays with pre- and post-splitter birefringence, all within `span`.
    ScaledConfig config(double span) {
        const double half = 0.5 * span;
        return ScaledConfig::from_delays(uniform(-span, span), uniform(-half, half), uniform(-half, half),
                                         uniform(-half, half), uniform(-half, half), uniform(-span, span),
                                         uniform(-span, span));
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

inline double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace homlab::testing
