// gaussian.hpp: characteristic-function helpers shared by the closed forms

#pragma once

#include <cmath>
#include <complex>

namespace homlab::analytic::detail {

// exp(-(u^2 - 2 K u v + v^2)/2): the average of exp(i(u x - v y)) over the
// unit-variance bivariate normal with correlation K.
inline double corr_gauss(double u, double v, double k) {
    return std::exp(-0.5 * (u * u - 2.0 * k * u * v + v * v));
}

inline double gauss(double x) { return std::exp(-0.5 * x * x); }

inline std::complex<double> eta_phase(double eta, double x) { return std::polar(1.0, eta * x); }

// exp(-(1 - K) x^2)
inline double dip_factor(double x, double k) { return std::exp(-(1.0 - k) * x * x); }

}  // namespace homlab::analytic::detail
