// Gauss-Hermite rule and the rotated spectral grid.

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "homlab/errors.hpp"
#include "homlab/oracle.hpp"

namespace homlab::oracle {

namespace {

// Orthonormal Hermite functions p_{n-1}(z), p_n(z) for the weight exp(-z^2).
std::pair<double, double> hermite_pair(int n, double z) {
    double prev = 0.0;
    double cur = std::pow(M_PI, -0.25);
    for (int j = 1; j <= n; ++j) {
        const double next = z * std::sqrt(2.0 / j) * cur - std::sqrt((j - 1.0) / j) * prev;
        prev = cur;
        cur = next;
    }
    return {prev, cur};
}

}  // namespace

GaussHermiteRule gauss_hermite(int order) {
    if (order < 1) throw ContractViolation("gauss_hermite: order must be positive");

    // Golub-Welsch for starting values, then Newton on the recurrence.
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
    for (int j = 1; j < order; ++j) jacobi(j, j - 1) = jacobi(j - 1, j) = std::sqrt(j / 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi, Eigen::EigenvaluesOnly);
    Eigen::VectorXd guess = solver.eigenvalues();

    GaussHermiteRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    for (int i = 0; i < order; ++i) {
        double z = guess(i);
        for (int it = 0; it < 20; ++it) {
            auto [pm1, pn] = hermite_pair(order, z);
            const double step = pn / (std::sqrt(2.0 * order) * pm1);
            z -= step;
            if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) break;
        }
        const double pm1 = hermite_pair(order, z).first;
        rule.nodes[i] = z;
        rule.weights[i] = 1.0 / (order * pm1 * pm1);
    }

    // Enforce exact symmetry so that mirrored indices are exact reflections.
    for (int i = 0; i < order / 2; ++i) {
        const int m = order - 1 - i;
        const double z = 0.5 * (rule.nodes[m] - rule.nodes[i]);
        const double w = 0.5 * (rule.weights[m] + rule.weights[i]);
        rule.nodes[i] = -z;
        rule.nodes[m] = z;
        rule.weights[i] = rule.weights[m] = w;
    }
    if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
    return rule;
}

double SpectralGrid::x0(int i, int j) const noexcept { return (nodes_plus[i] + nodes_minus[j]) / std::sqrt(2.0); }

double SpectralGrid::x1(int i, int j) const noexcept { return (nodes_plus[i] - nodes_minus[j]) / std::sqrt(2.0); }

SpectralGrid build_grid(const SpectralParams& spectral, int order) {
    if (order < kMinOrder || order > kMaxOrder)
        throw ContractViolation("build_grid: order must lie in [" + std::to_string(kMinOrder) + ", " +
                                std::to_string(kMaxOrder) + "]");

    SpectralGrid grid;
    grid.order = order;
    const double limit = 1.0 - kClampMargin;
    grid.k = std::clamp(spectral.k(), -limit, limit);
    grid.clamped = grid.k != spectral.k();

    const GaussHermiteRule rule = gauss_hermite(order);
    // u+ and u- are independent normals with variances 1 + K and 1 - K.
    auto axis = [&](double variance, std::vector<double>& nodes, std::vector<double>& weights,
                    std::vector<double>& root_pdf) {
        const double s = std::sqrt(variance);
        nodes.resize(order);
        weights.resize(order);
        root_pdf.resize(order);
        for (int i = 0; i < order; ++i) {
            const double z = rule.nodes[i];
            nodes[i] = std::sqrt(2.0) * s * z;
            weights[i] = std::exp(std::log(rule.weights[i]) + z * z + std::log(std::sqrt(2.0) * s));
            root_pdf[i] = std::exp(-0.5 * z * z - 0.25 * std::log(2.0 * M_PI) - 0.5 * std::log(s));
        }
    };
    std::vector<double> root_plus;
    std::vector<double> root_minus;
    axis(1.0 + grid.k, grid.nodes_plus, grid.weights_plus, root_plus);
    axis(1.0 - grid.k, grid.nodes_minus, grid.weights_minus, root_minus);

    grid.amplitude.resize(static_cast<std::size_t>(grid.size()));
    for (int i = 0; i < order; ++i)
        for (int j = 0; j < order; ++j) grid.amplitude[grid.index(i, j)] = root_plus[i] * root_minus[j];
    return grid;
}

}  // namespace homlab::oracle
