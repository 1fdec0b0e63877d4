// oracle.hpp: brute-force quadrature reference for the closed forms
//
// The joint spectral amplitude is discretized with a tensor Gauss-Hermite
// rule in the rotated coordinates u+- = (x0 +- x1)/sqrt2, where the
// covariance is diagonal. Every creation-operator product of the output
// state is evaluated pointwise and the coincidence/bunching projectors are
// applied by summation, so nothing here shares code with homlab::analytic.
//
// Gauge: only phase differences are observable, so photon 1's V component and
// the V component after the beam splitter are taken as phase references.

#pragma once

#include <array>
#include <optional>
#include <vector>

#include "homlab/density_matrix.hpp"
#include "homlab/types.hpp"

namespace homlab::oracle {

inline constexpr int kDefaultOrder = 64;
inline constexpr int kStressOrder = 96;
inline constexpr int kMinOrder = 16;
inline constexpr int kMaxOrder = 256;
inline constexpr double kClampMargin = 1e-6;

/// Gauss-Hermite nodes z and weights w for the weight exp(-z^2), ascending
/// and exactly antisymmetric/symmetric about zero.
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussHermiteRule gauss_hermite(int order);

struct SpectralGrid {
    int order{0};
    double k{0.0};         // correlation actually used (after clamping)
    bool clamped{false};   // |K| was pulled inside 1 - kClampMargin
    std::vector<double> nodes_plus;
    std::vector<double> nodes_minus;
    std::vector<double> weights_plus;   // measure weights for integrals over u+
    std::vector<double> weights_minus;  // measure weights for integrals over u-
    std::vector<double> amplitude;      // g at (i, j), row-major in (plus, minus)

    int size() const noexcept { return order * order; }
    int index(int i, int j) const noexcept { return i * order + j; }
    // Index of the exchanged point (x0 <-> x1), i.e. u- -> -u-.
    int swapped(int i, int j) const noexcept { return index(i, order - 1 - j); }
    double weight(int i, int j) const noexcept { return weights_plus[i] * weights_minus[j]; }
    double x0(int i, int j) const noexcept;
    double x1(int i, int j) const noexcept;
};

/// Discretizes the unit-variance bivariate Gaussian with correlation
/// spectral.k(); order must lie in [kMinOrder, kMaxOrder].
SpectralGrid build_grid(const SpectralParams& spectral, int order = kDefaultOrder);

enum Branch : int { aa = 0, ab = 1, ba = 2, bb = 3 };

/// Coefficient of each creation-operator product of the output state at every
/// grid point: amp[branch][pair_index(l, l')][point], where l belongs to the
/// photon that entered on path 0 (frequency x0) and l' to path 1 (x1).
struct BranchAmplitudes {
    int order{0};
    std::array<std::array<std::vector<cplx>, 4>, 4> amp;

    // Weighted sum of |amp|^2 over every branch, pair and point.
    double norm(const SpectralGrid& grid) const;
};

BranchAmplitudes propagate(const PolarizationAmplitudes& amps, const ScaledConfig& sc,
                           const SpectralParams& spectral, const SpectralGrid& grid);

/// Node order needed to resolve every phase the configuration imprints.
int required_order(const ScaledConfig& sc, const SpectralParams& spectral);

/// Smallest node order (>= floor) that resolves every phase the configuration
/// imprints, capped at kMaxOrder. A rule of order n integrates exp(i b z)
/// against exp(-z^2) to machine precision while b <= 1.5 sqrt(n).
int resolving_order(const ScaledConfig& sc, const SpectralParams& spectral, int floor = kDefaultOrder);

enum class Outcome { coincidence, bunch_a, bunch_b };

struct Projection {
    double probability{0.0};
    Matrix4c moments;                     // probability-weighted two-photon matrix
    std::optional<DensityMatrix> state;   // absent when probability < 1e-12
};

Projection project(const BranchAmplitudes& branches, const SpectralGrid& grid, Outcome which);

struct OracleResult {
    Projection coincidence;
    Projection bunch_a;
    Projection bunch_b;
    bool clamped{false};
    int order{0};             // node order actually used
    bool under_resolved{false};  // resolving order exceeded kMaxOrder

    const Projection& at(Outcome which) const;
};

// The entry points below use resolving_order(sc, spectral, order).
OracleResult run(const PolarizationAmplitudes& amps, const ScaledConfig& sc, const SpectralParams& spectral,
                 int order = kDefaultOrder);

double oracle_pc(const PolarizationAmplitudes& amps, const ScaledConfig& sc, const SpectralParams& spectral,
                 int order = kDefaultOrder);

// Receiver's single-photon state for one outcome. For coincidences the
// receiver picks which photon is kept; bunched pairs give the same state for
// either photon. Throws UndefinedStateError for zero-probability outcomes.
DensityMatrix oracle_single_photon(const PolarizationAmplitudes& amps, const ScaledConfig& sc,
                                   const SpectralParams& spectral, Outcome which, Side receiver = Side::A,
                                   int order = kDefaultOrder);

// Alice's zero-dead-time mixture Pc rho_c + 2 Pb^A rho_b.
DensityMatrix oracle_ideal_detector(const OracleResult& result);
// Alice's dead-time filtered mixture (Pc rho_c + Pb^A rho_b) / trace.
DensityMatrix oracle_deadtime(const OracleResult& result);

// Partial traces of probability-weighted two-photon matrices.
Matrix2c reduce_to_first(const Matrix4c& m);
Matrix2c reduce_to_second(const Matrix4c& m);

}  // namespace homlab::oracle
