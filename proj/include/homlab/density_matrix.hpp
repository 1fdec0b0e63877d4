// density_matrix.hpp: validated polarization density matrices
//
// Single-photon matrices use the basis (H, V); two-photon matrices use
// (HH, HV, VH, VV), first label = first photon (Alice for coincidences).

#pragma once

#include <Eigen/Dense>

#include <array>
#include <string_view>

#include "homlab/types.hpp"

namespace homlab {

using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;

struct DensityTolerance {
    static constexpr double hermitian = 1e-12;
    static constexpr double trace = 1e-10;
    static constexpr double eigenvalue = -1e-10;
};

/// Hermitian, unit-trace, positive-semidefinite matrix of dimension 2 or 4.
/// Construction throws InvariantViolation when any of the three fails.
class DensityMatrix {
public:
    explicit DensityMatrix(const Eigen::MatrixXcd& entries);

    // Normalizes by the trace first; throws UndefinedStateError when the trace
    // is below min_trace.
    static DensityMatrix from_unnormalized(const Eigen::MatrixXcd& entries, double min_trace = 1e-12);

    static DensityMatrix pure(const Eigen::VectorXcd& psi);

    int dim() const noexcept { return static_cast<int>(m_.rows()); }
    const Eigen::MatrixXcd& matrix() const noexcept { return m_; }
    cplx operator()(int row, int col) const { return m_(row, col); }

    // Basis labels in storage order, e.g. "HV".
    std::string_view label(int index) const;

    double purity() const;
    Eigen::VectorXd eigenvalues() const;

    // Reduced state of the first (Alice) / second (Bob) photon. dim 4 only.
    DensityMatrix trace_out_second() const;
    DensityMatrix trace_out_first() const;

    // Bloch vector (x, y, z) with rho = (I + x X + y Y + z Z)/2, z along H. dim 2 only.
    std::array<double, 3> bloch() const;

    // <psi|rho|psi> for a normalized pure state.
    double fidelity_with_pure(const Eigen::VectorXcd& psi) const;

    // U rho U^dagger.
    DensityMatrix transformed(const Eigen::MatrixXcd& unitary) const;

private:
    Eigen::MatrixXcd m_;
};

/// Exact trace distance 1/2 sum |eig(rho1 - rho2)|. Throws DimensionMismatch.
double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2);

// Index of |first second> in the two-photon basis.
constexpr int pair_index(Pol first, Pol second) noexcept {
    return 2 * static_cast<int>(first) + static_cast<int>(second);
}

namespace bell {
Eigen::Vector4cd psi_minus();
Eigen::Vector4cd psi_plus();
Eigen::Vector4cd phi_minus();
Eigen::Vector4cd phi_plus();
}  // namespace bell

namespace pauli {
Matrix2c x();
Matrix2c y();
Matrix2c z();
}  // namespace pauli

}  // namespace homlab
