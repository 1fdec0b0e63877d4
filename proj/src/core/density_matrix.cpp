#include "homlab/density_matrix.hpp"

#include <cmath>
#include <string>

#include "homlab/errors.hpp"

namespace homlab {

DensityMatrix::DensityMatrix(const Eigen::MatrixXcd& entries) : m_(entries) {
    if (m_.rows() != m_.cols() || (m_.rows() != 2 && m_.rows() != 4))
        throw InvariantViolation("DensityMatrix: dimension must be 2x2 or 4x4");
    if (!m_.allFinite()) throw InvariantViolation("DensityMatrix: non-finite entry");

    const double herm = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > DensityTolerance::hermitian)
        throw InvariantViolation("DensityMatrix: not Hermitian (deviation " + std::to_string(herm) + ")");

    const cplx tr = m_.trace();
    if (std::abs(tr - cplx(1.0, 0.0)) > DensityTolerance::trace)
        throw InvariantViolation("DensityMatrix: trace " + std::to_string(tr.real()) + " != 1");

    const double lowest = eigenvalues().minCoeff();
    if (lowest < DensityTolerance::eigenvalue)
        throw InvariantViolation("DensityMatrix: negative eigenvalue " + std::to_string(lowest));
}

DensityMatrix DensityMatrix::from_unnormalized(const Eigen::MatrixXcd& entries, double min_trace) {
    const double tr = entries.trace().real();
    if (!(tr > min_trace)) throw UndefinedStateError("conditioning on a zero-probability outcome", tr);
    Eigen::MatrixXcd m = entries / tr;
    // Symmetrize away rounding in the lower triangle.
    m = 0.5 * (m + m.adjoint()).eval();
    return DensityMatrix(m);
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi) {
    return from_unnormalized(psi * psi.adjoint());
}

std::string_view DensityMatrix::label(int index) const {
    static constexpr std::string_view single[] = {"H", "V"};
    static constexpr std::string_view pair[] = {"HH", "HV", "VH", "VV"};
    if (index < 0 || index >= dim()) throw DimensionMismatch("DensityMatrix: basis index out of range");
    return dim() == 2 ? single[index] : pair[index];
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

Eigen::VectorXd DensityMatrix::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

DensityMatrix DensityMatrix::trace_out_second() const {
    if (dim() != 4) throw DimensionMismatch("trace_out_second needs a two-photon state");
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(2, 2);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int mu = 0; mu < 2; ++mu) r(a, b) += m_(2 * a + mu, 2 * b + mu);
    return DensityMatrix(r);
}

DensityMatrix DensityMatrix::trace_out_first() const {
    if (dim() != 4) throw DimensionMismatch("trace_out_first needs a two-photon state");
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(2, 2);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int mu = 0; mu < 2; ++mu) r(a, b) += m_(2 * mu + a, 2 * mu + b);
    return DensityMatrix(r);
}

std::array<double, 3> DensityMatrix::bloch() const {
    if (dim() != 2) throw DimensionMismatch("bloch needs a single-photon state");
    const cplx hv = m_(0, 1);
    return {2.0 * hv.real(), -2.0 * hv.imag(), (m_(0, 0) - m_(1, 1)).real()};
}

double DensityMatrix::fidelity_with_pure(const Eigen::VectorXcd& psi) const {
    if (psi.size() != dim()) throw DimensionMismatch("fidelity_with_pure: dimension mismatch");
    return (psi.adjoint() * m_ * psi)(0, 0).real();
}

DensityMatrix DensityMatrix::transformed(const Eigen::MatrixXcd& unitary) const {
    if (unitary.rows() != dim() || unitary.cols() != dim())
        throw DimensionMismatch("transformed: dimension mismatch");
    Eigen::MatrixXcd r = unitary * m_ * unitary.adjoint();
    r = 0.5 * (r + r.adjoint()).eval();
    return DensityMatrix(r);
}

double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2) {
    if (rho1.dim() != rho2.dim()) throw DimensionMismatch("trace_distance: dimension mismatch");
    const Eigen::MatrixXcd diff = rho1.matrix() - rho2.matrix();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(diff, Eigen::EigenvaluesOnly);
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

namespace bell {

namespace {
Eigen::Vector4cd make(int i, int j, double sign) {
    Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
    const double s = 1.0 / std::sqrt(2.0);
    v(i) = s;
    v(j) = sign * s;
    return v;
}
}  // namespace

Eigen::Vector4cd psi_minus() { return make(1, 2, -1.0); }
Eigen::Vector4cd psi_plus() { return make(1, 2, 1.0); }
Eigen::Vector4cd phi_minus() { return make(0, 3, -1.0); }
Eigen::Vector4cd phi_plus() { return make(0, 3, 1.0); }

}  // namespace bell

namespace pauli {

Matrix2c x() {
    Matrix2c m;
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

Matrix2c y() {
    Matrix2c m;
    m << 0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0;
    return m;
}

Matrix2c z() {
    Matrix2c m;
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

}  // namespace pauli

}  // namespace homlab
