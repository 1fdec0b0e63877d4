// Convenience entry points built on the grid, propagation and projection.

#include "homlab/errors.hpp"
#include "homlab/oracle.hpp"

namespace homlab::oracle {

const Projection& OracleResult::at(Outcome which) const {
    switch (which) {
        case Outcome::coincidence: return coincidence;
        case Outcome::bunch_a: return bunch_a;
        case Outcome::bunch_b: return bunch_b;
    }
    throw ContractViolation("OracleResult::at: unknown outcome");
}

OracleResult run(const PolarizationAmplitudes& amps, const ScaledConfig& sc, const SpectralParams& spectral,
                 int order) {
    const int used = resolving_order(sc, spectral, order);
    const SpectralGrid grid = build_grid(spectral, used);
    const BranchAmplitudes branches = propagate(amps, sc, spectral, grid);
    OracleResult result;
    result.coincidence = project(branches, grid, Outcome::coincidence);
    result.bunch_a = project(branches, grid, Outcome::bunch_a);
    result.bunch_b = project(branches, grid, Outcome::bunch_b);
    result.clamped = grid.clamped;
    result.order = used;
    result.under_resolved = required_order(sc, spectral) > used;
    return result;
}

double oracle_pc(const PolarizationAmplitudes& amps, const ScaledConfig& sc, const SpectralParams& spectral,
                 int order) {
    const SpectralGrid grid = build_grid(spectral, resolving_order(sc, spectral, order));
    return project(propagate(amps, sc, spectral, grid), grid, Outcome::coincidence).probability;
}

Matrix2c reduce_to_first(const Matrix4c& m) {
    Matrix2c r;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) r(a, b) = m(2 * a, 2 * b) + m(2 * a + 1, 2 * b + 1);
    return r;
}

Matrix2c reduce_to_second(const Matrix4c& m) {
    Matrix2c r;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) r(a, b) = m(a, b) + m(2 + a, 2 + b);
    return r;
}

DensityMatrix oracle_single_photon(const PolarizationAmplitudes& amps, const ScaledConfig& sc,
                                   const SpectralParams& spectral, Outcome which, Side receiver, int order) {
    const SpectralGrid grid = build_grid(spectral, resolving_order(sc, spectral, order));
    const Projection proj = project(propagate(amps, sc, spectral, grid), grid, which);
    if (!proj.state)
        throw UndefinedStateError("oracle_single_photon: outcome has zero probability", proj.probability);
    const bool keep_first = which != Outcome::coincidence || receiver == Side::A;
    return DensityMatrix::from_unnormalized(keep_first ? reduce_to_first(proj.moments)
                                                       : reduce_to_second(proj.moments));
}

DensityMatrix oracle_ideal_detector(const OracleResult& result) {
    const Matrix2c m = reduce_to_first(result.coincidence.moments) + 2.0 * reduce_to_first(result.bunch_a.moments);
    return DensityMatrix::from_unnormalized(m);
}

DensityMatrix oracle_deadtime(const OracleResult& result) {
    const Matrix2c m = reduce_to_first(result.coincidence.moments) + reduce_to_first(result.bunch_a.moments);
    return DensityMatrix::from_unnormalized(m);
}

}  // namespace homlab::oracle
