// Pointwise output-state amplitudes and the detection projectors.

#include <algorithm>
#include <cmath>

#include "homlab/errors.hpp"
#include "homlab/oracle.hpp"

namespace homlab::oracle {

namespace {

constexpr double kMinProbability = 1e-12;

// Neumaier-compensated accumulator for complex sums.
class CompensatedSum {
public:
    void add(cplx x) {
        add_part(sum_re_, comp_re_, x.real());
        add_part(sum_im_, comp_im_, x.imag());
    }
    cplx value() const { return {sum_re_ + comp_re_, sum_im_ + comp_im_}; }

private:
    static void add_part(double& sum, double& comp, double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }

    double sum_re_{0.0}, comp_re_{0.0}, sum_im_{0.0}, comp_im_{0.0};
};

class MatrixAccumulator {
public:
    void add(const std::array<cplx, 4>& f, double w) {
        for (int r = 0; r < 4; ++r)
            for (int c = r; c < 4; ++c) cells_[r][c].add(w * f[r] * std::conj(f[c]));
    }
    Matrix4c value(double scale) const {
        Matrix4c m;
        for (int r = 0; r < 4; ++r) {
            m(r, r) = scale * cells_[r][r].value().real();
            for (int c = r + 1; c < 4; ++c) {
                m(r, c) = scale * cells_[r][c].value();
                m(c, r) = std::conj(m(r, c));
            }
        }
        return m;
    }

private:
    std::array<std::array<CompensatedSum, 4>, 4> cells_{};
};

int idx(int first, int second) { return 2 * first + second; }

}  // namespace

double BranchAmplitudes::norm(const SpectralGrid& grid) const {
    CompensatedSum total;
    for (int i = 0; i < grid.order; ++i)
        for (int j = 0; j < grid.order; ++j) {
            const int p = grid.index(i, j);
            double local = 0.0;
            for (const auto& branch : amp)
                for (const auto& pair : branch) local += std::norm(pair[p]);
            total.add(grid.weight(i, j) * local);
        }
    return total.value().real();
}

namespace {

struct PhaseTimes {
    double t0[2];
    double t1[2];
    double post[2][2];
};

PhaseTimes phase_times(const ScaledConfig& sc) {
    // Pre-splitter times per polarization, photon 1's V as reference;
    // post-splitter times are [output port][polarization], port 0 = A.
    return {{sc.delay(Pol::H, Pol::V), sc.delay(Pol::V, Pol::V)},
            {sc.delay(Pol::V, Pol::V) - sc.delay(Pol::V, Pol::H), 0.0},
            {{sc.tauA, 0.0}, {sc.tauB, 0.0}}};
}

}  // namespace

int required_order(const ScaledConfig& sc, const SpectralParams& spectral) {
    const PhaseTimes pt = phase_times(sc);
    double lo = 0.0;
    double hi = 0.0;
    for (int l = 0; l < 2; ++l)
        for (int port = 0; port < 2; ++port) {
            for (double t : {pt.t0[l] + pt.post[port][l], pt.t1[l] + pt.post[port][l]}) {
                lo = std::min(lo, t);
                hi = std::max(hi, t);
            }
        }
    // Any integrand phase is a x0 + b x1 with |a|, |b| <= spread, i.e. at most
    // 2 spread s z along either rotated axis.
    const double k = std::abs(spectral.k());
    const double b = 2.0 * (hi - lo) * std::sqrt(1.0 + std::min(k, 1.0));
    const double needed = std::ceil((b / 1.5) * (b / 1.5) / 8.0) * 8.0;
    return static_cast<int>(std::min(needed, 1e6));
}

int resolving_order(const ScaledConfig& sc, const SpectralParams& spectral, int floor) {
    return std::clamp(std::max(floor, required_order(sc, spectral)), kMinOrder, kMaxOrder);
}

BranchAmplitudes propagate(const PolarizationAmplitudes& amps, const ScaledConfig& sc,
                           const SpectralParams& spectral, const SpectralGrid& grid) {
    const double eta = spectral.eta();
    const PhaseTimes pt = phase_times(sc);
    const double sign[4] = {+0.5, -0.5, +0.5, -0.5};
    const int port_first[4] = {0, 0, 1, 1};
    const int port_second[4] = {0, 1, 0, 1};

    BranchAmplitudes out;
    out.order = grid.order;
    for (auto& branch : out.amp)
        for (auto& pair : branch) pair.assign(static_cast<std::size_t>(grid.size()), cplx{});

    for (int i = 0; i < grid.order; ++i)
        for (int j = 0; j < grid.order; ++j) {
            const int p = grid.index(i, j);
            const double w0 = eta + grid.x0(i, j);
            const double w1 = eta + grid.x1(i, j);
            const double g = grid.amplitude[p];
            for (int l = 0; l < 2; ++l)
                for (int lp = 0; lp < 2; ++lp) {
                    const cplx c = amps.data()[idx(l, lp)];
                    if (c == cplx{}) continue;
                    for (int b = 0; b < 4; ++b) {
                        const double phase = (pt.t0[l] + pt.post[port_first[b]][l]) * w0 +
                                             (pt.t1[lp] + pt.post[port_second[b]][lp]) * w1;
                        out.amp[b][idx(l, lp)][p] = sign[b] * g * c * std::polar(1.0, phase);
                    }
                }
        }
    return out;
}

Projection project(const BranchAmplitudes& branches, const SpectralGrid& grid, Outcome which) {
    if (branches.order != grid.order) throw DimensionMismatch("project: grid and amplitudes differ in order");

    MatrixAccumulator acc;
    std::array<cplx, 4> f{};
    for (int i = 0; i < grid.order; ++i)
        for (int j = 0; j < grid.order; ++j) {
            const int p = grid.index(i, j);
            const int q = grid.swapped(i, j);
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    switch (which) {
                        case Outcome::coincidence:
                            // Alice's photon (a, frequency x0 here) came through either input.
                            f[idx(a, b)] = branches.amp[Branch::ab][idx(a, b)][p] +
                                           branches.amp[Branch::ba][idx(b, a)][q];
                            break;
                        case Outcome::bunch_a:
                            f[idx(a, b)] = branches.amp[Branch::aa][idx(a, b)][p] +
                                           branches.amp[Branch::aa][idx(b, a)][q];
                            break;
                        case Outcome::bunch_b:
                            f[idx(a, b)] = branches.amp[Branch::bb][idx(a, b)][p] +
                                           branches.amp[Branch::bb][idx(b, a)][q];
                            break;
                    }
                }
            acc.add(f, grid.weight(i, j));
        }

    Projection out;
    // Identical-particle symmetrization double counts bunched pairs.
    out.moments = acc.value(which == Outcome::coincidence ? 1.0 : 0.5);
    out.probability = out.moments.trace().real();
    if (out.probability >= kMinProbability)
        out.state = DensityMatrix::from_unnormalized(out.moments, kMinProbability);
    return out;
}

}  // namespace homlab::oracle
