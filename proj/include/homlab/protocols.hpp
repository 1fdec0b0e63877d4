// protocols.hpp: scenario runners built on the closed forms: Bell-state
// engineering scans, the sigma_z trick, dead-time requirements and
// tomography fits, c/b photon discrimination and pseudo-HOM dips, and the
// temporal distribution of the photon pair.

#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "homlab/analytic.hpp"
#include "homlab/density_matrix.hpp"
#include "homlab/types.hpp"

namespace homlab::protocols {

/// Evenly spaced sweep with both end points included.
struct Sweep {
    double start{0.0};
    double stop{0.0};
    int count{2};

    // Throws ContractViolation unless count >= 2 and both ends are finite.
    void validate() const;
    double at(int i) const;
    std::vector<double> values() const;
};

struct Column {
    std::string name;
    std::string provenance;
    std::vector<double> values;
};

/// Tabular scan output. Every column has one finite entry per sweep point.
class ProtocolResult {
public:
    ProtocolResult(std::string sweep_name, std::vector<double> sweep_values);

    // Throw InvariantViolation on a length mismatch or a non-finite value.
    void add_column(std::string name, std::string provenance, std::vector<double> values);
    // Adds name_re and name_im.
    void add_complex_column(const std::string& name, const std::string& provenance, const std::vector<cplx>& values);

    void set_metadata(std::string key, std::string value);

    const std::string& sweep_name() const noexcept { return sweep_name_; }
    const std::vector<double>& sweep() const noexcept { return sweep_; }
    std::size_t rows() const noexcept { return sweep_.size(); }
    const std::vector<Column>& columns() const noexcept { return columns_; }
    // Throws ContractViolation for an unknown name.
    const Column& column(const std::string& name) const;
    const std::vector<std::pair<std::string, std::string>>& metadata() const noexcept { return metadata_; }

private:
    std::string sweep_name_;
    std::vector<double> sweep_;
    std::vector<Column> columns_;
    std::vector<std::pair<std::string, std::string>> metadata_;
};

struct Peak {
    double at{0.0};
    double value{0.0};
};

// Golden-section maximization of a unimodal function on [lo, hi].
Peak maximize(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-10);

// Largest entry of a column and its sweep value.
Peak column_peak(const ProtocolResult& result, const std::string& column);

// ------------------------------ HOM dip widths ------------------------------

// Full width at half depth of a dip Pc(x) with Pc(0) = 0 that rises to `plateau`,
// found by bisection on [0, x_max].
double dip_fwhm(const std::function<double(double)>& pc, double plateau, double x_max);

// Scaled delay sweep with the classical dips at K = 0 and K = -1 and the
// product-state dip through a medium of index n_medium at K = -1.
ProtocolResult dip_scan(const Sweep& scaled_delay, double n_medium = 2.903);

// ---------------------------- Bell engineering ------------------------------

enum class BellProtocol { parallel, perpendicular, one_sided, none };

// |Lambda_c| along tau: parallel tauA = tauB = tau, perpendicular tauA = -tauB = tau,
// one_sided tauB = 0, none tauA = tauB = 0.
ProtocolResult bell_scan(BellProtocol protocol, double dtau_f, double k, double eta, const Sweep& tau);

struct PhysicalBellSetup {
    double sigma{2.0 * 3.141592653589793 * 650e9};  // rad/s
    double delta_n{0.009};
    double n_base{1.54};                 // ordinary index of the slabs
    double path_difference_mm{-0.1};     // c (t0f - t1f), millimetres
    double k{-1.0};
    double eta{8.0};
};

// Sweeps the slab thickness in millimetres and converts through scale().
ProtocolResult bell_scan_physical(BellProtocol protocol, const PhysicalBellSetup& setup, const Sweep& thickness_mm);

// Noise-free coherence exp(-(1-K) dtau_f^2) against the free path difference (mm).
ProtocolResult free_path_scan(double sigma, double k, const Sweep& path_difference_mm);

struct SigmaZOutcome {
    DensityMatrix coincidence;   // after sigma_z on Alice's photon
    DensityMatrix bunch_a;       // after sigma_z on both of Alice's photons
    DensityMatrix bunch_b;       // untouched
    double p_coincidence;
    double p_bunch_a;
    double p_bunch_b;
    double fidelity_coincidence;  // with |Psi+>
    double fidelity_bunch_a;
    double fidelity_bunch_b;
    double success_rate;          // probability-weighted fidelity
};

// |HV> input with both receivers dephasing for tau (default: the ideal -dtau_f).
SigmaZOutcome sigma_z_protocol(double dtau_f, double k, double eta);
SigmaZOutcome sigma_z_protocol(double dtau_f, double k, double eta, double tau);

// ------------------------- dead time and tomography -------------------------

struct DeadTimeSpec {
    double t;                    // interaction time (s)
    double n_h;
    double n_v;
    double dt_f;                 // free-evolution difference (s)
    double required_off_span;    // (|n_h - n_v| / min(n_h, n_v)) t + |dt_f|
    double min_pair_spacing;     // pair generation must be sparser than |dt_f|
};

DeadTimeSpec deadtime_requirement(double t, double n_h, double n_v, double dt_f);

struct TomographySample {
    double tauA;
    double magnitude;  // |coherence| relative to the input coherence
};

struct TomographyOptions {
    // Residuals are divided by (|y| + floor * max|y|).
    double relative_floor{0.05};
    int max_iterations{200};
    // Flag the fit when the fitted curve never departs from exp(-tau^2/2) by more than this.
    double resolution_threshold{1e-3};
};

struct TomographyFit {
    double k_hat;
    double abs_dtau_f_hat;
    double residual_norm;     // weighted, at the optimum
    int iterations;
    bool peak_unresolved;     // data compatible with plain Gaussian dephasing (K -> 1)
};

// Least-squares fit of |kappa_rn| over K in [-1, 1) and |dtau_f| > 0.
// Throws NoFitError for fewer than 8 samples or constant data.
TomographyFit tomography_fit(const std::vector<TomographySample>& samples, const TomographyOptions& options = {});
TomographyFit tomography_fit(const std::vector<std::pair<double, cplx>>& coherences,
                             const TomographyOptions& options = {});

// |kappa_rn(tauA)| for the given K and |dtau_f|.
double kappa_rn_magnitude(double tauA, double k, double abs_dtau_f);

// |kappa_rn| curves for several (K, |dtau_f|) pairs plus the plain |kappa|.
ProtocolResult deadtime_coherence_scan(const std::vector<std::pair<double, double>>& k_and_dtau, const Sweep& tauA);

// ------------------------------ discrimination ------------------------------

// Optimal input at K = -1: nu_-/nu_+, exact trace distance, the leading-order
// approximation, Bloch xy trajectories and guessing success rates with the
// rotation fixed at phi = -2 eta dtau_f. Both scans throw ContractViolation
// unless |dtau_f| >= 2.
ProtocolResult discrimination_scan(double dtau_f, double eta, const Sweep& tauA);

// Branch-conditioned coincidence fractions after the same rotation and a
// polarizing split. c_fraction: share of c photons sent to the branch;
// raw_fraction: share of all of Alice's photons in the branch; corrected:
// share of the branch clicks that truly are c photons.
ProtocolResult pseudo_hom_scan(double dtau_f, double eta, const Sweep& tauA, Pol branch);

// --------------------------- temporal distribution --------------------------

struct TemporalDensities {
    double joint;        // |g(s0, s1)|^2
    double margin0;      // |g(s0)|^2
    double margin1;      // |g(s1)|^2
    double conditional;  // density of s0 given s1
};

// Requires sigma. Throws DegenerateDistributionError for |K| = 1, where only
// the conditional density exists (use conditional_density).
TemporalDensities temporal_distribution(const SpectralParams& spectral, double s0, double s1);
double conditional_density(const SpectralParams& spectral, double s0, double s1);
double conditional_mean(const SpectralParams& spectral, double s1);
double conditional_variance(const SpectralParams& spectral);

}  // namespace homlab::protocols
