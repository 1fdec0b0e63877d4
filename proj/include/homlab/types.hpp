// types.hpp: validated parameter containers shared by every homlab module
//
// Everything downstream of scale() works in dimensionless units: frequencies
// are measured in units of the spectral standard deviation sigma and times
// are multiplied by sigma.

#pragma once

#include <array>
#include <complex>
#include <optional>

namespace homlab {

using cplx = std::complex<double>;

enum class Pol : int { H = 0, V = 1 };

inline constexpr std::array<Pol, 2> kPols{Pol::H, Pol::V};

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

// Which receiver a bunched pair ends up with.
enum class Side { A, B };

/// Joint-spectrum descriptor: eta = mu/sigma and frequency correlation K.
/// The physical pair (mu, sigma) is optional and only needed for unit conversion.
class SpectralParams {
public:
    static SpectralParams dimensionless(double eta, double k);
    static SpectralParams physical(double mu, double sigma, double k);
    // Keeps eta as given and attaches sigma, so mu = eta * sigma.
    static SpectralParams with_sigma(double eta, double k, double sigma);

    double eta() const noexcept { return eta_; }
    double k() const noexcept { return k_; }
    std::optional<double> mu() const noexcept { return mu_; }
    std::optional<double> sigma() const noexcept { return sigma_; }

    // Throws UnitConversionError when sigma is absent.
    double require_sigma() const;

private:
    SpectralParams(double eta, double k, std::optional<double> mu, std::optional<double> sigma);

    double eta_;
    double k_;
    std::optional<double> mu_;
    std::optional<double> sigma_;
};

/// The four polarization amplitudes C_HH, C_HV, C_VH, C_VV of the input pair.
/// First label is the photon on path 0, second the photon on path 1.
class PolarizationAmplitudes {
public:
    // Throws InvariantViolation unless the squared norm is 1 within 1e-12.
    PolarizationAmplitudes(cplx hh, cplx hv, cplx vh, cplx vv);

    static PolarizationAmplitudes normalize(cplx hh, cplx hv, cplx vh, cplx vv);

    static PolarizationAmplitudes horizontal_vertical();  // |HV>
    static PolarizationAmplitudes singlet();     // (|HV> - |VH>)/sqrt2
    static PolarizationAmplitudes psi_plus();    // (|HV> + |VH>)/sqrt2
    static PolarizationAmplitudes plus_plus();   // |++>
    // |c> (x) |c> with c = (ch, cv), normalized.
    static PolarizationAmplitudes separable(cplx ch, cplx cv);
    // The state maximizing single-photon c/b distinguishability:
    // C_HH = C_VV = 1/2, C_HV = 1/sqrt2, C_VH = 0.
    static PolarizationAmplitudes discrimination_optimal();

    cplx hh() const noexcept { return c_[0]; }
    cplx hv() const noexcept { return c_[1]; }
    cplx vh() const noexcept { return c_[2]; }
    cplx vv() const noexcept { return c_[3]; }
    cplx operator()(Pol first, Pol second) const noexcept {
        return c_[2 * static_cast<int>(first) + static_cast<int>(second)];
    }
    const std::array<cplx, 4>& data() const noexcept { return c_; }

    // C_{ll'} = c_l c_l' for a single qubit c.
    bool is_separable_identical(double tol = 1e-12) const noexcept;

private:
    std::array<cplx, 4> c_;
};

class PathChannel {
public:
    PathChannel() = default;
    // Throws InvariantViolation unless n_h >= 1, n_v >= 1 and t >= 0.
    PathChannel(double n_h, double n_v, double t);

    // Interaction time of a medium of thickness d (metres): t = d / c.
    static PathChannel slab(double n_h, double n_v, double thickness_m);

    double n_h() const noexcept { return n_h_; }
    double n_v() const noexcept { return n_v_; }
    double n(Pol p) const noexcept { return p == Pol::H ? n_h_ : n_v_; }
    double t() const noexcept { return t_; }

private:
    double n_h_{1.0};
    double n_v_{1.0};
    double t_{0.0};
};

struct InterferometerConfig {
    PathChannel path0;
    PathChannel path1;
    PathChannel pathA;
    PathChannel pathB;
    double t0f{0.0};
    double t1f{0.0};

    void validate() const;
};

/// Dimensionless delays. dtau[l][l'] = sigma (t0f + n_0l t0 - t1f - n_1l' t1)
/// includes the free-evolution difference; tau_j = sigma (n_jH - n_jV) t_j.
struct ScaledConfig {
    double dtau_f{0.0};
    std::array<std::array<double, 2>, 2> dtau{};
    double tau0{0.0};
    double tau1{0.0};
    double tauA{0.0};
    double tauB{0.0};

    double delay(Pol first, Pol second) const noexcept {
        return dtau[static_cast<int>(first)][static_cast<int>(second)];
    }
    double tau_side(Side s) const noexcept { return s == Side::A ? tauA : tauB; }

    // No birefringence before the beam splitter (tau0 = tau1 = 0). Isotropic
    // delays are allowed; they only shift the effective path difference.
    bool pre_dephasing_free(double tol = 1e-12) const noexcept;

    // Dephasing only after the beam splitter.
    static ScaledConfig post_only(double dtau_f, double tauA, double tauB);

    // Built from dimensionless optical delays s_jl = sigma n_jl t_j.
    static ScaledConfig from_delays(double dtau_f, double s0h, double s0v, double s1h, double s1v,
                                    double tauA, double tauB);
};

/// Converts a physical configuration to its dimensionless form.
/// Throws UnitConversionError when spectral.sigma() is absent.
ScaledConfig scale(const InterferometerConfig& config, const SpectralParams& spectral);

}  // namespace homlab
