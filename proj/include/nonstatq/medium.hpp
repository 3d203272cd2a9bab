#pragma once

// Time-dependent linear media and the damping/frequency functions they induce
// on a single field mode:
//
//   Gamma(t)   = (sigma + d eps/dt) / eps
//   Lambda(t)  = int_0^t Gamma
//   omega^2(t) = omega0^2 / (eps mu)
//   Omega^2(t) = omega^2 - Gamma'/2 - Gamma^2/4

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace nonstatq {

/// Unit system. Natural units by default.
struct Constants {
    double hbar = 1.0;
    double eps0 = 1.0;
    double c = 1.0;

    void validate() const;
};

/// One plane-wave field mode.
struct ModeSpec {
    double omega0 = 1.0;  ///< reference frequency (rad / time)
    double volume = 1.0;  ///< quantization volume
    std::string polarization = "x";

    double wavenumber(const Constants& consts) const { return omega0 / consts.c; }
    void validate() const;
};

enum class ProfileKind { constant, exponential, linear_ramp, sinusoidal, power, tabulated };

const char* to_string(ProfileKind kind);

/// Value and first two time derivatives of a scalar function.
struct Jet {
    double value = 0.0;
    double first = 0.0;
    double second = 0.0;
};

/// A real function of time with analytic (parametric kinds) or
/// finite-difference (tabulated) derivatives. Immutable once built.
class TimeFunction {
public:
    /// f = value
    static TimeFunction constant(double value);
    /// f = amplitude * exp(rate t)
    static TimeFunction exponential(double amplitude, double rate);
    /// f = start + slope t
    static TimeFunction linear_ramp(double start, double slope);
    /// f = offset + amplitude sin(angular_frequency t + phase)
    static TimeFunction sinusoidal(double offset, double amplitude, double angular_frequency,
                                   double phase = 0.0);
    /// f = scale (1 + rate t)^exponent, defined while 1 + rate t > 0
    static TimeFunction power(double scale, double rate, double exponent);
    /// Interpolated samples. order 3 (cubic, default) or 1 (linear).
    /// fd_step <= 0 selects 1e-4 of the sample span.
    static TimeFunction tabulated(std::vector<double> times, std::vector<double> values,
                                  int order = 3, double fd_step = 0.0);

    TimeFunction();

    ProfileKind kind() const { return kind_; }
    const std::vector<double>& parameters() const { return params_; }

    double value(double t) const;
    Jet jet(double t) const;

    /// Closed interval on which the function may be evaluated.
    std::pair<double, double> domain() const;

private:
    struct Table;

    double table_value(double t) const;
    Jet table_jet(double t) const;

    ProfileKind kind_ = ProfileKind::constant;
    std::vector<double> params_;
    std::shared_ptr<const Table> table_;
};

/// Permittivity (units of eps0), permeability (units of mu0) and
/// conductivity (sigma/eps has dimension 1/time) as functions of time.
class MediumProfile {
public:
    MediumProfile();
    MediumProfile(TimeFunction permittivity, TimeFunction permeability, TimeFunction conductivity,
                  bool include_permittivity_rate = true);

    const TimeFunction& permittivity() const { return permittivity_; }
    const TimeFunction& permeability() const { return permeability_; }
    const TimeFunction& conductivity() const { return conductivity_; }

    /// When false the d eps/dt term is dropped from Gamma (older literature convention).
    bool include_permittivity_rate() const { return include_rate_; }

    /// Intersection of the three function domains.
    std::pair<double, double> domain() const;

    /// Checked evaluations; throw DomainError on eps <= 0, mu <= 0 or sigma < 0.
    Jet permittivity_at(double t) const;
    Jet permeability_at(double t) const;
    Jet conductivity_at(double t) const;

private:
    TimeFunction permittivity_;
    TimeFunction permeability_;
    TimeFunction conductivity_;
    bool include_rate_ = true;
};

/// Gamma(t) = (sigma + eps') / eps.
double gamma(const MediumProfile& profile, double t);

/// dGamma/dt.
double gamma_rate(const MediumProfile& profile, double t);

/// Lambda(t) = int_0^t Gamma(t') dt' by adaptive Gauss-Kronrod quadrature.
/// Throws NumericalError naming the subinterval that failed to converge.
double lambda_accum(const MediumProfile& profile, double t, double tol = 1e-12);

/// int_{t0}^{t1} Gamma.
double lambda_increment(const MediumProfile& profile, double t0, double t1, double tol = 1e-12);

/// omega(t) = omega0 / sqrt(eps mu)   (eps, mu relative).
double mode_frequency(const MediumProfile& profile, const ModeSpec& mode, const Constants& consts,
                      double t);

/// Omega^2(t) = omega^2 - Gamma'/2 - Gamma^2/4. May be negative.
double effective_frequency_sq(const MediumProfile& profile, const ModeSpec& mode,
                              const Constants& consts, double t);

/// Everything the envelope equation needs at one instant.
struct MediumState {
    double t = 0.0;
    double permittivity = 1.0;
    double gamma = 0.0;
    double gamma_rate = 0.0;
    double omega_sq = 1.0;
    double big_omega_sq = 1.0;

    bool inverted() const { return big_omega_sq < 0.0; }
};

MediumState medium_state(const MediumProfile& profile, const ModeSpec& mode,
                         const Constants& consts, double t);

}  // namespace nonstatq
