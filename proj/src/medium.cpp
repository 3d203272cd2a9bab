#include "nonstatq/medium.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/interpolators/makima.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "nonstatq/errors.hpp"

namespace nonstatq {

namespace {

std::string fmt_time(double t) {
    std::ostringstream os;
    os.precision(17);
    os << t;
    return os.str();
}

}  // namespace

void Constants::validate() const {
    if (!(hbar > 0.0)) throw ConfigError("constants.hbar must be positive");
    if (!(eps0 > 0.0)) throw ConfigError("constants.eps0 must be positive");
    if (!(c > 0.0)) throw ConfigError("constants.c must be positive");
}

void ModeSpec::validate() const {
    if (!(omega0 > 0.0)) throw ConfigError("mode.omega0 must be positive");
    if (!(volume > 0.0)) throw ConfigError("mode.volume must be positive");
}

const char* to_string(ProfileKind kind) {
    switch (kind) {
        case ProfileKind::constant: return "constant";
        case ProfileKind::exponential: return "exponential";
        case ProfileKind::linear_ramp: return "linear_ramp";
        case ProfileKind::sinusoidal: return "sinusoidal";
        case ProfileKind::power: return "power";
        case ProfileKind::tabulated: return "tabulated";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// TimeFunction

struct TimeFunction::Table {
    std::vector<double> times;
    std::vector<double> values;
    int order = 3;
    double fd_step = 0.0;
    std::shared_ptr<boost::math::interpolators::makima<std::vector<double>>> spline;
};

TimeFunction::TimeFunction() : kind_(ProfileKind::constant), params_{0.0} {}

TimeFunction TimeFunction::constant(double value) {
    TimeFunction f;
    f.kind_ = ProfileKind::constant;
    f.params_ = {value};
    return f;
}

TimeFunction TimeFunction::exponential(double amplitude, double rate) {
    TimeFunction f;
    f.kind_ = ProfileKind::exponential;
    f.params_ = {amplitude, rate};
    return f;
}

TimeFunction TimeFunction::linear_ramp(double start, double slope) {
    TimeFunction f;
    f.kind_ = ProfileKind::linear_ramp;
    f.params_ = {start, slope};
    return f;
}

TimeFunction TimeFunction::sinusoidal(double offset, double amplitude, double angular_frequency,
                                      double phase) {
    TimeFunction f;
    f.kind_ = ProfileKind::sinusoidal;
    f.params_ = {offset, amplitude, angular_frequency, phase};
    return f;
}

TimeFunction TimeFunction::power(double scale, double rate, double exponent) {
    TimeFunction f;
    f.kind_ = ProfileKind::power;
    f.params_ = {scale, rate, exponent};
    return f;
}

TimeFunction TimeFunction::tabulated(std::vector<double> times, std::vector<double> values,
                                     int order, double fd_step) {
    if (times.size() != values.size()) {
        throw ConfigError("tabulated profile: times and values differ in length");
    }
    if (order != 1 && order != 3) {
        throw ConfigError("tabulated profile: interpolation order must be 1 or 3");
    }
    const std::size_t min_points = order == 3 ? 4 : 2;
    if (times.size() < min_points) {
        throw ConfigError("tabulated profile: order " + std::to_string(order) + " needs at least " +
                          std::to_string(min_points) + " samples");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) {
            throw ConfigError("tabulated profile: sample times must be strictly increasing");
        }
    }
    auto table = std::make_shared<Table>();
    table->order = order;
    const double span = times.back() - times.front();
    table->fd_step = fd_step > 0.0 ? fd_step : 1e-4 * span;
    if (order == 3) {
        auto x = times;
        auto y = values;
        table->spline = std::make_shared<boost::math::interpolators::makima<std::vector<double>>>(
            std::move(x), std::move(y));
    }
    table->times = std::move(times);
    table->values = std::move(values);

    TimeFunction f;
    f.kind_ = ProfileKind::tabulated;
    f.params_ = {static_cast<double>(order), table->fd_step};
    f.table_ = std::move(table);
    return f;
}

std::pair<double, double> TimeFunction::domain() const {
    switch (kind_) {
        case ProfileKind::tabulated: return {table_->times.front(), table_->times.back()};
        case ProfileKind::power: {
            const double rate = params_[1];
            if (rate > 0.0) return {-1.0 / rate, HUGE_VAL};
            if (rate < 0.0) return {-HUGE_VAL, -1.0 / rate};
            return {-HUGE_VAL, HUGE_VAL};
        }
        default: return {-HUGE_VAL, HUGE_VAL};
    }
}

double TimeFunction::table_value(double t) const {
    const auto& tab = *table_;
    if (t < tab.times.front() || t > tab.times.back()) {
        throw DomainError("tabulated profile queried at t=" + fmt_time(t) + " outside [" +
                          fmt_time(tab.times.front()) + ", " + fmt_time(tab.times.back()) + "]");
    }
    if (tab.order == 3) return (*tab.spline)(t);
    auto it = std::upper_bound(tab.times.begin(), tab.times.end(), t);
    if (it == tab.times.end()) return tab.values.back();
    const auto i = static_cast<std::size_t>(it - tab.times.begin());
    const double t0 = tab.times[i - 1];
    const double t1 = tab.times[i];
    const double w = (t - t0) / (t1 - t0);
    return (1.0 - w) * tab.values[i - 1] + w * tab.values[i];
}

Jet TimeFunction::table_jet(double t) const {
    const auto& tab = *table_;
    const double lo = tab.times.front();
    const double hi = tab.times.back();
    const double h = tab.fd_step;
    Jet j;
    j.value = table_value(t);
    if (t - h >= lo && t + h <= hi) {
        const double fm = table_value(t - h);
        const double fp = table_value(t + h);
        j.first = (fp - fm) / (2.0 * h);
        j.second = (fp - 2.0 * j.value + fm) / (h * h);
        return j;
    }
    // One-sided second-order stencils at the ends of the table.
    const double s = t - h < lo ? 1.0 : -1.0;
    const double f1 = table_value(t + s * h);
    const double f2 = table_value(t + 2.0 * s * h);
    j.first = s * (-3.0 * j.value + 4.0 * f1 - f2) / (2.0 * h);
    j.second = (j.value - 2.0 * f1 + f2) / (h * h);
    return j;
}

double TimeFunction::value(double t) const { return jet(t).value; }

Jet TimeFunction::jet(double t) const {
    const auto& p = params_;
    switch (kind_) {
        case ProfileKind::constant: return {p[0], 0.0, 0.0};
        case ProfileKind::exponential: {
            const double v = p[0] * std::exp(p[1] * t);
            return {v, p[1] * v, p[1] * p[1] * v};
        }
        case ProfileKind::linear_ramp: return {p[0] + p[1] * t, p[1], 0.0};
        case ProfileKind::sinusoidal: {
            const double arg = p[2] * t + p[3];
            return {p[0] + p[1] * std::sin(arg), p[1] * p[2] * std::cos(arg),
                    -p[1] * p[2] * p[2] * std::sin(arg)};
        }
        case ProfileKind::power: {
            const double base = 1.0 + p[1] * t;
            if (!(base > 0.0)) {
                throw DomainError("power profile queried at t=" + fmt_time(t) +
                                  " where 1 + rate*t <= 0");
            }
            const double v = p[0] * std::pow(base, p[2]);
            return {v, p[2] * p[1] * v / base, p[2] * (p[2] - 1.0) * p[1] * p[1] * v / (base * base)};
        }
        case ProfileKind::tabulated: return table_jet(t);
    }
    return {};
}

// ---------------------------------------------------------------------------
// MediumProfile

MediumProfile::MediumProfile()
    : permittivity_(TimeFunction::constant(1.0)),
      permeability_(TimeFunction::constant(1.0)),
      conductivity_(TimeFunction::constant(0.0)) {}

MediumProfile::MediumProfile(TimeFunction permittivity, TimeFunction permeability,
                             TimeFunction conductivity, bool include_permittivity_rate)
    : permittivity_(std::move(permittivity)),
      permeability_(std::move(permeability)),
      conductivity_(std::move(conductivity)),
      include_rate_(include_permittivity_rate) {}

std::pair<double, double> MediumProfile::domain() const {
    auto [a0, b0] = permittivity_.domain();
    auto [a1, b1] = permeability_.domain();
    auto [a2, b2] = conductivity_.domain();
    return {std::max({a0, a1, a2}), std::min({b0, b1, b2})};
}

Jet MediumProfile::permittivity_at(double t) const {
    Jet j = permittivity_.jet(t);
    if (!(j.value > 0.0)) {
        throw DomainError("permittivity must be positive, got " + fmt_time(j.value) + " at t=" +
                          fmt_time(t));
    }
    return j;
}

Jet MediumProfile::permeability_at(double t) const {
    Jet j = permeability_.jet(t);
    if (!(j.value > 0.0)) {
        throw DomainError("permeability must be positive, got " + fmt_time(j.value) + " at t=" +
                          fmt_time(t));
    }
    return j;
}

Jet MediumProfile::conductivity_at(double t) const {
    Jet j = conductivity_.jet(t);
    if (j.value < 0.0) {
        throw DomainError("conductivity must be nonnegative, got " + fmt_time(j.value) + " at t=" +
                          fmt_time(t));
    }
    return j;
}

// ---------------------------------------------------------------------------
// Derived functions

double gamma(const MediumProfile& profile, double t) {
    const Jet eps = profile.permittivity_at(t);
    const Jet sig = profile.conductivity_at(t);
    const double rate = profile.include_permittivity_rate() ? eps.first : 0.0;
    return (sig.value + rate) / eps.value;
}

double gamma_rate(const MediumProfile& profile, double t) {
    const Jet eps = profile.permittivity_at(t);
    const Jet sig = profile.conductivity_at(t);
    const bool with_rate = profile.include_permittivity_rate();
    const double num = sig.value + (with_rate ? eps.first : 0.0);
    const double dnum = sig.first + (with_rate ? eps.second : 0.0);
    return dnum / eps.value - num * eps.first / (eps.value * eps.value);
}

namespace {

using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;

double integrate_adaptive(const MediumProfile& profile, double a, double b, double tol,
                          int depth) {
    double err = 0.0;
    const double val = Rule::integrate([&](double s) { return gamma(profile, s); }, a, b, 0, 0.0,
                                       &err);
    if (err <= tol * std::max(1.0, std::abs(val)) || std::abs(b - a) < 1e-14) return val;
    if (depth >= 30) {
        throw NumericalError("Lambda quadrature did not converge on subinterval [" + fmt_time(a) +
                             ", " + fmt_time(b) + "] (error estimate " + fmt_time(err) + ")");
    }
    const double m = 0.5 * (a + b);
    return integrate_adaptive(profile, a, m, 0.5 * tol, depth + 1) +
           integrate_adaptive(profile, m, b, 0.5 * tol, depth + 1);
}

}  // namespace

double lambda_increment(const MediumProfile& profile, double t0, double t1, double tol) {
    if (t0 == t1) return 0.0;
    const auto [lo, hi] = profile.domain();
    const double a = std::min(t0, t1);
    const double b = std::max(t0, t1);
    if (a < lo || b > hi) {
        throw DomainError("Lambda requested on [" + fmt_time(a) + ", " + fmt_time(b) +
                          "] outside the medium domain");
    }
    const double v = integrate_adaptive(profile, a, b, tol, 0);
    return t1 >= t0 ? v : -v;
}

double lambda_accum(const MediumProfile& profile, double t, double tol) {
    if (t < 0.0) throw DomainError("Lambda(t) requires t >= 0, got t=" + fmt_time(t));
    return lambda_increment(profile, 0.0, t, tol);
}

double mode_frequency(const MediumProfile& profile, const ModeSpec& mode, const Constants&,
                      double t) {
    const double eps = profile.permittivity_at(t).value;
    const double mu = profile.permeability_at(t).value;
    return mode.omega0 / std::sqrt(eps * mu);
}

double effective_frequency_sq(const MediumProfile& profile, const ModeSpec& mode,
                              const Constants& consts, double t) {
    const double w = mode_frequency(profile, mode, consts, t);
    const double g = gamma(profile, t);
    return w * w - 0.5 * gamma_rate(profile, t) - 0.25 * g * g;
}

MediumState medium_state(const MediumProfile& profile, const ModeSpec& mode,
                         const Constants& consts, double t) {
    MediumState s;
    s.t = t;
    s.permittivity = profile.permittivity_at(t).value;
    s.gamma = gamma(profile, t);
    s.gamma_rate = gamma_rate(profile, t);
    const double w = mode_frequency(profile, mode, consts, t);
    s.omega_sq = w * w;
    s.big_omega_sq = s.omega_sq - 0.5 * s.gamma_rate - 0.25 * s.gamma * s.gamma;
    return s;
}

}  // namespace nonstatq
