#pragma once

// Fixed-seed generators for property tests.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include "nonstatq/envelope.hpp"

namespace nonstatq::testing {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    cplx complex_in_disc(double radius) {
        const double r = radius * std::sqrt(uniform(0.0, 1.0));
        return std::polar(r, uniform(-M_PI, M_PI));
    }

    /// Envelope sample with w = -2i exactly (up to roundoff) and random medium fields.
    EnvelopeSample valid_sample() {
        EnvelopeSample s;
        s.t = uniform(0.0, 20.0);
        const double rho = uniform(0.4, 2.5);
        const double phase = uniform(-10.0, 10.0);
        const double drift = uniform(-1.0, 1.0);
        s.eps = std::polar(rho, phase);
        s.deps = s.eps * cplx{drift, 1.0 / (rho * rho)};
        s.rho = rho;
        s.drho = drift * rho;
        s.phase = phase;
        s.lambda = uniform(-1.0, 3.0);
        s.gamma_val = uniform(0.0, 0.5);
        s.gamma_rate = uniform(-0.1, 0.1);
        s.omega_sq = uniform(0.3, 3.0);
        s.big_omega_sq = s.omega_sq - 0.5 * s.gamma_rate - 0.25 * s.gamma_val * s.gamma_val;
        return s;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

}  // namespace nonstatq::testing
