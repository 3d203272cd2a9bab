#pragma once

// Finite-difference derivatives of sampled series on (possibly nonuniform)
// grids. Weights come from Fornberg's recursion (Math. Comp. 51, 1988).

#include <cstddef>
#include <span>
#include <vector>

namespace nonstatq::fd {

/// Weights w[k][j] such that f^(k)(x0) ~ sum_j w[k][j] f(x[j]), k <= max_order.
std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> x,
                                                  int max_order);

/// First and second derivative of f at every node: three-point centred
/// stencils inside (second order), five-point one-sided stencils at both ends
/// (third order or better). Needs at least 5 samples.
struct Derivatives {
    std::vector<double> first;
    std::vector<double> second;
};

Derivatives differentiate(std::span<const double> x, std::span<const double> f);

}  // namespace nonstatq::fd
