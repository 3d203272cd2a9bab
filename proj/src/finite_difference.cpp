#include "nonstatq/finite_difference.hpp"

#include <stdexcept>

#include "nonstatq/errors.hpp"

namespace nonstatq::fd {

std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> x,
                                                  int max_order) {
    const std::size_t n = x.size();
    const auto m = static_cast<std::size_t>(max_order);
    std::vector<std::vector<double>> c(m + 1, std::vector<double>(n, 0.0));
    c[0][0] = 1.0;
    double c1 = 1.0;
    double c4 = x[0] - x0;
    for (std::size_t i = 1; i < n; ++i) {
        const std::size_t mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - x0;
        for (std::size_t j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (std::size_t k = mn; k >= 1; --k) {
                    c[k][i] = c1 * (static_cast<double>(k) * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for (std::size_t k = mn; k >= 1; --k) {
                c[k][j] = (c4 * c[k][j] - static_cast<double>(k) * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    return c;
}

Derivatives differentiate(std::span<const double> x, std::span<const double> f) {
    const std::size_t n = x.size();
    if (f.size() != n) throw DomainError("differentiate: x and f differ in length");
    if (n < 5) throw DomainError("differentiate: need at least 5 samples");
    Derivatives d;
    d.first.resize(n);
    d.second.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t lo;
        std::size_t len;
        if (i == 0) {
            lo = 0;
            len = 5;
        } else if (i == n - 1) {
            lo = n - 5;
            len = 5;
        } else {
            lo = i - 1;
            len = 3;
        }
        const auto w = fornberg_weights(x[i], x.subspan(lo, len), 2);
        double d1 = 0.0;
        double d2 = 0.0;
        for (std::size_t j = 0; j < len; ++j) {
            d1 += w[1][j] * f[lo + j];
            d2 += w[2][j] * f[lo + j];
        }
        d.first[i] = d1;
        d.second[i] = d2;
    }
    return d;
}

}  // namespace nonstatq::fd
