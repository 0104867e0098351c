#ifndef MPP_TEST_UTIL_HPP
#define MPP_TEST_UTIL_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace mpp::test {

/// One-sample Kolmogorov-Smirnov distance against a reference CDF.
inline double ks_distance(std::vector<double> samples,
                          const std::function<double(double)>& cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::max((static_cast<double>(i) + 1.0) / n - f,
                                 f - static_cast<double>(i) / n));
    }
    return d;
}

/// Composite Simpson quadrature on a uniform grid (count must be odd).
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      std::size_t count) {
    const double h = (b - a) / static_cast<double>(count - 1);
    double acc = f(a) + f(b);
    for (std::size_t i = 1; i + 1 < count; ++i) {
        acc += f(a + h * static_cast<double>(i)) * (i % 2 ? 4.0 : 2.0);
    }
    return acc * h / 3.0;
}

} // namespace mpp::test

#endif // MPP_TEST_UTIL_HPP
