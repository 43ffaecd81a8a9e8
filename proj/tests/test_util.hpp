#ifndef SIGSTREAM_TESTS_TEST_UTIL_HPP
#define SIGSTREAM_TESTS_TEST_UTIL_HPP

#include <cmath>
#include <random>
#include <vector>

#include "sigstream/sig.hpp"

namespace sigtest {

// relative comparison with an absolute floor for near-zero references
inline bool close_rel(double actual, double expected, double tol, double floor = 1.0) {
    return std::abs(actual - expected) <= tol * std::max(std::abs(expected), floor);
}

inline sigstream::sig::PiecewiseLinearPath random_path(std::mt19937_64& rng, int d, int vertices,
                                                       double scale = 1.0) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    std::vector<double> pts(static_cast<std::size_t>(d) * vertices);
    for (double& v : pts) v = dist(rng);
    return sigstream::sig::PiecewiseLinearPath(d, std::move(pts));
}

// coordinates on the 2^-26 grid: sums with moderate integer offsets stay
// exactly representable, making increment arithmetic bitwise-translation-safe
inline double dyadic(std::mt19937_64& rng, double scale = 1.0) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    return std::ldexp(std::round(std::ldexp(dist(rng), 26)), -26);
}

inline sigstream::sig::PiecewiseLinearPath random_dyadic_path(std::mt19937_64& rng, int d,
                                                              int vertices) {
    std::vector<double> pts(static_cast<std::size_t>(d) * vertices);
    for (double& v : pts) v = dyadic(rng);
    return sigstream::sig::PiecewiseLinearPath(d, std::move(pts));
}

}  // namespace sigtest

#endif
