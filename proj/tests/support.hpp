#pragma once

// Shared fixtures and brute-force oracles for the test suites.

#include "metdich/distortion.hpp"
#include "metdich/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace metdich::fixtures {

/// Uniform double in [0,1) from the top 53 bits; identical on every platform.
inline double unit(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

/// Shortest-path closure of random edge weights in [1, 10) on `size` points.
inline MetricSpace random_metric(std::mt19937_64& rng, Index size) {
    Eigen::MatrixXd d(size, size);
    for (Index i = 0; i < size; ++i) {
        d(i, i) = 0.0;
        for (Index j = i + 1; j < size; ++j) d(i, j) = d(j, i) = 1.0 + 9.0 * unit(rng);
    }
    for (Index k = 0; k < size; ++k)
        for (Index i = 0; i < size; ++i)
            for (Index j = 0; j < size; ++j) d(i, j) = std::min(d(i, j), d(i, k) + d(k, j));
    return MetricSpace::validated(d, index_labels(size));
}

/// `count` hosts with sizes cycling through [lo, hi], from one seed.
inline std::vector<MetricSpace> random_hosts(std::uint64_t seed, int count, Index lo, Index hi) {
    std::mt19937_64 rng(seed);
    std::vector<MetricSpace> out;
    for (int i = 0; i < count; ++i) out.push_back(random_metric(rng, lo + i % (hi - lo + 1)));
    return out;
}

/// Random points in the unit square, Euclidean distances.
inline MetricSpace random_plane(std::mt19937_64& rng, Index size) {
    Eigen::MatrixXd p(size, 2);
    for (Index i = 0; i < size; ++i) p.row(i) << unit(rng), unit(rng);
    return MetricSpace::validated(euclidean_distances(p), index_labels(size));
}

/// max over all walks f(0..n) of d(f0, fn) / (n max step), by enumeration.
inline double brute_force_psi(const MetricSpace& h, int n) {
    std::vector<Index> f(static_cast<std::size_t>(n) + 1, 0);
    double best = 0.0;
    while (true) {
        double step = 0.0;
        for (int i = 0; i < n; ++i) step = std::max(step, h(f[i], f[i + 1]));
        if (step > 0.0) best = std::max(best, h(f[0], f[n]) / (n * step));
        int pos = n;
        while (pos >= 0 && ++f[pos] == h.size()) f[pos--] = 0;
        if (pos < 0) break;
    }
    return best;
}

/// Least distortion over all injections, by enumeration.
inline double brute_force_distortion(const MetricSpace& x, const MetricSpace& h) {
    std::vector<Index> hosts(static_cast<std::size_t>(h.size()));
    for (std::size_t i = 0; i < hosts.size(); ++i) hosts[i] = static_cast<Index>(i);
    double best = std::numeric_limits<double>::infinity();
    // Every injection appears as the prefix of some permutation.
    do {
        std::vector<Index> f(hosts.begin(), hosts.begin() + x.size());
        best = std::min(best, distortion(Embedding(x, h, f)));
    } while (std::next_permutation(hosts.begin(), hosts.end()));
    return best;
}

}  // namespace metdich::fixtures
