#pragma once

#include "metdich/distortion.hpp"
#include "metdich/metric_space.hpp"

#include <vector>

namespace metdich {

/// Gram matrix of an embedding into l2 scaled to be non-contracting:
/// d(i,j)^2 <= Q_ii + Q_jj - 2 Q_ij <= D^2 d(i,j)^2.
struct GramCertificate {
    Eigen::MatrixXd matrix;
    double D = 1.0;

    /// Checks the sandwich and PSD conditions to `tol`.
    bool verify(const MetricSpace& x, double tol = 1e-9) const;
};

struct L2DistortionReport : DistortionReport {
    GramCertificate gram;
    Eigen::MatrixXd coordinates;  ///< rows are points; distortion equals `upper`
    int iterations = 0;
};

struct L2Options {
    int max_iterations = 200;
};

/// Least distortion of X into Euclidean space, bracketed.
///
/// The semidefinite program min D^2 s.t. d^2 <= |x_i - x_j|^2 <= D^2 d^2 is
/// solved by a primal-dual interior-point method. `upper` is the exact
/// distortion of the factorized primal point; `lower` comes from the dual
/// multipliers, repaired to a PSD matrix P with P1 = 0, through
/// c^2 >= sum_{P>0} P d^2 / sum_{P<0} |P| d^2. `complete` is set once
/// upper - lower <= tol * upper.
L2DistortionReport min_distortion_l2(const MetricSpace& x, double tol = 1e-6, L2Options options = {});

struct WeightedPair {
    Index i = 0;
    Index j = 0;
    double w = 1.0;
};

/// sqrt( sum_num w d^2 / (modulus sum_den w d^2) ).
double poincare_lower_bound(const MetricSpace& x, std::span<const WeightedPair> numerator,
                            std::span<const WeightedPair> denominator, double modulus);

/// Diagonal pairs {x, complement x} and edge pairs of the Hamming cube {0,1}^n,
/// indexed as in hamming_cube(n).
std::vector<WeightedPair> cube_diagonal_pairs(int n);
std::vector<WeightedPair> cube_edge_pairs(int n);

}  // namespace metdich
