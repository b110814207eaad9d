#pragma once

#include "metdich/metric_space.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace metdich {

// Ratio arithmetic on matrices: `dx` holds domain distances and `dy` the
// pulled-back host distances dy(i,j) = d_H(f(i), f(j)).

/// max over i<j of dy(i,j) / dx(i,j). Zero for a constant map.
template <typename DX, typename DY>
double lipschitz_norm(const Eigen::MatrixBase<DX>& dx, const Eigen::MatrixBase<DY>& dy) {
    double best = 0.0;
    for (Index i = 0; i < dx.rows(); ++i)
        for (Index j = i + 1; j < dx.cols(); ++j)
            if (dx(i, j) > 0) best = std::max(best, double(dy(i, j)) / double(dx(i, j)));
    return best;
}

/// Product of forward and inverse Lipschitz norms. Throws when some pair
/// collapses (the map is not injective).
template <typename DX, typename DY>
double distortion(const Eigen::MatrixBase<DX>& dx, const Eigen::MatrixBase<DY>& dy) {
    for (Index i = 0; i < dx.rows(); ++i)
        for (Index j = i + 1; j < dx.cols(); ++j)
            if (!(dy(i, j) > 0)) throw std::invalid_argument("distortion: map is not injective");
    return lipschitz_norm(dx, dy) * lipschitz_norm(dy, dx);
}

/// A map from domain point indices to host point indices. The spaces are
/// borrowed and must outlive the embedding.
class Embedding {
public:
    Embedding(const MetricSpace& domain, const MetricSpace& host, std::vector<Index> assignment);

    const MetricSpace& domain() const noexcept { return *domain_; }
    const MetricSpace& host() const noexcept { return *host_; }
    const std::vector<Index>& assignment() const noexcept { return assignment_; }
    Index operator[](Index i) const { return assignment_[static_cast<std::size_t>(i)]; }

    /// d_H(f(i), f(j)) for all domain pairs.
    Eigen::MatrixXd pulled_back() const;
    bool injective() const;
    bool constant() const;

private:
    const MetricSpace* domain_;
    const MetricSpace* host_;
    std::vector<Index> assignment_;
};

/// Exact max ratio over unordered pairs. Requires at least two domain points.
double lipschitz_norm(const Embedding& e);
/// Lipschitz norm of the inverse on the image; +inf if some pair collapses.
double inverse_lipschitz_norm(const Embedding& e);
/// dist(f) = |f|_Lip |f^-1|_Lip; throws for non-injective or constant maps.
double distortion(const Embedding& e);

enum class Certificate {
    exhaustive,          ///< search completed; lower == upper
    partial_search,      ///< budget ran out; lower is the minimum bound over abandoned subtrees
    functional,          ///< reciprocal of an invariant or Poincare-type functional
    semidefinite_dual,   ///< feasible dual matrix of the Euclidean distortion program
};

const char* to_string(Certificate c);

struct DistortionReport {
    double lower = 1.0;
    double upper = std::numeric_limits<double>::infinity();
    std::vector<Index> witness;  ///< domain -> host assignment attaining `upper` (empty if none)
    Certificate certificate = Certificate::exhaustive;
    std::uint64_t nodes = 0;     ///< search nodes visited
    bool complete = false;

    double gap() const { return upper - lower; }
};

struct SearchBudget {
    std::uint64_t max_nodes = 50'000'000;
};

/// Least distortion over injections X -> H by branch and bound.
///
/// Domain points are assigned most-constrained first (decreasing distance
/// sum, ties by index); host candidates are tried in index order, and
/// interchangeable host points (twins: equal distances to every other point)
/// are used in index order only. Throws std::invalid_argument if |X| > |H|.
DistortionReport min_distortion_exact(const MetricSpace& x, const MetricSpace& h, SearchBudget budget = {});

}  // namespace metdich
