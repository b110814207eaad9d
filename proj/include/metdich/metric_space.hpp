#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace metdich {

using Index = Eigen::Index;

/// Slack used when checking metric axioms on constructed values.
inline constexpr double kAxiomTolerance = 1e-12;
/// Slack used for pruning and equality decisions inside searches.
inline constexpr double kSearchTolerance = 1e-9;

enum class MetricViolation {
    shape,
    nonfinite,
    negative,
    nonzero_diagonal,
    asymmetry,
    zero_off_diagonal,
    triangle,
};

const char* to_string(MetricViolation v);

/// Raised by validation; carries the violated axiom and the witnessing indices
/// (unused slots are -1).
class MetricError : public std::invalid_argument {
public:
    MetricError(MetricViolation kind, Index i, Index j, Index k, const std::string& what)
        : std::invalid_argument(what), kind_(kind), i_(i), j_(j), k_(k) {}

    MetricViolation kind() const noexcept { return kind_; }
    Index i() const noexcept { return i_; }
    Index j() const noexcept { return j_; }
    Index k() const noexcept { return k_; }

private:
    MetricViolation kind_;
    Index i_, j_, k_;
};

/// A finite metric space: labels plus a validated symmetric distance matrix.
///
/// Instances are only produced by `validated()` (or by transformations that
/// preserve the axioms), so holding one is proof that the axioms hold.
template <typename Scalar>
class BasicMetricSpace {
public:
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    BasicMetricSpace() = default;

    template <typename Derived>
    static BasicMetricSpace validated(const Eigen::MatrixBase<Derived>& dist,
                                      std::vector<std::string> labels);

    /// Builds a space without checking axioms. Only for constructors whose
    /// output is a metric by construction and is re-validated in tests.
    static BasicMetricSpace trusted(Matrix dist, std::vector<std::string> labels) {
        return BasicMetricSpace(std::move(dist), std::move(labels));
    }

    Index size() const noexcept { return dist_.rows(); }
    const Matrix& distances() const noexcept { return dist_; }
    Scalar operator()(Index i, Index j) const { return dist_(i, j); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::string& label(Index i) const { return labels_[static_cast<std::size_t>(i)]; }

    /// Index of the point carrying `label`, or -1.
    Index find(const std::string& label) const {
        auto it = std::find(labels_.begin(), labels_.end(), label);
        return it == labels_.end() ? Index{-1} : static_cast<Index>(it - labels_.begin());
    }

    BasicMetricSpace scaled(Scalar lambda) const {
        if (!(lambda > Scalar(0)))
            throw std::invalid_argument("scale factor must be positive");
        return BasicMetricSpace(dist_ * lambda, labels_);
    }

    /// Restriction to the listed points, in the listed order.
    BasicMetricSpace subspace(std::span<const Index> points) const {
        const auto n = static_cast<Index>(points.size());
        Matrix d(n, n);
        std::vector<std::string> labels;
        labels.reserve(points.size());
        for (Index a = 0; a < n; ++a) {
            labels.push_back(label(points[a]));
            for (Index b = 0; b < n; ++b) d(a, b) = dist_(points[a], points[b]);
        }
        return BasicMetricSpace(std::move(d), std::move(labels));
    }

    Scalar diameter() const { return size() == 0 ? Scalar(0) : dist_.maxCoeff(); }

private:
    BasicMetricSpace(Matrix dist, std::vector<std::string> labels)
        : dist_(std::move(dist)), labels_(std::move(labels)) {}

    Matrix dist_;
    std::vector<std::string> labels_;
};

using MetricSpace = BasicMetricSpace<double>;

namespace detail {
[[noreturn]] void throw_violation(MetricViolation kind, Index i, Index j, Index k);
}

template <typename Scalar>
template <typename Derived>
BasicMetricSpace<Scalar> BasicMetricSpace<Scalar>::validated(const Eigen::MatrixBase<Derived>& dist,
                                                             std::vector<std::string> labels) {
    const Index n = dist.rows();
    if (dist.cols() != n || static_cast<std::size_t>(n) != labels.size())
        detail::throw_violation(MetricViolation::shape, -1, -1, -1);

    Matrix d = dist.template cast<Scalar>();
    const Scalar scale = std::max<Scalar>(Scalar(1), n ? d.cwiseAbs().maxCoeff() : Scalar(0));
    const Scalar tol = Scalar(kAxiomTolerance) * scale;

    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            if (!std::isfinite(static_cast<double>(d(i, j))))
                detail::throw_violation(MetricViolation::nonfinite, i, j, -1);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            if (d(i, j) < Scalar(0)) detail::throw_violation(MetricViolation::negative, i, j, -1);
    for (Index i = 0; i < n; ++i)
        if (std::abs(d(i, i)) > tol) detail::throw_violation(MetricViolation::nonzero_diagonal, i, i, -1);
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j)
            if (std::abs(d(i, j) - d(j, i)) > tol)
                detail::throw_violation(MetricViolation::asymmetry, i, j, -1);
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j)
            if (d(i, j) <= tol) detail::throw_violation(MetricViolation::zero_off_diagonal, i, j, -1);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            for (Index k = 0; k < n; ++k)
                if (d(i, k) > d(i, j) + d(j, k) + tol)
                    detail::throw_violation(MetricViolation::triangle, i, j, k);

    d.diagonal().setZero();
    return BasicMetricSpace(std::move(d), std::move(labels));
}

/// Validates a square matrix against the metric axioms. Errors name the first
/// violated axiom (checked in declaration order of `MetricViolation`) and the
/// witnessing indices; a triangle violation at (i,j,k) means d(i,k) > d(i,j) + d(j,k).
template <typename Derived>
MetricSpace validate_metric(const Eigen::MatrixBase<Derived>& dist, std::vector<std::string> labels) {
    return MetricSpace::validated(dist, std::move(labels));
}

/// Labels "0", "1", ... "n-1".
std::vector<std::string> index_labels(Index n);

/// Snowflake transform d -> d^alpha, 0 < alpha <= 1.
MetricSpace snowflake(const MetricSpace& x, double alpha);

/// Euclidean distances between the rows of `coords`.
template <typename Derived>
Eigen::MatrixXd euclidean_distances(const Eigen::MatrixBase<Derived>& coords) {
    const Index n = coords.rows();
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j)
            d(i, j) = d(j, i) = (coords.row(i) - coords.row(j)).norm();
    return d;
}

}  // namespace metdich
