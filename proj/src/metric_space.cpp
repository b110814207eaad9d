#include "metdich/metric_space.hpp"

#include <sstream>

namespace metdich {

const char* to_string(MetricViolation v) {
    switch (v) {
        case MetricViolation::shape: return "shape";
        case MetricViolation::nonfinite: return "nonfinite";
        case MetricViolation::negative: return "negative";
        case MetricViolation::nonzero_diagonal: return "nonzero diagonal";
        case MetricViolation::asymmetry: return "asymmetry";
        case MetricViolation::zero_off_diagonal: return "zero off-diagonal";
        case MetricViolation::triangle: return "triangle";
    }
    return "unknown";
}

namespace detail {

void throw_violation(MetricViolation kind, Index i, Index j, Index k) {
    std::ostringstream msg;
    msg << "metric axiom violated: " << to_string(kind);
    if (kind == MetricViolation::triangle)
        msg << " at (" << i << "," << j << "," << k << "): d(" << i << "," << k << ") > d(" << i << "," << j
            << ") + d(" << j << "," << k << ")";
    else if (i >= 0)
        msg << " at (" << i << "," << j << ")";
    throw MetricError(kind, i, j, k, msg.str());
}

}  // namespace detail

std::vector<std::string> index_labels(Index n) {
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    return labels;
}

MetricSpace snowflake(const MetricSpace& x, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("snowflake: alpha must lie in (0,1]");
    if (alpha == 1.0) return x;
    Eigen::MatrixXd d = x.distances().array().pow(alpha).matrix();
    return validate_metric(d, x.labels());
}

}  // namespace metdich
