#include "metdich/invariants.hpp"

#include <cmath>

namespace metdich {

double VectorFamily::norm(const Eigen::Ref<const Eigen::VectorXd>& v) const {
    const double r = norm_exponent;
    if (std::isinf(r)) return v.cwiseAbs().maxCoeff();
    if (r == 1.0) return v.cwiseAbs().sum();
    if (r == 2.0) return v.norm();
    return std::pow(v.cwiseAbs().array().pow(r).sum(), 1.0 / r);
}

double rademacher_average(const VectorFamily& fam) {
    const Index n = fam.count();
    if (n < 1 || fam.vectors.rows() < 1) throw std::invalid_argument("vector family must be non-empty");
    if (n > 20) throw std::invalid_argument("vector family: at most 20 vectors");
    // |-v| = |v|, so fixing eps_1 = +1 halves the work. Signs walk a Gray code;
    // the running sum is rebuilt every 64 steps to bound drift.
    const std::uint64_t patterns = std::uint64_t{1} << (n - 1);
    std::vector<int> eps(static_cast<std::size_t>(n), 1);
    Eigen::VectorXd sum = fam.vectors.rowwise().sum();
    double total = 0.0;
    for (std::uint64_t g = 0; g < patterns; ++g) {
        if (g > 0) {
            const int bit = __builtin_ctzll(g);
            const Index j = bit + 1;
            eps[j] = -eps[j];
            if (g % 64 == 0) {
                sum.setZero();
                for (Index k = 0; k < n; ++k) sum += eps[k] * fam.vectors.col(k);
            } else {
                sum += 2.0 * eps[j] * fam.vectors.col(j);
            }
        }
        const double v = fam.norm(sum);
        total += v * v;
    }
    return total / double(patterns);
}

namespace {

double norm_square_sum(const VectorFamily& fam) {
    double s = 0.0;
    for (Index j = 0; j < fam.count(); ++j) {
        const double v = fam.norm(fam.vectors.col(j));
        s += v * v;
    }
    return s;
}

}  // namespace

double en_type_ratio(const VectorFamily& fam, double p) {
    if (!(p >= 1.0 && p <= 2.0)) throw std::invalid_argument("en_type_ratio: p must lie in [1,2]");
    const double norms = norm_square_sum(fam);
    if (norms == 0.0) throw std::invalid_argument("en_type_ratio: all-zero family");
    const double n = double(fam.count());
    return std::sqrt(rademacher_average(fam) / (std::pow(n, 2.0 / p - 1.0) * norms));
}

double en_cotype_ratio(const VectorFamily& fam, double q) {
    if (!(q >= 2.0)) throw std::invalid_argument("en_cotype_ratio: q must be >= 2");
    const double norms = norm_square_sum(fam);
    if (norms == 0.0) throw std::invalid_argument("en_cotype_ratio: all-zero family");
    const double avg = rademacher_average(fam);
    if (avg == 0.0) return std::numeric_limits<double>::infinity();
    const double n = double(fam.count());
    return std::sqrt(norms / (std::pow(n, 1.0 - 2.0 / q) * avg));
}

}  // namespace metdich
