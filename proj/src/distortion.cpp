#include "metdich/distortion.hpp"

#include <numeric>

namespace metdich {

Embedding::Embedding(const MetricSpace& domain, const MetricSpace& host, std::vector<Index> assignment)
    : domain_(&domain), host_(&host), assignment_(std::move(assignment)) {
    if (static_cast<Index>(assignment_.size()) != domain.size())
        throw std::invalid_argument("embedding: assignment must cover the domain");
    for (Index a : assignment_)
        if (a < 0 || a >= host.size()) throw std::invalid_argument("embedding: host index out of range");
}

Eigen::MatrixXd Embedding::pulled_back() const {
    const Index n = domain_->size();
    Eigen::MatrixXd d(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) d(i, j) = (*host_)(assignment_[i], assignment_[j]);
    return d;
}

bool Embedding::injective() const {
    std::vector<Index> sorted = assignment_;
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

bool Embedding::constant() const {
    return std::all_of(assignment_.begin(), assignment_.end(),
                       [&](Index a) { return a == assignment_.front(); });
}

double lipschitz_norm(const Embedding& e) {
    if (e.domain().size() < 2) throw std::invalid_argument("lipschitz_norm: domain needs two points");
    return lipschitz_norm(e.domain().distances(), e.pulled_back());
}

double inverse_lipschitz_norm(const Embedding& e) {
    if (e.domain().size() < 2) throw std::invalid_argument("lipschitz_norm: domain needs two points");
    if (!e.injective()) return std::numeric_limits<double>::infinity();
    return lipschitz_norm(e.pulled_back(), e.domain().distances());
}

double distortion(const Embedding& e) {
    if (e.domain().size() < 2) return 1.0;
    if (!e.injective()) throw std::invalid_argument("distortion: map is not injective");
    return distortion(e.domain().distances(), e.pulled_back());
}

const char* to_string(Certificate c) {
    switch (c) {
        case Certificate::exhaustive: return "exhaustive";
        case Certificate::partial_search: return "partial-search";
        case Certificate::functional: return "functional";
        case Certificate::semidefinite_dual: return "semidefinite-dual";
    }
    return "unknown";
}

namespace {

class InjectionSearch {
public:
    InjectionSearch(const MetricSpace& x, const MetricSpace& h, SearchBudget budget)
        : x_(x), h_(h), budget_(budget) {
        const Index n = x.size();
        order_.resize(static_cast<std::size_t>(n));
        std::iota(order_.begin(), order_.end(), Index{0});
        Eigen::VectorXd sums = x.distances().rowwise().sum();
        std::stable_sort(order_.begin(), order_.end(), [&](Index a, Index b) { return sums(a) > sums(b); });

        // Twins are interchangeable: swapping them is an isometry of H.
        const Index m = h.size();
        twin_prev_.assign(static_cast<std::size_t>(m), -1);
        for (Index u = 0; u < m; ++u) {
            for (Index v = u - 1; v >= 0; --v) {
                bool twins = true;
                for (Index w = 0; w < m && twins; ++w)
                    if (w != u && w != v && std::abs(h(u, w) - h(v, w)) > kAxiomTolerance * (1 + h(u, w)))
                        twins = false;
                if (twins) {
                    twin_prev_[u] = v;
                    break;
                }
            }
        }
        used_.assign(static_cast<std::size_t>(m), false);
        image_.assign(static_cast<std::size_t>(n), -1);
    }

    DistortionReport run() {
        DistortionReport report;
        const Index n = x_.size();
        if (n <= 1) {
            report.lower = report.upper = 1.0;
            if (n == 1) report.witness = {0};
            report.complete = true;
            return report;
        }
        recurse(0, 0.0, 0.0);
        report.nodes = nodes_;
        report.complete = !exhausted_;
        report.upper = best_;
        if (best_ < std::numeric_limits<double>::infinity()) {
            report.witness.assign(static_cast<std::size_t>(n), -1);
            for (Index q = 0; q < n; ++q) report.witness[order_[q]] = best_image_[q];
        }
        if (report.complete) {
            report.lower = best_;
            report.certificate = Certificate::exhaustive;
        } else {
            report.lower = std::max(1.0, std::min(best_, abandoned_lower_));
            report.certificate = Certificate::partial_search;
        }
        return report;
    }

private:
    void recurse(Index pos, double fwd, double inv) {
        const Index n = x_.size();
        if (pos == n) {
            const double value = fwd * inv;
            if (value < best_) {
                best_ = value;
                best_image_ = image_;
            }
            return;
        }
        const Index v = order_[pos];
        for (Index u = 0; u < h_.size(); ++u) {
            if (used_[u]) continue;
            if (twin_prev_[u] >= 0 && !used_[twin_prev_[u]]) continue;
            double nf = fwd, ni = inv;
            for (Index q = 0; q < pos; ++q) {
                const double dx = x_(order_[q], v);
                const double dh = h_(image_[q], u);
                nf = std::max(nf, dh / dx);
                ni = std::max(ni, dx / dh);
            }
            const double bound = pos == 0 ? 1.0 : nf * ni;
            if (bound >= best_ * (1.0 - kSearchTolerance)) continue;
            if (exhausted_ || ++nodes_ > budget_.max_nodes) {
                exhausted_ = true;
                abandoned_lower_ = std::min(abandoned_lower_, bound);
                continue;
            }
            used_[u] = true;
            image_[pos] = u;
            recurse(pos + 1, nf, ni);
            used_[u] = false;
        }
    }

    const MetricSpace& x_;
    const MetricSpace& h_;
    SearchBudget budget_;
    std::vector<Index> order_;
    std::vector<Index> twin_prev_;
    std::vector<bool> used_;
    std::vector<Index> image_;
    std::vector<Index> best_image_;
    double best_ = std::numeric_limits<double>::infinity();
    double abandoned_lower_ = std::numeric_limits<double>::infinity();
    std::uint64_t nodes_ = 0;
    bool exhausted_ = false;
};

}  // namespace

DistortionReport min_distortion_exact(const MetricSpace& x, const MetricSpace& h, SearchBudget budget) {
    if (x.size() > h.size()) throw std::invalid_argument("min_distortion_exact: no injection, |X| > |H|");
    return InjectionSearch(x, h, budget).run();
}

}  // namespace metdich
