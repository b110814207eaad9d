#include "metdich/parallel.hpp"
#include "metdich/trees.hpp"

#include <algorithm>
#include <cmath>

namespace metdich {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct RootResult {
    double best = kInf;
    std::vector<Index> map;
    double abandoned = kInf;
    double explored = 0.0;
    std::uint64_t nodes = 0;
};

class FaithfulSearch {
public:
    FaithfulSearch(int tree_depth, const HEtaHost& host, double delta, double incumbent, std::uint64_t max_nodes)
        : pts_(tree_points(tree_depth)),
          m_(static_cast<Index>(pts_.size())),
          host_(host.space.distances()),
          size_(host.space.size()),
          stretch_(1.0 + delta),
          max_nodes_(max_nodes) {
        tree_.resize(m_, m_);
        ancestor_.assign(static_cast<std::size_t>(m_ * m_), false);
        for (Index a = 0; a < m_; ++a)
            for (Index b = 0; b < m_; ++b) {
                tree_(a, b) = double(tree_distance(pts_[a], pts_[b]));
                ancestor_[static_cast<std::size_t>(a * m_ + b)] = a != b && pts_[a].is_ancestor_of(pts_[b]);
            }
        // Placed predecessors of each node, ancestors first so faithfulness fails early.
        order_.resize(static_cast<std::size_t>(m_));
        for (Index b = 0; b < m_; ++b) {
            for (Index a = 0; a < b; ++a)
                if (is_ancestor(a, b)) order_[b].push_back(a);
            for (Index a = 0; a < b; ++a)
                if (!is_ancestor(a, b)) order_[b].push_back(a);
        }
        result_.best = incumbent;
        f_.assign(static_cast<std::size_t>(m_), -1);
        used_.assign(static_cast<std::size_t>(size_), false);
    }

    RootResult run(Index root) {
        f_[0] = root;
        used_[root] = true;
        if (m_ == 1) {
            result_.best = 1.0;
            result_.map = f_;
            result_.explored = 1.0;
            return result_;
        }
        descend(1, 0.0, kInf, 0.0, 1.0);
        return result_;
    }

private:
    struct Candidate {
        Index point;
        double lo, hi, inv;
    };

    bool is_ancestor(Index a, Index b) const { return ancestor_[static_cast<std::size_t>(a * m_ + b)]; }

    bool bounded(double lo, double hi, double inv) const {
        return lo <= hi * (1.0 + 1e-12) && lo * inv < result_.best * (1.0 - 1e-9);
    }

    void descend(Index pos, double lo, double hi, double inv, double weight) {
        ++result_.nodes;
        if (result_.nodes > max_nodes_) {
            result_.abandoned = std::min(result_.abandoned, lo * inv);
            return;
        }
        if (pos == m_) {
            result_.explored += weight;
            const double value = lo * inv;
            if (value < result_.best) {
                result_.best = value;
                result_.map = f_;
            }
            return;
        }
        // f(left child) < f(right child)
        const Index first = (pos % 2 == 0) ? f_[pos - 1] + 1 : 0;
        std::vector<Candidate> cands;
        Index open = 0;
        for (Index u = first; u < size_; ++u) {
            if (used_[u]) continue;
            ++open;
            double nlo = lo, nhi = hi, ninv = inv;
            bool ok = true;
            for (Index a : order_[pos]) {
                const double r = host_(f_[a], u) / tree_(a, pos);
                nlo = std::max(nlo, r);
                ninv = std::max(ninv, 1.0 / r);
                if (is_ancestor(a, pos)) nhi = std::min(nhi, stretch_ * r);
                if (!bounded(nlo, nhi, ninv)) {
                    ok = false;
                    break;
                }
            }
            if (ok) cands.push_back({u, nlo, nhi, ninv});
        }
        if (open == 0) {
            result_.explored += weight;
            return;
        }
        const double share = weight / double(open);
        result_.explored += share * double(open - static_cast<Index>(cands.size()));
        std::stable_sort(cands.begin(), cands.end(),
                         [](const Candidate& a, const Candidate& b) { return a.lo * a.inv < b.lo * b.inv; });
        for (const auto& c : cands) {
            if (!bounded(c.lo, c.hi, c.inv)) {
                result_.explored += share;
                continue;
            }
            f_[pos] = c.point;
            used_[c.point] = true;
            descend(pos + 1, c.lo, c.hi, c.inv, share);
            used_[c.point] = false;
            f_[pos] = -1;
        }
    }

    std::vector<TreePoint> pts_;
    Index m_;
    const Eigen::MatrixXd& host_;
    Index size_;
    double stretch_;
    std::uint64_t max_nodes_;
    Eigen::MatrixXd tree_;
    std::vector<bool> ancestor_;
    std::vector<std::vector<Index>> order_;
    std::vector<Index> f_;
    std::vector<bool> used_;
    RootResult result_;
};

std::vector<ForkCensusEntry> census_of(const std::vector<Index>& f, const HEtaHost& host) {
    std::vector<ForkCensusEntry> out;
    const auto m = static_cast<Index>(f.size());
    for (Index v = 1; 2 * v + 2 < m; ++v) {
        const Index nb[3] = {(v - 1) / 2, 2 * v + 1, 2 * v + 2};
        for (int h = 0; h < 3; ++h) {
            Index z = f[nb[(h + 1) % 3]], w = f[nb[(h + 2) % 3]];
            if (z > w) std::swap(z, w);
            ForkCensusEntry e;
            e.fork = {f[nb[h]], f[v], z, w, fork_delta(host.space, f[nb[h]], f[v], z, w)};
            e.type = classify_fork_heta(e.fork, host, e.fork.delta);
            e.tip_contraction = fork_tip_contraction(e.fork, host.space);
            out.push_back(e);
        }
    }
    return out;
}

}  // namespace

TreeSearchReport search_tree_nonembed(int tree_depth, const HEtaHost& host, double delta, TreeSearchBudget budget) {
    if (tree_depth < 0 || tree_depth > 5) throw std::invalid_argument("tree search: depth must lie in [0,5]");
    if (!(delta >= 0.0)) throw std::invalid_argument("tree search: delta must be >= 0");
    const Index m = (Index{2} << tree_depth) - 1;
    if (m > host.space.size()) throw std::invalid_argument("tree search: host smaller than the tree");

    double incumbent = kInf;
    std::vector<Index> identity;
    if (host.depth >= tree_depth) {
        for (Index i = 0; i < m; ++i) identity.push_back(i);
        incumbent = tree_depth == 0 ? 1.0 : 1.0 / host.eta;
    }

    const auto roots = static_cast<std::size_t>(host.depth + 1);
    const std::uint64_t share = std::max<std::uint64_t>(1, budget.max_nodes / roots);
    auto results = parallel_map(roots, [&](std::size_t d) {
        FaithfulSearch search(tree_depth, host, delta, incumbent, share);
        return search.run((Index{1} << d) - 1);
    });

    TreeSearchReport report;
    report.min_found = incumbent;
    report.best = identity;
    double abandoned = kInf;
    for (auto& r : results) {
        if (r.best < report.min_found && !r.map.empty()) {
            report.min_found = r.best;
            report.best = r.map;
        }
        abandoned = std::min(abandoned, r.abandoned);
        report.explored_fraction += r.explored / double(roots);
        report.nodes += r.nodes;
    }
    report.complete = !std::isfinite(abandoned);
    if (report.complete) report.explored_fraction = 1.0;
    report.lower_bound = std::max(1.0, std::min(report.min_found, abandoned));
    if (!report.best.empty()) report.census = census_of(report.best, host);
    return report;
}

TreeSearchReport search_b4_nonembed(const HEtaHost& host, double delta, TreeSearchBudget budget) {
    if (host.depth < 6) throw std::invalid_argument("search_b4_nonembed: host depth must be >= 6");
    return search_tree_nonembed(4, host, delta, budget);
}

}  // namespace metdich
