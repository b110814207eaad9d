#include "metdich/invariants.hpp"

#include <deque>

namespace metdich {

double psi_ratio(const MetricSpace& h, std::span<const Index> walk) {
    if (walk.size() < 2) throw std::invalid_argument("psi_ratio: walk needs n >= 1 steps");
    const auto n = static_cast<double>(walk.size() - 1);
    double step = 0.0;
    for (std::size_t i = 0; i + 1 < walk.size(); ++i) step = std::max(step, h(walk[i], walk[i + 1]));
    if (step == 0.0) return 0.0;
    return h(walk.front(), walk.back()) / (n * step);
}

InvariantValue psi_constant(const MetricSpace& h, int n) {
    if (h.size() < 2) throw std::invalid_argument("psi_constant: host needs two points");
    if (n < 1) throw std::invalid_argument("psi_constant: n must be >= 1");
    const Index size = h.size();

    std::vector<double> thresholds;
    for (Index i = 0; i < size; ++i)
        for (Index j = i + 1; j < size; ++j) thresholds.push_back(h(i, j));
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

    double best = -1.0;
    Index best_u = 0, best_v = 0;
    double best_t = 0.0;
    std::vector<int> hops(static_cast<std::size_t>(size));
    std::deque<Index> queue;
    for (double t : thresholds) {
        for (Index u = 0; u < size; ++u) {
            std::fill(hops.begin(), hops.end(), -1);
            hops[u] = 0;
            queue.assign(1, u);
            while (!queue.empty()) {
                const Index a = queue.front();
                queue.pop_front();
                if (hops[a] == n) continue;
                for (Index b = 0; b < size; ++b)
                    if (hops[b] < 0 && h(a, b) <= t) {
                        hops[b] = hops[a] + 1;
                        queue.push_back(b);
                    }
            }
            for (Index v = 0; v < size; ++v) {
                if (hops[v] < 0) continue;
                const double r = h(u, v) / (n * t);
                if (r > best) {
                    best = r;
                    best_u = u;
                    best_v = v;
                    best_t = t;
                }
            }
        }
    }

    // Rebuild a shortest hop walk u -> v under the winning threshold.
    std::vector<Index> parent(static_cast<std::size_t>(size), -1);
    std::vector<bool> seen(static_cast<std::size_t>(size), false);
    seen[best_u] = true;
    queue.assign(1, best_u);
    while (!queue.empty()) {
        const Index a = queue.front();
        queue.pop_front();
        for (Index b = 0; b < size; ++b)
            if (!seen[b] && h(a, b) <= best_t) {
                seen[b] = true;
                parent[b] = a;
                queue.push_back(b);
            }
    }
    std::vector<Index> walk;
    for (Index a = best_v; a != -1; a = parent[a]) walk.push_back(a);
    std::reverse(walk.begin(), walk.end());
    walk.resize(static_cast<std::size_t>(n) + 1, best_v);

    InvariantValue out;
    out.kind = InvariantKind::psi;
    out.n = n;
    out.value = best;
    out.witness = std::move(walk);
    out.exact = true;
    return out;
}

}  // namespace metdich
