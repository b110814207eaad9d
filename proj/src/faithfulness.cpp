#include "metdich/trees.hpp"

#include <cmath>
#include <stdexcept>

namespace metdich {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// A_f restricted to `nodes`, a copy of B_t listed breadth-first like `pts`,
// with the copy's own tree metric scaled by `spacing`.
double copy_faithfulness(const Embedding& e, std::span<const Index> nodes, const std::vector<TreePoint>& pts,
                         int spacing) {
    const auto& host = e.host();
    const auto m = static_cast<Index>(nodes.size());
    double lip = 0.0, vertical = 0.0;
    for (Index a = 0; a < m; ++a)
        for (Index b = a + 1; b < m; ++b) {
            const double dt = double(spacing * tree_distance(pts[a], pts[b]));
            const double dh = host(e[nodes[a]], e[nodes[b]]);
            lip = std::max(lip, dh / dt);
            if (pts[a].is_ancestor_of(pts[b])) {
                if (dh == 0.0) return kInf;
                vertical = std::max(vertical, dt / dh);
            }
        }
    if (lip == 0.0) return m == 1 ? 1.0 : kInf;
    return m == 1 ? 1.0 : lip * vertical;
}

}  // namespace

int tree_depth_of(const MetricSpace& domain) {
    const Index size = domain.size();
    int n = 0;
    while ((Index{2} << n) - 1 < size) ++n;
    if ((Index{2} << n) - 1 != size) throw std::invalid_argument("domain is not a complete binary tree");
    const auto pts = tree_points(n);
    for (Index i = 0; i < size; ++i) {
        if (domain.label(i) != pts[i].label()) throw std::invalid_argument("domain is not a complete binary tree");
        for (Index j = i + 1; j < size; ++j)
            if (domain(i, j) != double(tree_distance(pts[i], pts[j])))
                throw std::invalid_argument("domain is not a complete binary tree");
    }
    return n;
}

double vertical_faithfulness(const Embedding& e) {
    const auto pts = tree_points(tree_depth_of(e.domain()));
    std::vector<Index> all(pts.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<Index>(i);
    return copy_faithfulness(e, all, pts, 1);
}

std::optional<std::vector<Index>> find_faithful_subtree(const Embedding& e, int t, double delta,
                                                        SubtreeOptions options) {
    const int n = tree_depth_of(e.domain());
    if (t < 0 || t > n) throw std::invalid_argument("find_faithful_subtree: need 0 <= t <= n");
    if (!(delta >= 0.0)) throw std::invalid_argument("find_faithful_subtree: delta must be >= 0");
    const auto domain_pts = tree_points(n);
    if (t == 0) return std::vector<Index>{0};

    const double limit = 1.0 + delta + kSearchTolerance;
    const auto copy_pts = tree_points(t);
    const std::size_t copy_size = copy_pts.size();
    std::uint64_t inspected = 0;
    std::vector<TreePoint> copy(copy_size);
    std::vector<Index> nodes(copy_size);

    for (int k = 1; k * t <= n; ++k) {
        const std::size_t tail = std::size_t{1} << (k - 1);  // choices per child
        for (Index root = 0; root < static_cast<Index>(domain_pts.size()); ++root) {
            if (domain_pts[root].depth() + t * k > n) continue;
            copy[0] = domain_pts[root];
            // Odometer over the (copy_size - 1) child choices, each in [0, tail).
            std::vector<std::size_t> choice(copy_size, 0);
            while (true) {
                for (std::size_t c = 1; c < copy_size; ++c) {
                    const int bit = (c % 2 == 0) ? 1 : 0;
                    std::string bits = copy[(c - 1) / 2].bits();
                    bits.push_back(bit ? '1' : '0');
                    for (int b = k - 2; b >= 0; --b) bits.push_back((choice[c] >> b) & 1 ? '1' : '0');
                    copy[c] = TreePoint(std::move(bits));
                }
                if (++inspected > options.max_copies)
                    throw std::length_error("find_faithful_subtree: copy enumeration cap exceeded");
                bool distinct = true;
                for (std::size_t c = 0; c < copy_size; ++c) nodes[c] = bfs_index(copy[c]);
                if (options.distinct_images)
                    for (std::size_t a = 0; a < copy_size && distinct; ++a)
                        for (std::size_t b = a + 1; b < copy_size; ++b)
                            if (e[nodes[a]] == e[nodes[b]]) {
                                distinct = false;
                                break;
                            }
                if (distinct && copy_faithfulness(e, nodes, copy_pts, k) <= limit) return nodes;

                std::size_t pos = copy_size - 1;
                while (pos >= 1 && ++choice[pos] == tail) choice[pos--] = 0;
                if (pos < 1) break;
            }
        }
    }
    return std::nullopt;
}

}  // namespace metdich
