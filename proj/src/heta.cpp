#include "metdich/generators.hpp"
#include "metdich/trees.hpp"

#include <cmath>

namespace metdich {

double d_eta(const TreePoint& x, const TreePoint& y, double eta) {
    const int hx = std::min(x.depth(), y.depth());
    const int hy = std::max(x.depth(), y.depth());
    const int hl = lca(x, y).depth();
    return double(hy - hx) + 2.0 * double(hx - hl) * eta;
}

HEtaHost heta_host(int depth, double eta) {
    if (depth < 0 || depth > 11) throw std::invalid_argument("heta_host: depth must lie in [0,11]");
    if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("heta_host: eta must lie in (0,1]");
    HEtaHost host;
    host.depth = depth;
    host.eta = eta;
    host.points = tree_points(depth);
    const auto n = static_cast<Index>(host.points.size());
    Eigen::MatrixXd d(n, n);
    std::vector<std::string> labels;
    for (Index i = 0; i < n; ++i) {
        labels.push_back(host.points[i].label());
        for (Index j = 0; j < n; ++j) d(i, j) = d_eta(host.points[i], host.points[j], eta);
    }
    host.space = MetricSpace::trusted(std::move(d), std::move(labels));
    return host;
}

double identity_distortion_heta(int depth, double eta) {
    if (depth < 1) throw std::invalid_argument("identity_distortion_heta: depth must be >= 1");
    const auto tree = binary_tree(depth);
    const auto host = heta_host(depth, eta);
    std::vector<Index> id(static_cast<std::size_t>(tree.size()));
    for (std::size_t i = 0; i < id.size(); ++i) id[i] = static_cast<Index>(i);
    return distortion(Embedding(tree, host.space, std::move(id)));
}

}  // namespace metdich
