#include "metdich/tree_point.hpp"

#include <stdexcept>

namespace metdich {

TreePoint::TreePoint(std::string bits) : bits_(std::move(bits)) {
    for (char c : bits_)
        if (c != '0' && c != '1') throw std::invalid_argument("tree point: bits must be 0/1");
}

TreePoint TreePoint::from_label(const std::string& label) {
    if (label == "e") return TreePoint();
    return TreePoint(label);
}

bool TreePoint::is_ancestor_of(const TreePoint& other) const {
    return depth() <= other.depth() && other.bits_.compare(0, bits_.size(), bits_) == 0;
}

TreePoint lca(const TreePoint& x, const TreePoint& y) {
    std::size_t k = 0;
    const auto& a = x.bits();
    const auto& b = y.bits();
    while (k < a.size() && k < b.size() && a[k] == b[k]) ++k;
    return TreePoint(a.substr(0, k));
}

int tree_distance(const TreePoint& x, const TreePoint& y) {
    return x.depth() + y.depth() - 2 * lca(x, y).depth();
}

Index bfs_index(const TreePoint& p) {
    Index value = 0;
    for (char c : p.bits()) value = 2 * value + (c == '1');
    return ((Index{1} << p.depth()) - 1) + value;
}

std::vector<TreePoint> tree_points(int depth) {
    std::vector<TreePoint> out;
    out.reserve((std::size_t{1} << (depth + 1)) - 1);
    out.emplace_back();
    for (std::size_t i = 0; out.size() < (std::size_t{1} << (depth + 1)) - 1; ++i) {
        out.push_back(out[i].child(0));
        out.push_back(out[i].child(1));
    }
    return out;
}

}  // namespace metdich
