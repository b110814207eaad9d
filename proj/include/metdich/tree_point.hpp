#pragma once

#include "metdich/metric_space.hpp"

#include <string>
#include <vector>

namespace metdich {

/// A node of the infinite binary tree, addressed by its bit string from the
/// root. Depth is the string length; the lowest common ancestor of two nodes
/// is their longest common prefix.
class TreePoint {
public:
    TreePoint() = default;
    explicit TreePoint(std::string bits);

    /// "e" denotes the root; any other label must be a string over {0,1}.
    static TreePoint from_label(const std::string& label);
    std::string label() const { return bits_.empty() ? std::string("e") : bits_; }

    const std::string& bits() const noexcept { return bits_; }
    int depth() const noexcept { return static_cast<int>(bits_.size()); }

    /// Ancestor-or-self.
    bool is_ancestor_of(const TreePoint& other) const;
    bool is_strict_ancestor_of(const TreePoint& other) const {
        return depth() < other.depth() && is_ancestor_of(other);
    }
    bool comparable(const TreePoint& other) const {
        return is_ancestor_of(other) || other.is_ancestor_of(*this);
    }

    TreePoint child(int bit) const { return TreePoint(bits_ + (bit ? '1' : '0')); }
    TreePoint ancestor_at(int depth) const { return TreePoint(bits_.substr(0, static_cast<std::size_t>(depth))); }

    friend bool operator==(const TreePoint&, const TreePoint&) = default;

private:
    std::string bits_;
};

TreePoint lca(const TreePoint& x, const TreePoint& y);
/// |x| + |y| - 2|lcp(x,y)|
int tree_distance(const TreePoint& x, const TreePoint& y);

/// Breadth-first position of `p` among all strings (root = 0, then "0", "1", "00", ...).
Index bfs_index(const TreePoint& p);
/// All strings of length <= depth, in breadth-first order.
std::vector<TreePoint> tree_points(int depth);

}  // namespace metdich
