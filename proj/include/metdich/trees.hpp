#pragma once

#include "metdich/distortion.hpp"
#include "metdich/metric_space.hpp"
#include "metdich/tree_point.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace metdich {

// ---------------------------------------------------------------------------
// The contracted tree metric

/// With h(y) >= h(x): (h(y) - h(x)) + 2 eta (h(x) - h(lca(x,y))).
double d_eta(const TreePoint& x, const TreePoint& y, double eta);

/// All tree points of depth <= depth under d_eta, in the order and with the
/// labels of binary_tree(depth).
struct HEtaHost {
    int depth = 0;
    double eta = 1.0;
    std::vector<TreePoint> points;
    MetricSpace space;
};

HEtaHost heta_host(int depth, double eta);

/// Distortion of the identity from binary_tree(depth) onto heta_host(depth, eta).
double identity_distortion_heta(int depth, double eta);

// ---------------------------------------------------------------------------
// Forks

enum class ForkType { contract_A, contract_B, I, II, III, IV, unclassified, degenerate };

const char* to_string(ForkType t);

/// Version tag of the fork and path predicate tables below.
inline constexpr const char* kPredicateTableVersion = "fork-table-v1";

/// (x, y, z, w): handle x, forking point y, prongs z and w. `delta` is the
/// least delta for which the quadruple is a delta-fork.
struct Fork {
    Index x = 0, y = 0, z = 0, w = 0;
    double delta = 0.0;
    bool degenerate() const { return z == w; }
};

/// Least delta making (x,y,z,w) a delta-fork: every ratio d(y,p)/s and
/// d(x,p)/(2s), s = d(x,y), p in {z,w}, lies in [1/(1+delta), 1+delta].
/// +inf when some ratio is 0.
double fork_delta(const MetricSpace& h, Index x, Index y, Index z, Index w);

/// All delta-forks with z < w (z == w too when distinct_prongs is false), in
/// lexicographic (x, y, z, w) order.
std::vector<Fork> find_delta_forks(const MetricSpace& h, double delta, bool distinct_prongs = true);

/// d(z,w) / d(x,y); 0 for degenerate forks.
double fork_tip_contraction(const Fork& f, const MetricSpace& h);

/// Predicate table, first match wins (x << y means x is a strict ancestor of y):
///   degenerate  z == w
///   contract-A  x << y and y is an ancestor of z and w
///   contract-B  x << y, z and w below x and deeper than y, not both below y
///   I           x << y otherwise
///   II          y << x and h(z), h(w) <= h(y)
///   IV          y << x otherwise
///   III         x, y incomparable
/// Throws if the quadruple is not a delta-fork of the host.
ForkType classify_fork_heta(const Fork& f, const HEtaHost& host, double delta);

enum class PathType { A, B, C, other };

const char* to_string(PathType t);

/// Four-point paths x0 x1 x2 x3:
///   A      monotone vertical chain (x0 << x1 << x2 << x3 or the reverse)
///   B      x1 ancestor of x0, x3 ancestor of x2, h(x1) = h(x2), or the reverse
///   C      one horizontal step at an end, the other two vertical in one direction
///   other  anything else
/// Throws on repeated points.
PathType classify_path4_heta(const TreePoint& x0, const TreePoint& x1, const TreePoint& x2, const TreePoint& x3);

// ---------------------------------------------------------------------------
// Vertical faithfulness

/// Depth n with binary_tree(n) labels and distances; throws otherwise.
int tree_depth_of(const MetricSpace& domain);

/// max over ancestor pairs of d_tree / d_host after rescaling so that
/// ||f||_Lip = 1. +inf if some ancestor pair collapses or f is constant.
double vertical_faithfulness(const Embedding& e);

struct SubtreeOptions {
    bool distinct_images = true;   ///< skip copies whose image repeats a point
    std::uint64_t max_copies = 10'000'000;
};

/// Searches level-uniform copies of B_t in the domain tree: a root at depth r,
/// spacing k >= 1 with r + t k <= n, and each copy node's two children chosen
/// k levels down in its left and right subtree respectively. Copies are
/// visited by k, then root, then child choices; the first copy whose image is
/// (1+delta)-vertically faithful is returned as domain indices in B_t's
/// breadth-first order. Throws std::length_error once more than max_copies
/// copies have been inspected.
std::optional<std::vector<Index>> find_faithful_subtree(const Embedding& e, int t, double delta,
                                                        SubtreeOptions options = {});

// ---------------------------------------------------------------------------
// Non-embeddability search

struct TreeSearchBudget {
    std::uint64_t max_nodes = 200'000'000;
};

struct ForkCensusEntry {
    Fork fork;  ///< host indices; delta is the fork's own least delta
    ForkType type = ForkType::unclassified;
    double tip_contraction = 0.0;
};

struct TreeSearchReport {
    double min_found = std::numeric_limits<double>::infinity();
    double lower_bound = 1.0;  ///< certified min over the whole space
    std::vector<Index> best;   ///< domain (breadth-first) -> host index
    double explored_fraction = 0.0;
    bool complete = false;
    std::uint64_t nodes = 0;
    std::vector<ForkCensusEntry> census;
};

/// Least distortion of a (1+delta)-vertically faithful injection of
/// binary_tree(tree_depth) into the host, by branch and bound.
///
/// Nodes are placed in breadth-first order, candidates in host index order.
/// The root is placed on the leftmost branch (one branch per host depth, all
/// others are images under host automorphisms) and f(left child) < f(right
/// child) removes the domain's automorphisms. A partial map is pruned when
/// its Lipschitz lower bound exceeds the faithfulness ceiling, or when
/// (max expansion) x (max contraction) over placed pairs reaches the
/// incumbent. The identity seeds the incumbent when it fits. Root choices run
/// in parallel, each with an equal share of the node budget.
///
/// The census lists, for every domain node with three neighbours and each
/// choice of handle among them, the image fork at its own least delta.
TreeSearchReport search_tree_nonembed(int tree_depth, const HEtaHost& host, double delta,
                                      TreeSearchBudget budget = {});

/// search_tree_nonembed for B_4; the host must have depth >= 6.
TreeSearchReport search_b4_nonembed(const HEtaHost& host, double delta, TreeSearchBudget budget = {});

}  // namespace metdich
