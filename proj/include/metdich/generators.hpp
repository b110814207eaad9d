#pragma once

#include "metdich/metric_space.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace metdich {

/// Dense matrices beyond this many points are refused by every generator.
inline constexpr Index kMaxGeneratedPoints = 4096;

/// {0,...,n} with |i - j|.
MetricSpace path(int n);
/// {0,1}^n with Hamming distance. Label character i is coordinate i+1, and
/// point index x carries coordinate i+1 in bit i.
MetricSpace hamming_cube(int n);
/// {1,...,m}^n with the max-coordinate distance.
MetricSpace linf_grid(int n, int m);
/// Z_m^n with the cyclic max-coordinate distance (graph metric of the
/// {0,+-1}^n steps). Point index is mixed radix, coordinate 1 least significant.
MetricSpace torus(int n, int m);
/// Binary strings of length <= n with the tree distance, breadth-first order.
MetricSpace binary_tree(int n);
/// Binary strings of length exactly `depth` with rho(x,y) = 2^{-|lcp(x,y)|}.
MetricSpace ultrametric_host(int depth);
/// path(n) with every distance raised to alpha.
MetricSpace snowflake_line(int n, double alpha);

enum class FamilyKind { path, cube, linf_grid, torus_index, binary_tree, ultrametric_host, snowflake_line };

const char* to_string(FamilyKind k);
FamilyKind family_kind_from_string(std::string_view s);

struct FamilySpec {
    FamilyKind kind = FamilyKind::path;
    int n = 1;
    int m = 2;
    int depth = 1;
    double alpha = 1.0;

    MetricSpace generate() const;
    /// {"kind": ..., "n": ..., "m": ..., "depth": ..., "alpha": ...}
    std::string to_json() const;
    static FamilySpec from_json(std::string_view text);
};

/// Decodes a torus/grid point index into coordinates (0-based, coordinate 1 first).
std::vector<int> torus_coordinates(Index index, int n, int m);
Index torus_index(const std::vector<int>& coords, int m);

}  // namespace metdich
