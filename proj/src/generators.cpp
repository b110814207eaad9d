#include "metdich/generators.hpp"

#include "metdich/tree_point.hpp"

#include <json.hpp>

#include <cmath>
#include <stdexcept>

namespace metdich {

namespace {

void check_size(double points, const char* what) {
    if (points > static_cast<double>(kMaxGeneratedPoints))
        throw std::invalid_argument(std::string(what) + ": size cap exceeded");
}

std::string coords_label(const std::vector<int>& c, int offset) {
    std::string s;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(c[i] + offset);
    }
    return s;
}

}  // namespace

std::vector<int> torus_coordinates(Index index, int n, int m) {
    std::vector<int> c(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        c[i] = static_cast<int>(index % m);
        index /= m;
    }
    return c;
}

Index torus_index(const std::vector<int>& coords, int m) {
    Index index = 0;
    for (auto it = coords.rbegin(); it != coords.rend(); ++it) index = index * m + (((*it % m) + m) % m);
    return index;
}

MetricSpace path(int n) {
    if (n < 1) throw std::invalid_argument("path: n must be >= 1");
    check_size(n + 1.0, "path");
    Eigen::MatrixXd d(n + 1, n + 1);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) d(i, j) = std::abs(i - j);
    return MetricSpace::trusted(std::move(d), index_labels(n + 1));
}

MetricSpace hamming_cube(int n) {
    if (n < 1 || n > 20) throw std::invalid_argument("hamming_cube: n must lie in [1,20]");
    check_size(std::ldexp(1.0, n), "hamming_cube");
    const Index size = Index{1} << n;
    Eigen::MatrixXd d(size, size);
    std::vector<std::string> labels;
    for (Index x = 0; x < size; ++x) {
        std::string l;
        for (int i = 0; i < n; ++i) l += ((x >> i) & 1) ? '1' : '0';
        labels.push_back(std::move(l));
        for (Index y = 0; y < size; ++y) d(x, y) = __builtin_popcountll(static_cast<unsigned long long>(x ^ y));
    }
    return MetricSpace::trusted(std::move(d), std::move(labels));
}

MetricSpace linf_grid(int n, int m) {
    if (n < 1 || m < 1) throw std::invalid_argument("linf_grid: n and m must be positive");
    if (std::pow(double(m), double(n)) > 1e6) throw std::invalid_argument("linf_grid: m^n exceeds 10^6");
    check_size(std::pow(double(m), double(n)), "linf_grid");
    const Index size = static_cast<Index>(std::llround(std::pow(double(m), double(n))));
    std::vector<std::vector<int>> coords;
    std::vector<std::string> labels;
    for (Index i = 0; i < size; ++i) {
        coords.push_back(torus_coordinates(i, n, m));
        labels.push_back(coords_label(coords.back(), 1));
    }
    Eigen::MatrixXd d(size, size);
    for (Index a = 0; a < size; ++a)
        for (Index b = 0; b < size; ++b) {
            int best = 0;
            for (int i = 0; i < n; ++i) best = std::max(best, std::abs(coords[a][i] - coords[b][i]));
            d(a, b) = best;
        }
    return MetricSpace::trusted(std::move(d), std::move(labels));
}

MetricSpace torus(int n, int m) {
    if (n < 1 || m < 2) throw std::invalid_argument("torus: need n >= 1 and m >= 2");
    check_size(std::pow(double(m), double(n)), "torus");
    const Index size = static_cast<Index>(std::llround(std::pow(double(m), double(n))));
    std::vector<std::vector<int>> coords;
    std::vector<std::string> labels;
    for (Index i = 0; i < size; ++i) {
        coords.push_back(torus_coordinates(i, n, m));
        labels.push_back(coords_label(coords.back(), 0));
    }
    Eigen::MatrixXd d(size, size);
    for (Index a = 0; a < size; ++a)
        for (Index b = 0; b < size; ++b) {
            int best = 0;
            for (int i = 0; i < n; ++i) {
                const int diff = std::abs(coords[a][i] - coords[b][i]);
                best = std::max(best, std::min(diff, m - diff));
            }
            d(a, b) = best;
        }
    return MetricSpace::trusted(std::move(d), std::move(labels));
}

MetricSpace binary_tree(int n) {
    if (n < 0 || n > 16) throw std::invalid_argument("binary_tree: n must lie in [0,16]");
    check_size(std::ldexp(1.0, n + 1) - 1, "binary_tree");
    const auto pts = tree_points(n);
    const auto size = static_cast<Index>(pts.size());
    Eigen::MatrixXd d(size, size);
    std::vector<std::string> labels;
    for (Index a = 0; a < size; ++a) {
        labels.push_back(pts[a].label());
        for (Index b = 0; b < size; ++b) d(a, b) = tree_distance(pts[a], pts[b]);
    }
    return MetricSpace::trusted(std::move(d), std::move(labels));
}

MetricSpace ultrametric_host(int depth) {
    if (depth < 1 || depth > 16) throw std::invalid_argument("ultrametric_host: depth must lie in [1,16]");
    check_size(std::ldexp(1.0, depth), "ultrametric_host");
    const Index size = Index{1} << depth;
    Eigen::MatrixXd d(size, size);
    std::vector<std::string> labels;
    for (Index a = 0; a < size; ++a) {
        std::string l;
        for (int i = depth - 1; i >= 0; --i) l += ((a >> i) & 1) ? '1' : '0';
        labels.push_back(std::move(l));
        for (Index b = 0; b < size; ++b) {
            if (a == b) {
                d(a, b) = 0;
                continue;
            }
            // Leading bit of the XOR marks the first differing position.
            const int lcp = depth - 1 - (63 - __builtin_clzll(static_cast<unsigned long long>(a ^ b)));
            d(a, b) = std::ldexp(1.0, -lcp);
        }
    }
    return MetricSpace::trusted(std::move(d), std::move(labels));
}

MetricSpace snowflake_line(int n, double alpha) { return snowflake(path(n), alpha); }

const char* to_string(FamilyKind k) {
    switch (k) {
        case FamilyKind::path: return "path";
        case FamilyKind::cube: return "cube";
        case FamilyKind::linf_grid: return "linf-grid";
        case FamilyKind::torus_index: return "torus-index";
        case FamilyKind::binary_tree: return "binary-tree";
        case FamilyKind::ultrametric_host: return "ultrametric-host";
        case FamilyKind::snowflake_line: return "snowflake-line";
    }
    return "unknown";
}

FamilyKind family_kind_from_string(std::string_view s) {
    for (auto k : {FamilyKind::path, FamilyKind::cube, FamilyKind::linf_grid, FamilyKind::torus_index,
                   FamilyKind::binary_tree, FamilyKind::ultrametric_host, FamilyKind::snowflake_line})
        if (s == to_string(k)) return k;
    throw std::invalid_argument("unknown family kind '" + std::string(s) + "'");
}

MetricSpace FamilySpec::generate() const {
    switch (kind) {
        case FamilyKind::path: return path(n);
        case FamilyKind::cube: return hamming_cube(n);
        case FamilyKind::linf_grid: return linf_grid(n, m);
        case FamilyKind::torus_index: return torus(n, m);
        case FamilyKind::binary_tree: return binary_tree(n);
        case FamilyKind::ultrametric_host: return ultrametric_host(depth);
        case FamilyKind::snowflake_line: return snowflake_line(n, alpha);
    }
    throw std::logic_error("unreachable");
}

std::string FamilySpec::to_json() const {
    nlohmann::ordered_json j;
    j["kind"] = to_string(kind);
    j["n"] = n;
    j["m"] = m;
    j["depth"] = depth;
    j["alpha"] = alpha;
    return j.dump();
}

FamilySpec FamilySpec::from_json(std::string_view text) {
    const auto j = nlohmann::json::parse(text);
    FamilySpec s;
    s.kind = family_kind_from_string(j.at("kind").get<std::string>());
    s.n = j.value("n", s.n);
    s.m = j.value("m", s.m);
    s.depth = j.value("depth", s.depth);
    s.alpha = j.value("alpha", s.alpha);
    if (s.n < 1 && s.kind != FamilyKind::binary_tree) throw std::invalid_argument("family: n must be positive");
    if (s.m < 1 || s.depth < 1) throw std::invalid_argument("family: parameters must be positive");
    return s;
}

}  // namespace metdich
