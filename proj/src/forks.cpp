#include "metdich/trees.hpp"

#include <cmath>

namespace metdich {

const char* to_string(ForkType t) {
    switch (t) {
        case ForkType::contract_A: return "contract-A";
        case ForkType::contract_B: return "contract-B";
        case ForkType::I: return "I";
        case ForkType::II: return "II";
        case ForkType::III: return "III";
        case ForkType::IV: return "IV";
        case ForkType::unclassified: return "unclassified";
        case ForkType::degenerate: return "degenerate";
    }
    return "unclassified";
}

const char* to_string(PathType t) {
    switch (t) {
        case PathType::A: return "A";
        case PathType::B: return "B";
        case PathType::C: return "C";
        case PathType::other: return "other";
    }
    return "other";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ratio_delta(double r) {
    if (!(r > 0.0)) return kInf;
    return std::max(r - 1.0, 1.0 / r - 1.0);
}

double prong_delta(const MetricSpace& h, Index x, Index y, Index p, double s) {
    return std::max(ratio_delta(h(y, p) / s), ratio_delta(h(x, p) / (2.0 * s)));
}

}  // namespace

double fork_delta(const MetricSpace& h, Index x, Index y, Index z, Index w) {
    const double s = h(x, y);
    if (!(s > 0.0)) return kInf;
    return std::max(prong_delta(h, x, y, z, s), prong_delta(h, x, y, w, s));
}

std::vector<Fork> find_delta_forks(const MetricSpace& h, double delta, bool distinct_prongs) {
    if (!(delta >= 0.0)) throw std::invalid_argument("find_delta_forks: delta must be >= 0");
    const double cap = delta + kSearchTolerance;
    std::vector<Fork> out;
    std::vector<std::pair<Index, double>> prongs;
    for (Index x = 0; x < h.size(); ++x)
        for (Index y = 0; y < h.size(); ++y) {
            if (x == y) continue;
            const double s = h(x, y);
            prongs.clear();
            for (Index p = 0; p < h.size(); ++p) {
                const double dp = prong_delta(h, x, y, p, s);
                if (dp <= cap) prongs.emplace_back(p, dp);
            }
            for (std::size_t a = 0; a < prongs.size(); ++a)
                for (std::size_t b = distinct_prongs ? a + 1 : a; b < prongs.size(); ++b)
                    out.push_back({x, y, prongs[a].first, prongs[b].first,
                                   std::max(prongs[a].second, prongs[b].second)});
        }
    return out;
}

double fork_tip_contraction(const Fork& f, const MetricSpace& h) {
    if (f.degenerate()) return 0.0;
    return h(f.z, f.w) / h(f.x, f.y);
}

ForkType classify_fork_heta(const Fork& f, const HEtaHost& host, double delta) {
    const auto n = static_cast<Index>(host.points.size());
    for (Index i : {f.x, f.y, f.z, f.w})
        if (i < 0 || i >= n) throw std::out_of_range("classify_fork_heta: index outside the host");
    if (fork_delta(host.space, f.x, f.y, f.z, f.w) > delta + kSearchTolerance)
        throw std::invalid_argument("classify_fork_heta: not a delta-fork");
    const auto& x = host.points[f.x];
    const auto& y = host.points[f.y];
    const auto& z = host.points[f.z];
    const auto& w = host.points[f.w];
    if (f.degenerate()) return ForkType::degenerate;
    if (x.is_strict_ancestor_of(y)) {
        if (y.is_ancestor_of(z) && y.is_ancestor_of(w)) return ForkType::contract_A;
        if (x.is_ancestor_of(z) && x.is_ancestor_of(w) && z.depth() > y.depth() && w.depth() > y.depth())
            return ForkType::contract_B;
        return ForkType::I;
    }
    if (y.is_strict_ancestor_of(x)) {
        if (z.depth() <= y.depth() && w.depth() <= y.depth()) return ForkType::II;
        return ForkType::IV;
    }
    if (!x.comparable(y)) return ForkType::III;
    return ForkType::unclassified;
}

namespace {

// +1: a strict ancestor of b (descending step), -1: the reverse, 0: incomparable.
int vertical_step(const TreePoint& a, const TreePoint& b) {
    if (a.is_strict_ancestor_of(b)) return 1;
    if (b.is_strict_ancestor_of(a)) return -1;
    return 0;
}

bool type_b(const TreePoint& x0, const TreePoint& x1, const TreePoint& x2, const TreePoint& x3) {
    return x1.is_strict_ancestor_of(x0) && x3.is_strict_ancestor_of(x2) && x1.depth() == x2.depth();
}

}  // namespace

PathType classify_path4_heta(const TreePoint& x0, const TreePoint& x1, const TreePoint& x2, const TreePoint& x3) {
    const TreePoint* p[] = {&x0, &x1, &x2, &x3};
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (*p[i] == *p[j]) throw std::invalid_argument("classify_path4_heta: repeated point");
    const int s0 = vertical_step(x0, x1), s1 = vertical_step(x1, x2), s2 = vertical_step(x2, x3);
    if (s0 != 0 && s0 == s1 && s1 == s2) return PathType::A;
    if (type_b(x0, x1, x2, x3) || type_b(x3, x2, x1, x0)) return PathType::B;
    if (s0 == 0 && s1 != 0 && s1 == s2) return PathType::C;
    if (s2 == 0 && s0 != 0 && s0 == s1) return PathType::C;
    return PathType::other;
}

}  // namespace metdich
