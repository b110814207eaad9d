#include "metdich/generators.hpp"
#include "metdich/invariants.hpp"
#include "metdich/parallel.hpp"

#include <cmath>
#include <random>

namespace metdich {

namespace {

// value(f)^2 = num_scale * sum_{num} d(f a, f b)^2 / (den_scale * sum_{den} d(f a, f b)^2)
struct PairFunctional {
    Index points = 0;
    std::vector<std::pair<Index, Index>> num, den;
    double num_scale = 1.0;
    double den_scale = 1.0;

    double ratio(const Eigen::MatrixXd& sq, std::span<const Index> f) const {
        double a = 0.0, b = 0.0;
        for (auto [i, j] : num) a += sq(f[i], f[j]);
        for (auto [i, j] : den) b += sq(f[i], f[j]);
        a *= num_scale;
        b *= den_scale;
        if (b == 0.0) return a == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        return std::sqrt(a / b);
    }
};

PairFunctional cube_functional(int n) {
    if (n < 1 || n > 20) throw std::invalid_argument("type functional: n must lie in [1,20]");
    PairFunctional pf;
    pf.points = Index{1} << n;
    const Index all = pf.points - 1;
    for (Index x = 0; x < pf.points; ++x) {
        pf.num.emplace_back(x, x ^ all);
        for (int i = 0; i < n; ++i) pf.den.emplace_back(x, x ^ (Index{1} << i));
    }
    pf.num_scale = 1.0 / double(pf.points);
    pf.den_scale = double(n) / double(pf.points);
    return pf;
}

Index torus_size(int n, int m) {
    const double size = std::pow(double(m), double(n));
    if (size > 1e7) throw BudgetExceeded("torus functional: m^n too large");
    return static_cast<Index>(std::llround(size));
}

// x + shift * e_j for every x and j.
void add_axis_pairs(PairFunctional& pf, int n, int m, long long shift) {
    for (Index x = 0; x < pf.points; ++x) {
        const auto c = torus_coordinates(x, n, m);
        for (int j = 0; j < n; ++j) {
            auto y = c;
            y[j] = static_cast<int>((y[j] + shift) % m);
            pf.num.emplace_back(x, torus_index(y, m));
        }
    }
}

// x + eps for every x and every eps with entries drawn from `steps`.
std::size_t add_step_pairs(PairFunctional& pf, int n, int m, std::span<const int> steps) {
    std::size_t patterns = 1;
    for (int i = 0; i < n; ++i) patterns *= steps.size();
    for (Index x = 0; x < pf.points; ++x) {
        const auto c = torus_coordinates(x, n, m);
        for (std::size_t p = 0; p < patterns; ++p) {
            auto y = c;
            std::size_t code = p;
            for (int i = 0; i < n; ++i) {
                y[i] += steps[code % steps.size()];
                code /= steps.size();
            }
            pf.den.emplace_back(x, torus_index(y, m));
        }
    }
    return patterns;
}

PairFunctional gamma_functional(int n, int m, GammaExponents e) {
    if (n < 1) throw std::invalid_argument("gamma: n must be >= 1");
    if (m < 2 || m % 2 != 0) throw std::invalid_argument("gamma: m must be even");
    PairFunctional pf;
    pf.points = torus_size(n, m);
    const auto shift = std::llround(std::pow(double(n), e.shift)) % m;
    add_axis_pairs(pf, n, m, shift);
    static constexpr int signs[] = {-1, 1};
    const auto patterns = add_step_pairs(pf, n, m, signs);
    pf.num_scale = 1.0 / double(pf.points);
    pf.den_scale = std::pow(double(n), e.scale) * double(n) / (double(patterns) * double(pf.points));
    return pf;
}

PairFunctional metric_en_cotype_functional(int n, int m, double q) {
    if (n < 1) throw std::invalid_argument("metric en-cotype: n must be >= 1");
    if (m < 2 || m % 2 != 0) throw std::invalid_argument("metric en-cotype: m must be even");
    PairFunctional pf;
    pf.points = torus_size(n, m);
    add_axis_pairs(pf, n, m, m / 2);
    static constexpr int steps[] = {-1, 0, 1};
    const auto patterns = add_step_pairs(pf, n, m, steps);
    pf.num_scale = 1.0 / double(pf.points);
    pf.den_scale = double(m) * double(m) * std::pow(double(n), 1.0 - 2.0 / q) / (double(patterns) * double(pf.points));
    return pf;
}

Eigen::MatrixXd squared(const MetricSpace& h) { return h.distances().array().square().matrix(); }

void check_map(const PairFunctional& pf, const MetricSpace& h, std::span<const Index> f) {
    if (static_cast<Index>(f.size()) != pf.points) throw std::invalid_argument("map size does not match index set");
    for (Index a : f)
        if (a < 0 || a >= h.size()) throw std::invalid_argument("map hits a point outside the host");
}

struct Best {
    double value = -1.0;
    std::vector<Index> map;
};

// Is size^points <= cap?
bool within(Index size, Index points, std::uint64_t cap) {
    double total = 1.0;
    for (Index i = 0; i < points; ++i) {
        total *= double(size);
        if (total > double(cap)) return false;
    }
    return true;
}

Best exhaustive(const PairFunctional& pf, const Eigen::MatrixXd& sq, Index size) {
    // Lexicographic order with f(0) most significant; chunks split on f(0).
    auto chunks = parallel_map(static_cast<std::size_t>(size), [&](std::size_t first) {
        Best best;
        std::vector<Index> f(static_cast<std::size_t>(pf.points), 0);
        f[0] = static_cast<Index>(first);
        while (true) {
            const double v = pf.ratio(sq, f);
            if (v > best.value) {
                best.value = v;
                best.map = f;
            }
            Index pos = pf.points - 1;
            while (pos >= 1 && ++f[pos] == size) f[pos--] = 0;
            if (pos < 1) break;
        }
        return best;
    });
    Best best;
    for (auto& c : chunks)
        if (c.value > best.value) best = std::move(c);
    return best;
}

Best local_search(const PairFunctional& pf, const Eigen::MatrixXd& sq, Index size, const EvaluationBudget& budget) {
    auto runs = parallel_map(static_cast<std::size_t>(std::max(1, budget.restarts)), [&](std::size_t r) {
        std::mt19937_64 rng(budget.seed + 0x9e3779b97f4a7c15ULL * (r + 1));
        std::uniform_int_distribution<Index> pick(0, size - 1);
        std::vector<Index> f(static_cast<std::size_t>(pf.points));
        for (auto& a : f) a = pick(rng);
        double current = pf.ratio(sq, f);
        for (int iter = 0; iter < 100000; ++iter) {
            double best_v = current;
            Index best_pos = -1, best_pt = -1;
            for (Index pos = 0; pos < pf.points; ++pos) {
                const Index keep = f[pos];
                for (Index u = 0; u < size; ++u) {
                    if (u == keep) continue;
                    f[pos] = u;
                    const double v = pf.ratio(sq, f);
                    if (v > best_v) {
                        best_v = v;
                        best_pos = pos;
                        best_pt = u;
                    }
                }
                f[pos] = keep;
            }
            if (best_pos < 0) break;
            f[best_pos] = best_pt;
            current = best_v;
        }
        return Best{current, f};
    });
    Best best;
    for (auto& c : runs)
        if (c.value > best.value) best = std::move(c);
    return best;
}

InvariantValue maximize(const PairFunctional& pf, const MetricSpace& h, const EvaluationBudget& budget) {
    InvariantValue out;
    const Eigen::MatrixXd sq = squared(h);
    if (h.size() == 1) {
        out.value = 0.0;
        out.witness.assign(static_cast<std::size_t>(pf.points), 0);
        out.exact = true;
        return out;
    }
    Best best;
    if (within(h.size(), pf.points, budget.max_maps)) {
        best = exhaustive(pf, sq, h.size());
        out.exact = true;
    } else {
        if (!budget.allow_heuristic) throw BudgetExceeded("exhaustive evaluation exceeds the map budget");
        best = local_search(pf, sq, h.size(), budget);
        out.exact = false;
    }
    out.value = std::max(0.0, best.value);
    out.witness = std::move(best.map);
    return out;
}

}  // namespace

double type_ratio(const MetricSpace& h, int n, std::span<const Index> f) {
    const auto pf = cube_functional(n);
    check_map(pf, h, f);
    return pf.ratio(squared(h), f);
}

InvariantValue type_constant(const MetricSpace& h, int n, EvaluationBudget budget) {
    if (n < 1) throw std::invalid_argument("type_constant: n must be >= 1");
    auto out = maximize(cube_functional(n), h, budget);
    out.kind = InvariantKind::type;
    out.n = n;
    return out;
}

double gamma_ratio(const MetricSpace& h, int n, int m, std::span<const Index> f, GammaExponents e) {
    const auto pf = gamma_functional(n, m, e);
    check_map(pf, h, f);
    return pf.ratio(squared(h), f);
}

InvariantValue gamma_constant(const MetricSpace& h, int n, int m, EvaluationBudget budget, GammaExponents e) {
    auto out = maximize(gamma_functional(n, m, e), h, budget);
    out.kind = InvariantKind::gamma;
    out.n = n;
    out.m = m;
    return out;
}

GammaSweep gamma_sweep(const MetricSpace& h, int n, std::span<const int> ms, EvaluationBudget budget,
                       GammaExponents e) {
    GammaSweep sweep;
    for (int m : ms) {
        sweep.per_m.push_back(gamma_constant(h, n, m, budget, e));
        sweep.running_sup = std::max(sweep.running_sup, sweep.per_m.back().value);
    }
    return sweep;
}

double metric_en_cotype_ratio(const MetricSpace& h, int n, int m, double q, std::span<const Index> f) {
    if (!(q >= 2.0)) throw std::invalid_argument("metric en-cotype: q must be >= 2");
    const auto pf = metric_en_cotype_functional(n, m, q);
    check_map(pf, h, f);
    return pf.ratio(squared(h), f);
}

}  // namespace metdich
