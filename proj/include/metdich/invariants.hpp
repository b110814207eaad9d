#pragma once

#include "metdich/metric_space.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace metdich {

enum class InvariantKind { psi, type, gamma, metric_en_cotype };

const char* to_string(InvariantKind k);
InvariantKind invariant_kind_from_string(std::string_view s);

/// A computed functional together with the map that attains it.
///
/// `witness[i]` is the host point assigned to index i of the functional's
/// index set: path vertices for psi, cube points (bit i-1 = coordinate i) for
/// type, torus points (mixed radix, coordinate 1 least significant) for gamma.
struct InvariantValue {
    InvariantKind kind = InvariantKind::psi;
    int n = 0;
    int m = 0;  ///< torus side for gamma, 0 otherwise
    double value = 0.0;
    std::vector<Index> witness;
    bool exact = true;
};

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct EvaluationBudget {
    /// Exhaustive enumeration is used when |H|^(index count) is at most this.
    std::uint64_t max_maps = 20'000'000;
    /// Heuristic mode: random restarts, each followed by steepest single-point ascent.
    int restarts = 64;
    std::uint64_t seed = 0x6d657464696368ULL;
    /// When false, exceeding max_maps throws BudgetExceeded instead of falling back.
    bool allow_heuristic = true;
};

// ---------------------------------------------------------------------------
// Path functional

/// d(f(0), f(n)) / (n * max step) for a walk f(0..n); 0 for a constant walk.
double psi_ratio(const MetricSpace& h, std::span<const Index> walk);

/// Exact sup of psi_ratio over all maps {0..n} -> H.
///
/// For each threshold t among the pairwise distances, hop counts in the graph
/// of edges no longer than t decide which pairs are joined by a walk of at
/// most n steps (repeats pad shorter walks); the best d(u,v)/(n t) over
/// reachable pairs and thresholds is the supremum.
InvariantValue psi_constant(const MetricSpace& h, int n);

// ---------------------------------------------------------------------------
// Cube and torus functionals

/// sqrt( Avg_x d(f x, f(x+1))^2 / (n sum_i Avg_x d(f x, f(x+e_i))^2) ); 0 when
/// the denominator vanishes.
double type_ratio(const MetricSpace& h, int n, std::span<const Index> f);

/// sup of type_ratio over maps {0,1}^n -> H; exhaustive within budget,
/// otherwise a heuristic lower bound (exact = false).
InvariantValue type_constant(const MetricSpace& h, int n, EvaluationBudget budget = {});

/// Exponents of the torus inequality: the axis shift is n^shift and the
/// right-hand side carries n^scale * n. Defaults give the standard form; the
/// variant (shift 3, scale 6) is the strengthened one.
struct GammaExponents {
    double shift = 1.0;
    double scale = 2.0;
};

/// sqrt( sum_j Avg_x d(f x, f(x + s e_j))^2 / (n^scale n Avg_{eps in {+-1}^n} Avg_x d(f x, f(x+eps))^2) )
/// over Z_m^n. Returns +inf when only the denominator vanishes.
double gamma_ratio(const MetricSpace& h, int n, int m, std::span<const Index> f, GammaExponents e = {});

/// Per-m supremum of gamma_ratio. m must be even.
InvariantValue gamma_constant(const MetricSpace& h, int n, int m, EvaluationBudget budget = {},
                              GammaExponents e = {});

struct GammaSweep {
    std::vector<InvariantValue> per_m;
    double running_sup = 0.0;  ///< max over the evaluated m; never exact
};

GammaSweep gamma_sweep(const MetricSpace& h, int n, std::span<const int> ms, EvaluationBudget budget = {},
                       GammaExponents e = {});

/// sqrt( sum_j Avg_x d(f x, f(x + m/2 e_j))^2 / (m^2 n^{1-2/q} Avg_{eps in {0,+-1}^n} Avg_x d(f x, f(x+eps))^2) ).
/// 0 when both sides vanish, +inf when only the right side does. q may be +inf.
double metric_en_cotype_ratio(const MetricSpace& h, int n, int m, double q, std::span<const Index> f);

/// Re-evaluates the stored witness under the functional named by `v.kind`.
double reevaluate(const InvariantValue& v, const MetricSpace& h, GammaExponents e = {});

// ---------------------------------------------------------------------------

struct SubmultiplicativityCheck {
    double value_m = 0, value_n = 0, value_mn = 0;
    bool holds = false;  ///< value_mn <= value_m * value_n + 1e-9
};

/// kind must be psi or type; type requires exhaustive evaluation of all three
/// values and throws BudgetExceeded otherwise.
SubmultiplicativityCheck check_submultiplicativity(const MetricSpace& h, InvariantKind kind, int m, int n,
                                                   EvaluationBudget budget = {});

/// Decay exponent from one value of a submultiplicative functional:
/// n0^-beta = eta. With eta >= 1 there is no decay and `decays` is false.
struct DichotomyFit {
    int n0 = 2;
    double eta = 1.0;
    double beta = 0.0;
    bool decays = false;

    /// (n0^k)^beta: the implied lower bound on the distortion of P_{n0^k}.
    double distortion_lower_bound(int k) const;
};

DichotomyFit fit_beta(int n0, double eta);

// ---------------------------------------------------------------------------
// Linear equal-norm type and cotype for explicit vector families

/// Columns of `vectors` are x_1..x_n in R^d, measured in the l_r norm with
/// r = norm_exponent (may be +inf).
struct VectorFamily {
    Eigen::MatrixXd vectors;
    double norm_exponent = 2.0;

    Index count() const { return vectors.cols(); }
    double norm(const Eigen::Ref<const Eigen::VectorXd>& v) const;
};

/// Avg over eps in {-1,1}^n of |sum_j eps_j x_j|^2, exact. n <= 20.
double rademacher_average(const VectorFamily& fam);

/// Smallest constant in the equal-norm type-p inequality for this family.
double en_type_ratio(const VectorFamily& fam, double p);
/// Smallest constant in the equal-norm cotype-q inequality; +inf if the
/// Rademacher average vanishes while the norms do not.
double en_cotype_ratio(const VectorFamily& fam, double q);

}  // namespace metdich
