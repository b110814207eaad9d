#include "metdich/invariants.hpp"

#include <cmath>

namespace metdich {

const char* to_string(InvariantKind k) {
    switch (k) {
        case InvariantKind::psi: return "psi";
        case InvariantKind::type: return "type";
        case InvariantKind::gamma: return "gamma";
        case InvariantKind::metric_en_cotype: return "metric-en-cotype";
    }
    return "unknown";
}

InvariantKind invariant_kind_from_string(std::string_view s) {
    for (auto k : {InvariantKind::psi, InvariantKind::type, InvariantKind::gamma, InvariantKind::metric_en_cotype})
        if (s == to_string(k)) return k;
    throw std::invalid_argument("unknown invariant kind '" + std::string(s) + "'");
}

double reevaluate(const InvariantValue& v, const MetricSpace& h, GammaExponents e) {
    switch (v.kind) {
        case InvariantKind::psi: return psi_ratio(h, v.witness);
        case InvariantKind::type: return type_ratio(h, v.n, v.witness);
        case InvariantKind::gamma: return gamma_ratio(h, v.n, v.m, v.witness, e);
        case InvariantKind::metric_en_cotype: break;
    }
    throw std::invalid_argument("reevaluate: metric en-cotype values carry no stored exponent");
}

SubmultiplicativityCheck check_submultiplicativity(const MetricSpace& h, InvariantKind kind, int m, int n,
                                                   EvaluationBudget budget) {
    if (m < 1 || n < 1) throw std::invalid_argument("check_submultiplicativity: m, n must be >= 1");
    SubmultiplicativityCheck out;
    switch (kind) {
        case InvariantKind::psi:
            out.value_m = psi_constant(h, m).value;
            out.value_n = psi_constant(h, n).value;
            out.value_mn = psi_constant(h, m * n).value;
            break;
        case InvariantKind::type: {
            budget.allow_heuristic = false;
            out.value_m = type_constant(h, m, budget).value;
            out.value_n = type_constant(h, n, budget).value;
            out.value_mn = type_constant(h, m * n, budget).value;
            break;
        }
        default: throw std::invalid_argument("check_submultiplicativity: kind must be psi or type");
    }
    out.holds = out.value_mn <= out.value_m * out.value_n + 1e-9;
    return out;
}

double DichotomyFit::distortion_lower_bound(int k) const {
    if (!decays) return 1.0;
    return std::pow(std::pow(double(n0), double(k)), beta);
}

DichotomyFit fit_beta(int n0, double eta) {
    if (n0 < 2) throw std::invalid_argument("fit_beta: n0 must be >= 2");
    if (!(eta > 0.0)) throw std::invalid_argument("fit_beta: eta must be positive");
    DichotomyFit fit;
    fit.n0 = n0;
    fit.eta = eta;
    if (eta >= 1.0) return fit;
    fit.decays = true;
    fit.beta = -std::log(eta) / std::log(double(n0));
    return fit;
}

}  // namespace metdich
