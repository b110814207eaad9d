// Runs every acceptance criterion, prints one PASS/FAIL line per criterion and
// exits nonzero if any fails. With an argument, the per-criterion CSVs are
// written into that directory.

#include "metdich/distortion.hpp"
#include "metdich/euclid.hpp"
#include "metdich/generators.hpp"
#include "metdich/invariants.hpp"
#include "metdich/io.hpp"
#include "metdich/trees.hpp"
#include "support.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

using namespace metdich;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
    std::string csv;
};

class Check {
public:
    explicit Check(std::string header) { csv_ << header << "\n"; }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) csv_ << (i ? "," : "") << cells[i];
        csv_ << "\n";
    }
    void expect(bool ok, const std::string& what) {
        if (!ok && pass_) {
            pass_ = false;
            first_failure_ = what;
        }
    }
    Outcome done(std::string detail) {
        return {pass_, pass_ ? std::move(detail) : first_failure_, csv_.str()};
    }

private:
    std::ostringstream csv_;
    bool pass_ = true;
    std::string first_failure_;
};

std::string r12(double v) { return format_real(v); }

const std::vector<MetricSpace>& shared_hosts() {
    static const auto hosts = fixtures::random_hosts(20240601, 200, 2, 6);
    return hosts;
}

MetricSpace two_point_host() {
    Eigen::MatrixXd d(2, 2);
    d << 0, 1, 1, 0;
    return MetricSpace::validated(d, index_labels(2));
}

MetricSpace star(Index leaves) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Constant(leaves + 1, leaves + 1, 2.0);
    d.diagonal().setZero();
    d.row(0).tail(leaves).setOnes();
    d.col(0).tail(leaves).setOnes();
    return MetricSpace::validated(d, index_labels(leaves + 1));
}

Outcome functional_bounds() {
    Check c("host,size,n,psi,type");
    double worst_psi = 0, worst_type = 0;
    const auto& hosts = shared_hosts();
    for (std::size_t i = 0; i < hosts.size(); ++i)
        for (int n : {2, 3}) {
            const double psi = psi_constant(hosts[i], n).value;
            EvaluationBudget exact;
            exact.allow_heuristic = false;
            const double type = type_constant(hosts[i], n, exact).value;
            worst_psi = std::max(worst_psi, psi);
            worst_type = std::max(worst_type, type);
            c.expect(psi <= 1 + 1e-12, "psi above 1 on host " + std::to_string(i));
            c.expect(type <= 1 + 1e-9, "type above 1 on host " + std::to_string(i));
            c.row({std::to_string(i), std::to_string(hosts[i].size()), std::to_string(n), r12(psi), r12(type)});
        }
    const auto gamma = gamma_constant(two_point_host(), 2, 4);
    c.expect(gamma.exact && gamma.value <= 1.0, "gamma above 1 on the two-point host");
    c.row({"two-point", "2", "gamma n=2 m=4", r12(gamma.value), ""});
    return c.done("max psi " + r12(worst_psi) + ", max type " + r12(worst_type) + ", gamma(2,4) " +
                  r12(gamma.value));
}

Outcome submultiplicativity() {
    Check c("host,m,n,psi_m,psi_n,psi_mn");
    const auto& hosts = shared_hosts();
    double worst = -1;
    for (std::size_t i = 0; i < hosts.size(); ++i)
        for (auto [m, n] : {std::pair{2, 2}, std::pair{2, 3}}) {
            const auto s = check_submultiplicativity(hosts[i], InvariantKind::psi, m, n);
            worst = std::max(worst, s.value_mn - s.value_m * s.value_n);
            c.expect(s.holds, "violated on host " + std::to_string(i));
            c.row({std::to_string(i), std::to_string(m), std::to_string(n), r12(s.value_m), r12(s.value_n),
                   r12(s.value_mn)});
        }
    for (int depth = 1; depth <= 5; ++depth)
        for (auto [m, n] : {std::pair{2, 2}, std::pair{2, 3}}) {
            const auto s = check_submultiplicativity(ultrametric_host(depth), InvariantKind::psi, m, n);
            c.expect(std::abs(s.value_mn - s.value_m * s.value_n) <= 1e-9,
                     "no equality on ultrametric depth " + std::to_string(depth));
            c.row({"ultrametric:" + std::to_string(depth), std::to_string(m), std::to_string(n), r12(s.value_m),
                   r12(s.value_n), r12(s.value_mn)});
        }
    return c.done("max psi_mn - psi_m psi_n = " + r12(worst) + "; equality on ultrametric hosts");
}

Outcome reciprocal_bound() {
    Check c("host,size,n,inverse_psi,c_exact");
    const auto hosts = fixtures::random_hosts(7001, 50, 3, 8);
    double slack = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < hosts.size(); ++i)
        for (int n = 1; n <= std::min<int>(5, int(hosts[i].size()) - 1); ++n) {
            const double psi = psi_constant(hosts[i], n).value;
            const auto r = min_distortion_exact(path(n), hosts[i]);
            c.expect(r.complete, "search incomplete on host " + std::to_string(i));
            c.expect(1.0 / psi <= r.upper + 1e-6, "reciprocal above distortion on host " + std::to_string(i));
            slack = std::min(slack, r.upper - 1.0 / psi);
            c.row({std::to_string(i), std::to_string(hosts[i].size()), std::to_string(n), r12(1.0 / psi),
                   r12(r.upper)});
        }
    return c.done("min c - 1/psi = " + r12(slack));
}

Outcome tightness_hosts() {
    Check c("host,n,value,target");
    for (int n : {2, 4, 8}) {
        const int depth = static_cast<int>(std::ceil(std::log2(double(n)))) + 1;
        const double psi = psi_constant(ultrametric_host(depth), n).value;
        c.expect(psi == 1.0 / n, "psi not 1/n at n=" + std::to_string(n));
        const auto fit = fit_beta(n, psi);
        c.expect(std::abs(fit.beta - 1.0) <= 1e-12, "beta not 1 at n=" + std::to_string(n));
        c.row({"ultrametric:" + std::to_string(depth), std::to_string(n), r12(psi), r12(1.0 / n)});
        c.row({"beta", std::to_string(n), r12(fit.beta), "1"});
    }
    for (int n = 1; n <= 6; ++n) {
        const int depth = static_cast<int>(std::ceil(std::log2(double(n)))) + 1;
        const auto r = min_distortion_exact(path(n), ultrametric_host(depth));
        c.expect(r.complete && r.lower >= n, "c(P_n) below n at n=" + std::to_string(n));
        c.row({"c(P_n):ultrametric:" + std::to_string(depth), std::to_string(n), r12(r.lower), std::to_string(n)});
    }
    double worst = 0;
    for (double beta : {0.25, 0.5})
        for (int n : {2, 4, 8}) {
            const double psi = psi_constant(snowflake_line(2 * n, 1 - beta), n).value;
            const double target = std::pow(n, -beta);
            worst = std::max(worst, std::abs(psi / target - 1));
            c.expect(std::abs(psi / target - 1) <= 0.02, "snowflake off by more than 2%");
            c.row({"snowflake:" + r12(1 - beta), std::to_string(n), r12(psi), r12(target)});
        }
    return c.done("psi = 1/n exactly, beta = 1, c(P_n) >= n for n <= 6, snowflake rel. error " + r12(worst));
}

Outcome euclidean_cubes() {
    Check c("n,lower,upper,poincare");
    std::string detail;
    for (int n = 1; n <= 3; ++n) {
        const auto x = hamming_cube(n);
        const auto r = min_distortion_l2(x);
        const double target = std::sqrt(double(n));
        const double p = poincare_lower_bound(x, cube_diagonal_pairs(n), cube_edge_pairs(n), 1.0);
        c.expect(r.lower >= target - 1e-3 && r.upper <= target + 1e-3, "bracket misses sqrt(n)");
        c.expect(r.lower <= r.upper, "inverted bracket");
        c.expect(r.gram.verify(x), "Gram certificate fails");
        c.expect(p == target, "Poincare bound not sqrt(n)");
        c.row({std::to_string(n), r12(r.lower), r12(r.upper), r12(p)});
        detail += (n > 1 ? " " : "") + std::string("[") + r12(r.lower) + ", " + r12(r.upper) + "]";
    }
    return c.done("brackets " + detail);
}

Outcome euclidean_trees() {
    Check c("depth,lower,upper,complete");
    std::vector<L2DistortionReport> rs;
    std::string detail;
    for (int n = 1; n <= 4; ++n) {
        rs.push_back(min_distortion_l2(binary_tree(n)));
        const auto& r = rs.back();
        c.expect(r.gram.verify(binary_tree(n)), "Gram certificate fails");
        c.row({std::to_string(n), r12(r.lower), r12(r.upper), r.complete ? "1" : "0"});
        detail += (n > 1 ? " <= " : "") + r12(r.lower);
    }
    for (std::size_t k = 0; k + 1 < rs.size(); ++k)
        c.expect(rs[k].upper <= rs[k + 1].lower + 1e-9, "brackets do not order B_" + std::to_string(k + 1));
    return c.done("lower bounds " + detail);
}

Outcome heta_host_checks() {
    Check c("depth,eta,valid,identity_distortion");
    const std::vector<double> etas{1.0, 0.5, 0.25, 0.1};
    for (int depth = 0; depth <= 8; ++depth)
        for (double eta : etas) {
            const auto h = heta_host(depth, eta);
            bool valid = true;
            try {
                validate_metric(h.space.distances(), h.space.labels());
            } catch (const MetricError&) {
                valid = false;
            }
            c.expect(valid, "invalid host at depth " + std::to_string(depth));
            std::string id;
            if (depth == 2 || depth == 4 || depth == 6) {
                const double v = identity_distortion_heta(depth, eta);
                c.expect(v == 1.0 / eta, "identity distortion not 1/eta");
                id = r12(v);
            }
            c.row({std::to_string(depth), r12(eta), valid ? "1" : "0", id});
        }
    return c.done("hosts valid for D <= 8; identity distortion equals 1/eta exactly");
}

Outcome fork_suite() {
    Check c("case,count,max_tip");
    const auto s = find_delta_forks(star(3), 0.0);
    c.expect(s.size() == 3, "star does not give 3 forks");
    c.row({"star", std::to_string(s.size()), ""});
    const auto p = find_delta_forks(path(3), 0.0);
    const auto q = find_delta_forks(hamming_cube(2), 0.0);
    c.expect(p.empty() && q.empty(), "path or square has forks");
    c.row({"path3", std::to_string(p.size()), ""});
    c.row({"cube2", std::to_string(q.size()), ""});

    // Euclidean point sets: a planar lattice and the factorized l2 image of a cube.
    Eigen::MatrixXd lattice(16, 2);
    for (int i = 0; i < 16; ++i) lattice.row(i) << i % 4, i / 4;
    const auto gram = min_distortion_l2(hamming_cube(3)).coordinates;
    for (const auto& [name, pts] : {std::pair<std::string, Eigen::MatrixXd>{"lattice", lattice}, {"cube3-l2", gram}}) {
        const auto x = MetricSpace::validated(euclidean_distances(pts), index_labels(pts.rows()));
        const auto forks = find_delta_forks(x, 0.0, false);
        double tip = 0;
        for (const auto& f : forks) tip = std::max(tip, fork_tip_contraction(f, x));
        c.expect(tip <= 1e-6, "Euclidean 0-fork with separated prongs");
        c.row({name, std::to_string(forks.size()), r12(tip)});
    }

    const double delta = 0.05, eta = 0.2;
    const auto h = heta_host(5, eta);
    const auto forks = find_delta_forks(h.space, delta);
    std::map<std::string, int> counts;
    double worst_tip = 0;
    for (const auto& f : forks) {
        const auto type = classify_fork_heta(f, h, delta);
        ++counts[to_string(type)];
        if (type == ForkType::contract_A || type == ForkType::contract_B) {
            const double tip = fork_tip_contraction(f, h.space);
            worst_tip = std::max(worst_tip, tip);
            c.expect(tip <= 2 * delta + 2 * eta + 1e-9, "contracting fork with a wide tip");
        }
    }
    const double unclassified = forks.empty() ? 0.0 : double(counts["unclassified"]) / double(forks.size());
    for (const auto& [type, n] : counts) c.row({"heta5:" + type, std::to_string(n), ""});
    c.row({"heta5:unclassified-fraction", r12(unclassified), r12(worst_tip)});
    return c.done(std::to_string(forks.size()) + " forks on H_eta(5, 0.2), unclassified fraction " +
                  r12(unclassified) + ", max contracting tip " + r12(worst_tip));
}

Outcome b4_search() {
    Check c("eta,delta,min_found,lower_bound,explored_fraction,complete,nodes,witness");
    const auto r = search_b4_nonembed(heta_host(6, 0.2), 0.02);
    c.expect(!r.best.empty() && r.min_found >= 2.5, "minimum below 0.5/eta");
    c.row({"0.2", "0.02", r12(r.min_found), r12(r.lower_bound), r12(r.explored_fraction), r.complete ? "1" : "0",
           std::to_string(r.nodes), witness_hash(r.best)});
    const auto flat = search_b4_nonembed(heta_host(6, 1.0), 0.02);
    c.expect(flat.min_found == 1.0, "eta = 1 does not give 1");
    c.row({"1", "0.02", r12(flat.min_found), r12(flat.lower_bound), r12(flat.explored_fraction),
           flat.complete ? "1" : "0", std::to_string(flat.nodes), witness_hash(flat.best)});
    return c.done("min found " + r12(r.min_found) + " (explored fraction " + r12(r.explored_fraction) +
                  "); eta = 1 gives " + r12(flat.min_found));
}

double rademacher_direct(const VectorFamily& fam) {
    const Index n = fam.count();
    double total = 0.0;
    for (long eps = 0; eps < (1L << n); ++eps) {
        Eigen::VectorXd s = Eigen::VectorXd::Zero(fam.vectors.rows());
        for (Index j = 0; j < n; ++j) s += ((eps >> j) & 1 ? -1.0 : 1.0) * fam.vectors.col(j);
        const double v = fam.norm(s);
        total += v * v;
    }
    return total / double(1L << n);
}

Outcome oracle_equivalence() {
    Check c("case,n,value,oracle");
    const auto& hosts = shared_hosts();
    double worst = 0;
    int compared = 0;
    for (std::size_t i = 0; i < hosts.size(); ++i) {
        if (hosts[i].size() > 5) continue;
        for (int n = 1; n <= 3; ++n) {
            const double v = psi_constant(hosts[i], n).value;
            const double o = fixtures::brute_force_psi(hosts[i], n);
            worst = std::max(worst, std::abs(v - o));
            c.expect(std::abs(v - o) <= 1e-12, "psi differs from enumeration on host " + std::to_string(i));
            c.row({"psi:" + std::to_string(i), std::to_string(n), r12(v), r12(o)});
            ++compared;
        }
    }
    std::mt19937_64 rng(99);
    double worst_linear = 0;
    for (Index n = 1; n <= 10; ++n)
        for (double r : {1.0, 2.0, 4.0, std::numeric_limits<double>::infinity()}) {
            VectorFamily fam;
            fam.vectors.resize(4, n);
            for (Index a = 0; a < 4; ++a)
                for (Index b = 0; b < n; ++b) fam.vectors(a, b) = 2 * fixtures::unit(rng) - 1;
            fam.norm_exponent = r;
            double norms = 0;
            for (Index j = 0; j < n; ++j) norms += std::pow(fam.norm(fam.vectors.col(j)), 2);
            const double avg = rademacher_direct(fam);
            for (double p : {1.0, 1.5, 2.0}) {
                const double direct = std::sqrt(avg / (std::pow(double(n), 2 / p - 1) * norms));
                const double v = en_type_ratio(fam, p);
                worst_linear = std::max(worst_linear, std::abs(v - direct) / direct);
                c.expect(std::abs(v - direct) <= 1e-12 * direct, "en-type differs from direct sum");
                c.row({"type:r=" + r12(r) + ":p=" + r12(p), std::to_string(n), r12(v), r12(direct)});
            }
            for (double q : {2.0, 3.0, std::numeric_limits<double>::infinity()}) {
                const double direct = std::sqrt(norms / (std::pow(double(n), 1 - 2 / q) * avg));
                const double v = en_cotype_ratio(fam, q);
                worst_linear = std::max(worst_linear, std::abs(v - direct) / direct);
                c.expect(std::abs(v - direct) <= 1e-12 * direct, "en-cotype differs from direct sum");
                c.row({"cotype:r=" + r12(r) + ":q=" + r12(q), std::to_string(n), r12(v), r12(direct)});
            }
        }
    return c.done(std::to_string(compared) + " psi comparisons, max diff " + r12(worst) +
                  "; linear ratios max rel. diff " + r12(worst_linear));
}

using Criterion = std::function<Outcome()>;

const std::vector<std::pair<std::string, Criterion>>& criteria() {
    static const std::vector<std::pair<std::string, Criterion>> list{
        {"functional bounds", functional_bounds},
        {"sub-multiplicativity", submultiplicativity},
        {"reciprocal bound", reciprocal_bound},
        {"tightness hosts", tightness_hosts},
        {"Euclidean cube distortion", euclidean_cubes},
        {"Euclidean tree trend", euclidean_trees},
        {"contracted tree host", heta_host_checks},
        {"fork suite", fork_suite},
        {"B4 search", b4_search},
        {"oracle equivalence", oracle_equivalence},
    };
    return list;
}

std::vector<Outcome> run_all(const char* threads, bool report) {
    setenv("METDICH_THREADS", threads, 1);
    std::vector<Outcome> out;
    int k = 0;
    for (const auto& [name, fn] : criteria()) {
        ++k;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what(), ""};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (report) {
            std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << k << " (" << name << "): " << o.detail;
            std::cout << " [" << std::fixed;
            std::cout.precision(1);
            std::cout << secs << "s]" << std::defaultfloat << std::endl;
        }
        out.push_back(std::move(o));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    const auto first = run_all("1", true);
    const auto second = run_all("1", false);
    const auto threaded = run_all("4", false);

    bool all = true;
    for (const auto& o : first) all = all && o.pass;

    int mismatched = 0;
    std::string which;
    for (std::size_t k = 0; k < first.size(); ++k)
        if (first[k].csv != second[k].csv || first[k].csv != threaded[k].csv) {
            ++mismatched;
            which += " " + std::to_string(k + 1);
        }
    const bool deterministic = mismatched == 0;
    std::cout << (deterministic ? "PASS" : "FAIL") << " criterion 11 (determinism): "
              << (deterministic ? "CSVs of criteria 1-10 byte-identical across two 1-thread runs and a 4-thread run"
                                : "CSVs differ for criteria" + which)
              << std::endl;
    all = all && deterministic;

    if (argc > 1) {
        const std::filesystem::path dir = argv[1];
        std::filesystem::create_directories(dir);
        for (std::size_t k = 0; k < first.size(); ++k)
            std::ofstream(dir / ("criterion_" + std::to_string(k + 1) + ".csv")) << first[k].csv;
    }
    return all ? 0 : 1;
}
