#include "metdich/euclid.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>

namespace metdich {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Primal-dual pair in the block form used here:
//   dual:   max -gamma  s.t.  Z = C + sum_i y_i B_i  in  PSD(n) x R_+^(2P)
//   primal: min <C, X>  s.t.  <B_i, X> = g_i,  X in the same cone
// y holds the upper triangle of the reduced Gram matrix G (point 0 at the
// origin) followed by gamma = D^2. The PSD block of Z is G itself; the LP
// block holds |x_i - x_j|^2 - d^2 and gamma d^2 - |x_i - x_j|^2 per pair.
class DistortionProgram {
public:
    explicit DistortionProgram(const Eigen::MatrixXd& dist) : points_(dist.rows()), n_(points_ - 1) {
        const double scale = dist.maxCoeff();
        for (Index i = 0; i < points_; ++i)
            for (Index j = i + 1; j < points_; ++j) pairs_.push_back({i, j, std::pow(dist(i, j) / scale, 2)});
        var_of_.resize(n_, n_);
        for (Index a = 0; a < n_; ++a)
            for (Index b = a; b < n_; ++b) {
                var_of_(a, b) = var_of_(b, a) = static_cast<Index>(entry_.size());
                entry_.emplace_back(a, b);
            }
        gamma_ = static_cast<Index>(entry_.size());
        m_ = gamma_ + 1;
        const Index rows = 2 * static_cast<Index>(pairs_.size());
        c_ = Eigen::VectorXd::Zero(rows);
        for (std::size_t k = 0; k < pairs_.size(); ++k) {
            const auto& p = pairs_[k];
            Row lower, upper;
            // |x_i - x_j|^2 = G_ii + G_jj - 2 G_ij with G's row/col for point 0 absent
            const Index a = p.i - 1, b = p.j - 1;
            if (a >= 0) {
                lower.push_back({var_of_(a, a), 1.0});
                lower.push_back({var_of_(a, b), -2.0});
            }
            lower.push_back({var_of_(b, b), 1.0});
            for (auto t : lower) upper.push_back({t.first, -t.second});
            upper.push_back({gamma_, p.sq});
            rows_.push_back(std::move(lower));
            rows_.push_back(std::move(upper));
            c_(2 * k) = -p.sq;
        }
        g_ = Eigen::VectorXd::Zero(m_);
        g_(gamma_) = 1.0;
    }

    struct Pair {
        Index i, j;
        double sq;
    };
    using Row = std::vector<std::pair<Index, double>>;

    Index points_, n_, m_ = 0, gamma_ = 0;
    std::vector<Pair> pairs_;
    Eigen::Matrix<Index, Eigen::Dynamic, Eigen::Dynamic> var_of_;
    std::vector<std::pair<Index, Index>> entry_;
    std::vector<Row> rows_;
    Eigen::VectorXd c_, g_;

    Eigen::MatrixXd gram(const Eigen::VectorXd& y) const {
        Eigen::MatrixXd G(n_, n_);
        for (Index a = 0; a < n_; ++a)
            for (Index b = 0; b < n_; ++b) G(a, b) = y(var_of_(a, b));
        return G;
    }

    Eigen::VectorXd lp(const Eigen::VectorXd& y) const {
        Eigen::VectorXd z(static_cast<Index>(rows_.size()));
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            double s = 0.0;
            for (auto [v, coef] : rows_[r]) s += coef * y(v);
            z(r) = s;
        }
        return z;
    }

    // (<B_i, V_s> + <B_i, v_lp>)_i
    Eigen::VectorXd adjoint(const Eigen::MatrixXd& Vs, const Eigen::VectorXd& v) const {
        Eigen::VectorXd out = Eigen::VectorXd::Zero(m_);
        for (Index p = 0; p < gamma_; ++p) {
            auto [a, b] = entry_[p];
            out(p) = a == b ? Vs(a, a) : Vs(a, b) + Vs(b, a);
        }
        for (std::size_t r = 0; r < rows_.size(); ++r)
            for (auto [var, coef] : rows_[r]) out(var) += coef * v(r);
        return out;
    }

    // M_ij = <B_i, X B_j W> + sum_r B_i(r) B_j(r) x_r / z_r
    Eigen::MatrixXd schur(const Eigen::MatrixXd& X, const Eigen::MatrixXd& W, const Eigen::VectorXd& ratio) const {
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m_, m_);
        for (Index p = 0; p < gamma_; ++p) {
            auto [a, b] = entry_[p];
            const double fp = a == b ? 0.5 : 1.0;
            for (Index q = p; q < gamma_; ++q) {
                auto [c, d] = entry_[q];
                const double fq = c == d ? 0.5 : 1.0;
                const double v = X(b, c) * W(d, a) + X(b, d) * W(c, a) + X(a, c) * W(d, b) + X(a, d) * W(c, b);
                M(p, q) = M(q, p) = fp * fq * v;
            }
        }
        for (std::size_t r = 0; r < rows_.size(); ++r)
            for (auto [u, cu] : rows_[r])
                for (auto [v, cv] : rows_[r]) M(u, v) += ratio(r) * cu * cv;
        return M;
    }
};

Eigen::MatrixXd sym(const Eigen::MatrixXd& A) { return 0.5 * (A + A.transpose()); }

// Largest step a with X + a dX still PSD (inf if unbounded).
double max_step(const Eigen::MatrixXd& X, const Eigen::MatrixXd& dX) {
    Eigen::LLT<Eigen::MatrixXd> llt(X);
    if (llt.info() != Eigen::Success) return 0.0;
    Eigen::MatrixXd L = llt.matrixL();
    Eigen::MatrixXd S = L.triangularView<Eigen::Lower>().solve(dX);
    S = L.triangularView<Eigen::Lower>().solve(S.transpose()).transpose();
    const double lo = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym(S), Eigen::EigenvaluesOnly).eigenvalues()(0);
    return lo >= 0.0 ? kInf : -1.0 / lo;
}

double max_step(const Eigen::VectorXd& x, const Eigen::VectorXd& dx) {
    double a = kInf;
    for (Index i = 0; i < x.size(); ++i)
        if (dx(i) < 0.0) a = std::min(a, -x(i) / dx(i));
    return a;
}

// Full N x N Gram matrix (point 0 at the origin) from the reduced block.
Eigen::MatrixXd full_gram(const Eigen::MatrixXd& G) {
    const Index n = G.rows();
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n + 1, n + 1);
    Q.bottomRightCorner(n, n) = G;
    return Q;
}

Eigen::MatrixXd coordinates_of(const Eigen::MatrixXd& Q) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym(Q));
    const auto& ev = es.eigenvalues();
    std::vector<Index> keep;
    for (Index k = ev.size() - 1; k >= 0; --k)
        if (ev(k) > 0.0) keep.push_back(k);
    Eigen::MatrixXd U(Q.rows(), std::max<Index>(1, static_cast<Index>(keep.size())));
    U.setZero();
    for (std::size_t c = 0; c < keep.size(); ++c)
        U.col(static_cast<Index>(c)) = es.eigenvectors().col(keep[c]) * std::sqrt(ev(keep[c]));
    return U;
}

struct Candidate {
    double distortion = kInf;
    Eigen::MatrixXd coords;
};

// Exact distortion of the clamped factorization, rescaled to be non-contracting.
Candidate upper_candidate(const MetricSpace& x, const Eigen::MatrixXd& G) {
    Candidate out;
    Eigen::MatrixXd U = coordinates_of(full_gram(G));
    const Eigen::MatrixXd e = euclidean_distances(U);
    double lo = kInf, hi = 0.0;
    for (Index i = 0; i < x.size(); ++i)
        for (Index j = i + 1; j < x.size(); ++j) {
            const double r = e(i, j) / x(i, j);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
    if (!(lo > 0.0)) return out;
    out.distortion = hi / lo;
    out.coords = U / lo;
    return out;
}

// Lower bound from the dual weights w = (lower multiplier) - (upper multiplier).
// Dual feasibility makes -Laplacian(w) PSD; its off-diagonal is w itself.
double lower_candidate(const MetricSpace& x, const std::vector<DistortionProgram::Pair>& pairs,
                       const Eigen::VectorXd& xlp) {
    const Index N = x.size();
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(N, N);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const double w = xlp(2 * k) - xlp(2 * k + 1);
        const Index i = pairs[k].i, j = pairs[k].j;
        L(i, j) += w;
        L(j, i) += w;
        L(i, i) -= w;
        L(j, j) -= w;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    Eigen::MatrixXd P = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
    const Eigen::MatrixXd J = Eigen::MatrixXd::Identity(N, N) - Eigen::MatrixXd::Constant(N, N, 1.0 / double(N));
    P = J * P * J;
    double num = 0.0, den = 0.0;
    for (Index i = 0; i < N; ++i)
        for (Index j = i + 1; j < N; ++j) {
            const double d2 = x(i, j) * x(i, j);
            if (P(i, j) > 0.0)
                num += P(i, j) * d2;
            else
                den -= P(i, j) * d2;
        }
    if (den <= 0.0) return 1.0;
    return std::max(1.0, std::sqrt(num / den));
}

GramCertificate make_certificate(const MetricSpace& x, const Eigen::MatrixXd& coords) {
    GramCertificate c;
    c.matrix = coords * coords.transpose();
    const Eigen::MatrixXd e = euclidean_distances(coords);
    double hi = 1.0;
    for (Index i = 0; i < x.size(); ++i)
        for (Index j = i + 1; j < x.size(); ++j) hi = std::max(hi, e(i, j) / x(i, j));
    c.D = hi;
    return c;
}

}  // namespace

bool GramCertificate::verify(const MetricSpace& x, double tol) const {
    if (matrix.rows() != x.size() || matrix.cols() != x.size()) return false;
    if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > tol) return false;
    const auto ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(matrix, Eigen::EigenvaluesOnly).eigenvalues();
    if (ev.size() > 0 && ev(0) < -tol * std::max(1.0, ev.cwiseAbs().maxCoeff())) return false;
    for (Index i = 0; i < x.size(); ++i)
        for (Index j = i + 1; j < x.size(); ++j) {
            const double sq = matrix(i, i) + matrix(j, j) - 2.0 * matrix(i, j);
            const double d2 = x(i, j) * x(i, j);
            const double slack = tol * std::max(1.0, D * D * d2);
            if (sq < d2 - slack || sq > D * D * d2 + slack) return false;
        }
    return true;
}

L2DistortionReport min_distortion_l2(const MetricSpace& x, double tol, L2Options options) {
    if (x.size() > 64) throw std::invalid_argument("min_distortion_l2: at most 64 points");
    if (!(tol > 0.0)) throw std::invalid_argument("min_distortion_l2: tol must be positive");
    L2DistortionReport report;
    report.certificate = Certificate::semidefinite_dual;
    if (x.size() <= 2) {
        report.lower = report.upper = 1.0;
        report.coordinates = Eigen::MatrixXd::Zero(x.size(), 1);
        if (x.size() == 2) report.coordinates(1, 0) = x(0, 1);
        report.gram = make_certificate(x, report.coordinates);
        report.complete = true;
        return report;
    }

    const DistortionProgram prog(x.distances());
    const Index n = prog.n_, rows = static_cast<Index>(prog.rows_.size());
    const double nu = double(n + rows);

    Eigen::MatrixXd Xs = Eigen::MatrixXd::Identity(n, n), Zs = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd xl = Eigen::VectorXd::Ones(rows), zl = Eigen::VectorXd::Ones(rows);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(prog.m_);

    Candidate best_upper;
    double best_lower = 1.0;
    auto record = [&](const Eigen::VectorXd& yy, const Eigen::VectorXd& xx) {
        auto cand = upper_candidate(x, prog.gram(yy));
        if (cand.distortion < best_upper.distortion) best_upper = std::move(cand);
        best_lower = std::max(best_lower, lower_candidate(x, prog.pairs_, xx));
    };

    int it = 0;
    for (; it < options.max_iterations; ++it) {
        const Eigen::MatrixXd Rd_s = prog.gram(y) - Zs;
        const Eigen::VectorXd Rd_l = prog.c_ + prog.lp(y) - zl;
        const Eigen::VectorXd rp = prog.g_ - prog.adjoint(Xs, xl);
        const double mu = ((Xs.cwiseProduct(Zs)).sum() + xl.dot(zl)) / nu;
        const double pobj = prog.c_.dot(xl), dobj = -y(prog.gamma_);
        const double relgap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
        const double pinf = rp.norm() / (1.0 + prog.g_.norm());
        const double dinf = std::sqrt(Rd_s.squaredNorm() + Rd_l.squaredNorm()) / (1.0 + prog.c_.norm());

        if (relgap < 1e-3 && pinf < 1e-6 && dinf < 1e-6) {
            record(y, xl);
            if (best_upper.distortion - best_lower <= tol * best_upper.distortion) break;
        }
        if (relgap < 1e-13 && pinf < 1e-12 && dinf < 1e-12) break;

        Eigen::LLT<Eigen::MatrixXd> zchol(Zs);
        if (zchol.info() != Eigen::Success) break;
        const Eigen::MatrixXd Zi = zchol.solve(Eigen::MatrixXd::Identity(n, n));
        const Eigen::VectorXd ratio = xl.cwiseQuotient(zl);
        Eigen::MatrixXd M = prog.schur(Xs, Zi, ratio);
        M.diagonal().array() += 1e-14 * M.diagonal().cwiseAbs().maxCoeff();
        Eigen::LDLT<Eigen::MatrixXd> mfac(M);
        if (mfac.info() != Eigen::Success) break;

        struct Dir {
            Eigen::MatrixXd dXs, dZs;
            Eigen::VectorXd dxl, dzl, dy;
        };
        auto solve = [&](double sigma, const Dir* aff) {
            Eigen::MatrixXd Ws = Eigen::MatrixXd::Zero(n, n);
            Eigen::VectorXd wl = Eigen::VectorXd::Zero(rows);
            if (aff) {
                Ws = sym(aff->dXs * aff->dZs * Zi);
                wl = aff->dxl.cwiseProduct(aff->dzl).cwiseQuotient(zl);
            }
            const Eigen::MatrixXd Ts = sigma * mu * Zi - Ws - sym(Xs * Rd_s * Zi);
            const Eigen::VectorXd tl =
                (sigma * mu * Eigen::VectorXd::Ones(rows) - xl.cwiseProduct(Rd_l)).cwiseQuotient(zl) - wl;
            Dir d;
            d.dy = mfac.solve(prog.adjoint(Ts, tl) - prog.g_);
            d.dZs = Rd_s + prog.gram(d.dy);
            d.dzl = Rd_l + prog.lp(d.dy);
            d.dXs = sigma * mu * Zi - Xs - Ws - sym(Xs * d.dZs * Zi);
            d.dxl = (sigma * mu * Eigen::VectorXd::Ones(rows) - xl.cwiseProduct(d.dzl)).cwiseQuotient(zl) - xl - wl;
            return d;
        };
        auto steps = [&](const Dir& d) {
            const double ap = std::min({1.0, max_step(Xs, d.dXs), max_step(xl, d.dxl)});
            const double ad = std::min({1.0, max_step(Zs, d.dZs), max_step(zl, d.dzl)});
            return std::pair{ap, ad};
        };

        const Dir aff = solve(0.0, nullptr);
        auto [ap_aff, ad_aff] = steps(aff);
        const double mu_aff = ((Xs + ap_aff * aff.dXs).cwiseProduct(Zs + ad_aff * aff.dZs).sum() +
                               (xl + ap_aff * aff.dxl).dot(zl + ad_aff * aff.dzl)) /
                              nu;
        const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);
        const Dir d = solve(sigma, &aff);
        auto [ap, ad] = steps(d);
        ap = std::min(1.0, 0.95 * ap);
        ad = std::min(1.0, 0.95 * ad);
        if (ap < 1e-12 && ad < 1e-12) break;
        Xs = sym(Xs + ap * d.dXs);
        xl += ap * d.dxl;
        y += ad * d.dy;
        Zs = sym(Zs + ad * d.dZs);
        zl += ad * d.dzl;
    }
    record(y, xl);

    report.iterations = it;
    report.upper = best_upper.distortion;
    report.lower = std::min(best_lower, report.upper);
    if (std::isfinite(report.upper)) {
        report.coordinates = best_upper.coords;
        report.gram = make_certificate(x, report.coordinates);
    }
    report.complete = std::isfinite(report.upper) && report.upper - report.lower <= tol * report.upper;
    return report;
}

double poincare_lower_bound(const MetricSpace& x, std::span<const WeightedPair> numerator,
                            std::span<const WeightedPair> denominator, double modulus) {
    if (numerator.empty() || denominator.empty()) throw std::invalid_argument("poincare_lower_bound: empty pair set");
    if (!(modulus > 0.0)) throw std::invalid_argument("poincare_lower_bound: modulus must be positive");
    auto sum = [&](std::span<const WeightedPair> pairs) {
        double s = 0.0;
        for (const auto& p : pairs) {
            if (!(p.w > 0.0)) throw std::invalid_argument("poincare_lower_bound: weights must be positive");
            s += p.w * x(p.i, p.j) * x(p.i, p.j);
        }
        return s;
    };
    const double num = sum(numerator), den = sum(denominator);
    if (den == 0.0) throw std::invalid_argument("poincare_lower_bound: zero denominator");
    return std::sqrt(num / (modulus * den));
}

std::vector<WeightedPair> cube_diagonal_pairs(int n) {
    if (n < 1 || n > 20) throw std::invalid_argument("cube pairs: n must lie in [1,20]");
    const Index size = Index{1} << n;
    std::vector<WeightedPair> out;
    for (Index v = 0; v < size; ++v) out.push_back({v, v ^ (size - 1), 1.0});
    return out;
}

std::vector<WeightedPair> cube_edge_pairs(int n) {
    if (n < 1 || n > 20) throw std::invalid_argument("cube pairs: n must lie in [1,20]");
    const Index size = Index{1} << n;
    std::vector<WeightedPair> out;
    for (Index v = 0; v < size; ++v)
        for (int i = 0; i < n; ++i) out.push_back({v, v ^ (Index{1} << i), 1.0});
    return out;
}

}  // namespace metdich
