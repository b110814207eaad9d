#include "app.hpp"

#include "metdich/distortion.hpp"
#include "metdich/euclid.hpp"
#include "metdich/generators.hpp"
#include "metdich/invariants.hpp"
#include "metdich/io.hpp"
#include "metdich/parallel.hpp"
#include "metdich/trees.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <tuple>

namespace metdich::app {

namespace fs = std::filesystem;
using nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// Config access

template <typename T>
T get(const json& config, const char* key, T fallback) {
    if (!config.contains(key)) return fallback;
    try {
        return config.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config key '") + key + "' has the wrong type");
    }
}

template <typename T>
T require(const json& config, const char* key) {
    if (!config.contains(key)) throw ConfigError(std::string("config key '") + key + "' is required");
    return get<T>(config, key, T{});
}

std::vector<int> int_list(const json& config, const char* list_key, const char* single_key) {
    if (config.contains(list_key)) return get<std::vector<int>>(config, list_key, {});
    if (config.contains(single_key)) return {get<int>(config, single_key, 0)};
    throw ConfigError(std::string("config key '") + list_key + "' is required");
}

SearchBudget search_budget(const json& config) {
    SearchBudget b;
    if (config.contains("budget")) b.max_nodes = get<std::uint64_t>(config["budget"], "max_nodes", b.max_nodes);
    return b;
}

EvaluationBudget evaluation_budget(const json& config) {
    EvaluationBudget b;
    b.seed = get<std::uint64_t>(config, "seed", b.seed);
    if (config.contains("budget")) {
        const auto& j = config["budget"];
        b.max_maps = get<std::uint64_t>(j, "max_maps", b.max_maps);
        b.restarts = get<int>(j, "restarts", b.restarts);
        b.allow_heuristic = get<bool>(j, "allow_heuristic", b.allow_heuristic);
    }
    return b;
}

// ---------------------------------------------------------------------------
// Spaces

struct Space {
    std::string key;
    MetricSpace metric;
    std::optional<HEtaHost> heta;
};

Space resolve_space(const json& spec) {
    if (!spec.is_object()) throw ConfigError("space must be an object or a spec string");
    Space out;
    if (spec.contains("file")) {
        const auto path = get<std::string>(spec, "file", "");
        out.metric = load_metric(path);
        out.key = "@" + path;
        return out;
    }
    const auto kind = require<std::string>(spec, "kind");
    if (kind == "heta") {
        const int depth = require<int>(spec, "depth");
        const double eta = require<double>(spec, "eta");
        out.heta = heta_host(depth, eta);
        out.metric = out.heta->space;
        out.key = "heta:depth=" + std::to_string(depth) + ",eta=" + format_real(eta);
        return out;
    }
    const auto family = FamilySpec::from_json(spec.dump());
    out.metric = family.generate();
    out.key = std::string(to_string(family.kind)) + ":";
    switch (family.kind) {
        case FamilyKind::path:
        case FamilyKind::cube:
        case FamilyKind::binary_tree: out.key += "n=" + std::to_string(family.n); break;
        case FamilyKind::linf_grid:
        case FamilyKind::torus_index:
            out.key += "n=" + std::to_string(family.n) + ",m=" + std::to_string(family.m);
            break;
        case FamilyKind::ultrametric_host: out.key += "depth=" + std::to_string(family.depth); break;
        case FamilyKind::snowflake_line:
            out.key += "n=" + std::to_string(family.n) + ",alpha=" + format_real(family.alpha);
            break;
    }
    return out;
}

Space resolve_space(const json& config, const char* key) {
    if (!config.contains(key)) throw ConfigError(std::string("config key '") + key + "' is required");
    const auto& v = config[key];
    return resolve_space(v.is_string() ? parse_space_spec(v.get<std::string>()) : v);
}

// ---------------------------------------------------------------------------
// Output

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

class Csv {
public:
    explicit Csv(std::vector<std::string> header) : header_(std::move(header)) {}
    void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
    std::vector<std::vector<std::string>>& rows() { return rows_; }

    std::string text() const {
        std::string out;
        auto line = [&](const std::vector<std::string>& r) {
            for (std::size_t i = 0; i < r.size(); ++i) {
                if (i) out += ',';
                out += csv_field(r[i]);
            }
            out += '\n';
        };
        line(header_);
        for (const auto& r : rows_) line(r);
        return out;
    }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

const char* flag(bool b) { return b ? "true" : "false"; }

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

/// Everything a command produces besides its exit code.
struct Outcome {
    int code = ok;
    std::map<std::string, std::string> files;  ///< name -> contents
    ojson summary = ojson::object();
};

// Least-squares slope of log y against log x over positive points.
std::optional<double> loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int k = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0 && ys[i] > 0)) continue;
        const double lx = std::log(xs[i]), ly = std::log(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++k;
    }
    const double den = k * sxx - sx * sx;
    if (k < 2 || den <= 0) return std::nullopt;
    return (k * sxy - sx * sy) / den;
}

std::string loglog_svg(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                       const std::vector<double>& xs, const std::vector<double>& ys) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (xs[i] > 0 && ys[i] > 0) pts.emplace_back(std::log10(xs[i]), std::log10(ys[i]));
    const double W = 480, H = 360, L = 70, R = 20, T = 40, B = 50;
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (!pts.empty()) {
        x0 = std::floor(pts[0].first), x1 = std::ceil(pts[0].first);
        y0 = std::floor(pts[0].second), y1 = std::ceil(pts[0].second);
        for (auto [a, b] : pts) {
            x0 = std::min(x0, std::floor(a));
            x1 = std::max(x1, std::ceil(a));
            y0 = std::min(y0, std::floor(b));
            y1 = std::max(y1, std::ceil(b));
        }
        if (x1 == x0) x1 = x0 + 1;
        if (y1 == y0) y1 = y0 + 1;
    }
    auto px = [&](double a) { return L + (a - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double b) { return H - B - (b - y0) / (y1 - y0) * (H - T - B); };
    std::ostringstream s;
    auto num = [](double v) { return format_real(std::round(v * 100) / 100); };
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
    s << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
      << "\" stroke=\"black\"/>\n";
    s << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    for (double a = x0; a <= x1 + 1e-9; a += 1)
        s << "<text x=\"" << num(px(a)) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\" font-size=\"11\">1e"
          << static_cast<int>(a) << "</text>\n";
    for (double b = y0; b <= y1 + 1e-9; b += 1)
        s << "<text x=\"" << L - 6 << "\" y=\"" << num(py(b) + 4) << "\" text-anchor=\"end\" font-size=\"11\">1e"
          << static_cast<int>(b) << "</text>\n";
    s << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"12\">" << xlabel
      << "</text>\n";
    s << "<text x=\"16\" y=\"" << H / 2 << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
      << H / 2 << ")\">" << ylabel << "</text>\n";
    for (auto [a, b] : pts)
        s << "<circle cx=\"" << num(px(a)) << "\" cy=\"" << num(py(b)) << "\" r=\"3.5\" fill=\"steelblue\"/>\n";
    std::vector<double> lx, ly;
    for (auto [a, b] : pts) {
        lx.push_back(std::pow(10.0, a));
        ly.push_back(std::pow(10.0, b));
    }
    if (auto slope = loglog_slope(lx, ly)) {
        double ma = 0, mb = 0;
        for (auto [a, b] : pts) ma += a, mb += b;
        ma /= double(pts.size());
        mb /= double(pts.size());
        const double a0 = pts.front().first, a1 = pts.back().first;
        s << "<line x1=\"" << num(px(a0)) << "\" y1=\"" << num(py(mb + *slope * (a0 - ma))) << "\" x2=\""
          << num(px(a1)) << "\" y2=\"" << num(py(mb + *slope * (a1 - ma)))
          << "\" stroke=\"firebrick\" stroke-dasharray=\"5,3\"/>\n";
        s << "<text x=\"" << W - R << "\" y=\"" << T + 14 << "\" text-anchor=\"end\" font-size=\"12\">beta = "
          << format_real(std::round(-*slope * 1e6) / 1e6) << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

bool close(double a, double b, double rel) {
    if (a == b) return true;
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

// ---------------------------------------------------------------------------
// Commands

Outcome cmd_gen(const json& config) {
    const auto space = resolve_space(config, "family");
    Outcome out;
    out.files["metric.txt"] = to_text(space.metric);
    Csv csv({"space", "points", "diameter", "digest"});
    csv.add({space.key, std::to_string(space.metric.size()), format_real(space.metric.diameter()),
             digest(space.metric)});
    out.files["results.csv"] = csv.text();
    return out;
}

Outcome cmd_distortion(const json& config) {
    const auto domain = resolve_space(config, "domain");
    const auto host = resolve_space(config, "host");
    const auto r = min_distortion_exact(domain.metric, host.metric, search_budget(config));
    Outcome out;
    Csv csv({"domain", "host", "lower", "upper", "certificate", "complete", "nodes", "witness-hash", "domain-digest",
             "host-digest"});
    csv.add({domain.key, host.key, format_real(r.lower), format_real(r.upper), to_string(r.certificate),
             flag(r.complete), std::to_string(r.nodes), r.witness.empty() ? "" : witness_hash(r.witness),
             digest(domain.metric), digest(host.metric)});
    out.files["results.csv"] = csv.text();
    if (!r.witness.empty()) {
        const double check = distortion(Embedding(domain.metric, host.metric, r.witness));
        if (!close(check, r.upper, 1e-12)) throw InvariantViolation("witness distortion does not match the bound");
        std::string w;
        for (std::size_t i = 0; i < r.witness.size(); ++i)
            w += domain.metric.label(static_cast<Index>(i)) + " " + host.metric.label(r.witness[i]) + "\n";
        out.files["witness.txt"] = w;
    } else {
        out.code = budget_exhausted;
    }
    out.summary["lower"] = r.lower;
    out.summary["upper"] = std::isfinite(r.upper) ? json(r.upper) : json("inf");
    return out;
}

Outcome cmd_l2(const json& config) {
    const auto space = resolve_space(config, "space");
    L2Options opts;
    if (config.contains("budget")) opts.max_iterations = get<int>(config["budget"], "max_iterations", 200);
    const auto r = min_distortion_l2(space.metric, get<double>(config, "tol", 1e-6), opts);
    Outcome out;
    Csv csv({"space", "points", "lower", "upper", "complete", "iterations", "digest"});
    csv.add({space.key, std::to_string(space.metric.size()), format_real(r.lower), format_real(r.upper),
             flag(r.complete), std::to_string(r.iterations), digest(space.metric)});
    out.files["results.csv"] = csv.text();
    if (!std::isfinite(r.upper)) {
        out.code = budget_exhausted;
        return out;
    }
    if (!r.gram.verify(space.metric, 1e-9)) throw InvariantViolation("Gram certificate fails verification");
    std::ostringstream g;
    write_matrix(g, r.gram.matrix, space.metric.labels());
    out.files["gram.txt"] = g.str();
    out.summary["lower"] = r.lower;
    out.summary["upper"] = r.upper;
    out.summary["D"] = r.gram.D;
    return out;
}

Outcome cmd_invariant(const json& config) {
    const auto kind = invariant_kind_from_string(require<std::string>(config, "kind"));
    const auto host = resolve_space(config, "host");
    const auto budget = evaluation_budget(config);
    const auto ns = int_list(config, "n_list", "n");
    GammaExponents e;
    e.shift = get<double>(config, "shift", e.shift);
    e.scale = get<double>(config, "scale", e.scale);

    Outcome out;
    Csv csv({"kind", "n", "m", "value", "exact", "witness-hash", "host-digest"});
    const auto host_digest = digest(host.metric);
    std::vector<double> xs, ys;
    auto emit = [&](const InvariantValue& v) {
        csv.add({to_string(v.kind), std::to_string(v.n), std::to_string(v.m), format_real(v.value), flag(v.exact),
                 witness_hash(v.witness), host_digest});
        if (kind != InvariantKind::metric_en_cotype) {
            const double again = reevaluate(v, host.metric, e);
            if (!close(again, v.value, 1e-9)) throw InvariantViolation("witness does not reproduce its value");
        }
    };

    switch (kind) {
        case InvariantKind::psi:
        case InvariantKind::type:
            for (int n : ns) {
                const auto v = kind == InvariantKind::psi ? psi_constant(host.metric, n)
                                                          : type_constant(host.metric, n, budget);
                emit(v);
                xs.push_back(n);
                ys.push_back(v.value);
            }
            break;
        case InvariantKind::gamma: {
            const auto ms = int_list(config, "m_list", "m");
            for (int n : ns) {
                const auto sweep = gamma_sweep(host.metric, n, ms, budget, e);
                for (const auto& v : sweep.per_m) emit(v);
                xs.push_back(n);
                ys.push_back(sweep.running_sup);
            }
            break;
        }
        case InvariantKind::metric_en_cotype: {
            const auto ms = int_list(config, "m_list", "m");
            const double q = get<double>(config, "q", 2.0);
            const auto map = require<std::vector<Index>>(config, "map");
            for (int n : ns)
                for (int m : ms) {
                    InvariantValue v;
                    v.kind = kind;
                    v.n = n;
                    v.m = m;
                    v.value = metric_en_cotype_ratio(host.metric, n, m, q, map);
                    v.witness = map;
                    emit(v);
                }
            break;
        }
    }
    out.files["results.csv"] = csv.text();
    if (xs.size() >= 2) {
        out.files["plot.svg"] = loglog_svg(std::string(to_string(kind)) + " on " + host.key, "n", "value", xs, ys);
        if (auto slope = loglog_slope(xs, ys)) out.summary["beta_fit"] = -*slope;
    }
    return out;
}

Outcome cmd_dichotomy_fit(const json& config) {
    const int n0 = require<int>(config, "n0");
    const double eta = require<double>(config, "eta");
    const int kmax = get<int>(config, "k_max", 5);
    if (kmax < 1 || kmax > 30) throw ConfigError("k_max must lie in [1,30]");
    const auto fit = fit_beta(n0, eta);
    Outcome out;
    Csv csv({"k", "n", "psi-upper", "distortion-lower"});
    std::vector<double> xs, ys;
    for (int k = 1; k <= kmax; ++k) {
        const double n = std::pow(double(n0), k);
        const double psi = std::pow(std::min(eta, 1.0), k);
        csv.add({std::to_string(k), format_real(n), format_real(psi), format_real(fit.distortion_lower_bound(k))});
        xs.push_back(n);
        ys.push_back(psi);
    }
    out.files["results.csv"] = csv.text();
    out.files["plot.svg"] = loglog_svg("decay from n0 = " + std::to_string(n0), "n", "psi bound", xs, ys);
    out.summary["n0"] = n0;
    out.summary["eta"] = eta;
    out.summary["beta"] = fit.beta;
    out.summary["decays"] = fit.decays;
    return out;
}

Outcome cmd_heta(const json& config) {
    const int depth = require<int>(config, "depth");
    const double eta = require<double>(config, "eta");
    const auto host = heta_host(depth, eta);
    bool valid = true;
    try {
        validate_metric(host.space.distances(), host.space.labels());
    } catch (const MetricError&) {
        valid = false;
    }
    Outcome out;
    out.files["metric.txt"] = to_text(host.space);
    Csv csv({"depth", "eta", "points", "valid", "identity-distortion", "digest"});
    csv.add({std::to_string(depth), format_real(eta), std::to_string(host.space.size()), flag(valid),
             depth >= 1 ? format_real(identity_distortion_heta(depth, eta)) : "1", digest(host.space)});
    out.files["results.csv"] = csv.text();
    if (!valid) throw InvariantViolation("heta host fails the metric axioms");
    return out;
}

Csv fork_csv() { return Csv({"x", "y", "z", "w", "delta", "type", "tip-contraction"}); }

void add_fork(Csv& csv, const MetricSpace& m, const Fork& f, const char* type) {
    csv.add({m.label(f.x), m.label(f.y), m.label(f.z), m.label(f.w), format_real(f.delta), type,
             format_real(fork_tip_contraction(f, m))});
}

Outcome cmd_forks(const json& config) {
    const auto space = resolve_space(config, "space");
    const double delta = require<double>(config, "delta");
    const bool distinct = get<bool>(config, "distinct_prongs", true);
    const auto forks = find_delta_forks(space.metric, delta, distinct);
    Outcome out;
    Csv csv = fork_csv();
    std::map<std::string, int> counts;
    for (const auto& f : forks) {
        const char* type = space.heta ? to_string(classify_fork_heta(f, *space.heta, delta)) : "-";
        ++counts[type];
        add_fork(csv, space.metric, f, type);
    }
    out.files["results.csv"] = csv.text();
    out.summary["forks"] = forks.size();
    out.summary["types"] = counts;
    if (space.heta)
        out.summary["unclassified_fraction"] =
            forks.empty() ? 0.0 : double(counts["unclassified"]) / double(forks.size());
    return out;
}

Outcome cmd_b4(const json& config) {
    const int depth = get<int>(config, "depth", 6);
    const double eta = require<double>(config, "eta");
    const double delta = require<double>(config, "delta");
    const int tree_depth = get<int>(config, "tree_depth", 4);
    TreeSearchBudget budget;
    if (config.contains("budget")) budget.max_nodes = get<std::uint64_t>(config["budget"], "max_nodes", budget.max_nodes);
    const auto host = heta_host(depth, eta);
    const auto r = tree_depth == 4 ? search_b4_nonembed(host, delta, budget)
                                   : search_tree_nonembed(tree_depth, host, delta, budget);
    Outcome out;
    Csv census = fork_csv();
    for (const auto& c : r.census) add_fork(census, host.space, c.fork, to_string(c.type));
    out.files["results.csv"] = census.text();
    Csv search({"tree-depth", "host-depth", "eta", "delta", "min-found", "lower-bound", "explored-fraction",
                "complete", "nodes", "witness-hash"});
    search.add({std::to_string(tree_depth), std::to_string(depth), format_real(eta), format_real(delta),
                format_real(r.min_found), format_real(r.lower_bound), format_real(r.explored_fraction),
                flag(r.complete), std::to_string(r.nodes), r.best.empty() ? "" : witness_hash(r.best)});
    out.files["search.csv"] = search.text();
    out.summary["min_found"] = std::isfinite(r.min_found) ? json(r.min_found) : json("inf");
    out.summary["explored_fraction"] = r.explored_fraction;
    out.summary["complete"] = r.complete;
    if (r.best.empty()) out.code = budget_exhausted;
    return out;
}

std::vector<std::pair<json, json>> sweep_cells(const json& config) {
    std::vector<std::pair<json, json>> cells;
    auto as_space = [](const json& v) { return v.is_string() ? parse_space_spec(v.get<std::string>()) : v; };
    if (config.contains("cells")) {
        for (const auto& c : config["cells"]) {
            if (!c.contains("domain") || !c.contains("host")) throw ConfigError("sweep cell needs domain and host");
            cells.emplace_back(as_space(c["domain"]), as_space(c["host"]));
        }
    }
    if (config.contains("grid")) {
        const auto& g = config["grid"];
        std::vector<json> domains, hosts;
        if (g.contains("domains"))
            for (const auto& d : g["domains"]) domains.push_back(as_space(d));
        if (g.contains("family"))
            for (int n : get<std::vector<int>>(g, "n", {})) {
                json d = as_space(g["family"]);
                d["n"] = n;
                domains.push_back(d);
            }
        if (g.contains("hosts"))
            for (const auto& h : g["hosts"]) hosts.push_back(as_space(h));
        for (const auto& h : hosts)
            for (const auto& d : domains) cells.emplace_back(d, h);
    }
    return cells;
}

Outcome cmd_sweep(const json& config) {
    const auto cells = sweep_cells(config);
    const auto budget = search_budget(config);
    struct Row {
        std::string host, domain;
        Index size = 0;
        bool ok = false;
        DistortionReport r;
        std::string status;
    };
    auto rows = parallel_map(cells.size(), [&](std::size_t i) {
        Row row;
        try {
            const auto domain = resolve_space(cells[i].first);
            const auto host = resolve_space(cells[i].second);
            row.domain = domain.key;
            row.host = host.key;
            row.size = domain.metric.size();
            row.r = min_distortion_exact(domain.metric, host.metric, budget);
            row.ok = true;
            row.status = "ok";
        } catch (const std::exception& ex) {
            if (row.domain.empty()) row.domain = cells[i].first.dump();
            if (row.host.empty()) row.host = cells[i].second.dump();
            row.status = std::string("error: ") + ex.what();
        }
        return row;
    });
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return std::tie(a.host, a.size, a.domain) < std::tie(b.host, b.size, b.domain);
    });
    Csv csv({"domain", "host", "N", "lower", "upper", "certificate", "complete", "status", "D_N"});
    std::string current;
    double running = 1.0;
    for (const auto& row : rows) {
        if (row.host != current) {
            current = row.host;
            running = 1.0;
        }
        if (row.ok) running = std::max(running, row.r.lower);
        csv.add({row.domain, row.host, std::to_string(row.size), row.ok ? format_real(row.r.lower) : "",
                 row.ok ? format_real(row.r.upper) : "", row.ok ? to_string(row.r.certificate) : "",
                 row.ok ? flag(row.r.complete) : "", row.status, format_real(running)});
    }
    Outcome out;
    out.files["results.csv"] = csv.text();
    out.summary["cells"] = rows.size();
    return out;
}

Outcome dispatch(const std::string& command, const json& config) {
    if (command == "gen") return cmd_gen(config);
    if (command == "distortion") return cmd_distortion(config);
    if (command == "l2-distortion") return cmd_l2(config);
    if (command == "invariant") return cmd_invariant(config);
    if (command == "dichotomy-fit") return cmd_dichotomy_fit(config);
    if (command == "heta") return cmd_heta(config);
    if (command == "forks") return cmd_forks(config);
    if (command == "b4-search") return cmd_b4(config);
    if (command == "sweep") return cmd_sweep(config);
    throw ConfigError("unknown command '" + command + "'");
}

}  // namespace

json parse_space_spec(const std::string& text) {
    if (text.empty()) throw ConfigError("empty space spec");
    if (text[0] == '@') return json{{"file", text.substr(1)}};
    json out;
    const auto colon = text.find(':');
    out["kind"] = text.substr(0, colon);
    if (colon == std::string::npos) return out;
    std::stringstream rest(text.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError("space spec item '" + item + "' is not key=value");
        const auto key = item.substr(0, eq), value = item.substr(eq + 1);
        try {
            std::size_t used = 0;
            if (value.find_first_of(".eE") == std::string::npos) {
                const long v = std::stol(value, &used);
                if (used == value.size()) {
                    out[key] = v;
                    continue;
                }
            }
            const double v = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
            out[key] = v;
        } catch (const std::logic_error&) {
            throw ConfigError("space spec value '" + value + "' is not a number");
        }
    }
    return out;
}

int run(const json& config, std::ostream& log) {
    std::string command;
    fs::path dir = "out";
    try {
        if (!config.is_object()) throw ConfigError("config must be a JSON object");
        command = require<std::string>(config, "command");
        dir = get<std::string>(config, "output_dir", "out");
        Outcome outcome = dispatch(command, config);

        json inputs = config;
        inputs.erase("output_dir");
        ojson manifest;
        manifest["version"] = kVersion;
        manifest["command"] = command;
        manifest["input_digest"] = hex_digest(fnv1a(inputs.dump()));
        manifest["predicate_table"] = kPredicateTableVersion;
        manifest["seed"] = get<std::uint64_t>(config, "seed", 0);
        manifest["config"] = inputs;
        ojson outputs = ojson::object();
        for (const auto& [name, text] : outcome.files) outputs[name] = hex_digest(fnv1a(text));
        manifest["outputs"] = outputs;
        manifest["summary"] = outcome.summary;
        manifest["exit_code"] = outcome.code;

        fs::create_directories(dir);
        for (const auto& [name, text] : outcome.files) write_file(dir / name, text);
        write_file(dir / "manifest.json", manifest.dump(2) + "\n");
        if (outcome.code == budget_exhausted) log << "budget exhausted before a result was found\n";
        return outcome.code;
    } catch (const BudgetExceeded& e) {
        log << "budget exhausted: " << e.what() << "\n";
        return budget_exhausted;
    } catch (const InvariantViolation& e) {
        log << "internal invariant violated: " << e.what() << "\n";
        return invariant_violation;
    } catch (const std::invalid_argument& e) {
        log << "invalid config: " << e.what() << "\n";
        return invalid_config;
    } catch (const json::exception& e) {
        log << "invalid config: " << e.what() << "\n";
        return invalid_config;
    } catch (const std::length_error& e) {
        log << "budget exhausted: " << e.what() << "\n";
        return budget_exhausted;
    } catch (const std::exception& e) {
        log << "internal error: " << e.what() << "\n";
        return invariant_violation;
    }
}

}  // namespace metdich::app
