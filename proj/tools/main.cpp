#include "app.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using nlohmann::json;

enum class Kind { integer, real, text, integer_list, boolean };

struct Flag {
    const char* name;      // "--max-nodes"
    const char* key;       // "budget.max_nodes"
    Kind kind;
    const char* help;
};

// Flags shared by every subcommand.
const Flag kCommon[] = {
    {"--out", "output_dir", Kind::text, "output directory (default: out)"},
    {"--seed", "seed", Kind::integer, "random seed for heuristic modes"},
};

struct Command {
    const char* name;
    const char* help;
    std::vector<Flag> flags;
};

const Command kCommands[] = {
    {"gen",
     "write a generated metric space in the matrix text format",
     {{"--family", "family", Kind::text, "space spec, e.g. path:n=4, cube:n=3, heta:depth=3,eta=0.5, @file.txt"}}},
    {"distortion",
     "exact least distortion of one space into another by branch and bound",
     {{"--domain", "domain", Kind::text, "domain space spec"},
      {"--host", "host", Kind::text, "host space spec"},
      {"--max-nodes", "budget.max_nodes", Kind::integer, "search node budget"}}},
    {"l2-distortion",
     "certified bounds on the least distortion into Euclidean space",
     {{"--space", "space", Kind::text, "space spec (at most 64 points)"},
      {"--tol", "tol", Kind::real, "relative gap at which the solver stops (default 1e-6)"},
      {"--max-iterations", "budget.max_iterations", Kind::integer, "interior-point iteration cap (default 200)"}}},
    {"invariant",
     "path, cube, torus and metric en-cotype functionals of a host",
     {{"--kind", "kind", Kind::text, "psi, type, gamma or metric-en-cotype"},
      {"--host", "host", Kind::text, "host space spec"},
      {"--n", "n_list", Kind::integer_list, "values of n (comma separated)"},
      {"--m", "m_list", Kind::integer_list, "torus sides for gamma (even, comma separated)"},
      {"--q", "q", Kind::real, "cotype exponent for metric-en-cotype (default 2)"},
      {"--shift", "shift", Kind::real, "gamma axis shift exponent (default 1)"},
      {"--scale", "scale", Kind::real, "gamma right-hand exponent (default 2)"},
      {"--max-maps", "budget.max_maps", Kind::integer, "largest map count evaluated exhaustively"},
      {"--restarts", "budget.restarts", Kind::integer, "local search restarts in heuristic mode"},
      {"--exact-only", "budget.allow_heuristic", Kind::boolean, "fail instead of falling back to heuristics"}}},
    {"dichotomy-fit",
     "decay exponent beta with n0^-beta = eta and the implied distortion bounds",
     {{"--n0", "n0", Kind::integer, "base size n0 >= 2"},
      {"--eta", "eta", Kind::real, "functional value at n0"},
      {"--k-max", "k_max", Kind::integer, "largest power of n0 tabulated (default 5)"}}},
    {"heta",
     "write the contracted tree host and check it",
     {{"--depth", "depth", Kind::integer, "depth cap"}, {"--eta", "eta", Kind::real, "horizontal factor in (0,1]"}}},
    {"forks",
     "enumerate delta-forks of a space; heta hosts are classified",
     {{"--space", "space", Kind::text, "space spec"},
      {"--delta", "delta", Kind::real, "fork tolerance"},
      {"--allow-degenerate", "distinct_prongs", Kind::boolean, "include forks with z = w"}}},
    {"b4-search",
     "least distortion of vertically faithful embeddings of B_4 into the contracted tree",
     {{"--depth", "depth", Kind::integer, "host depth (default 6)"},
      {"--eta", "eta", Kind::real, "horizontal factor"},
      {"--delta", "delta", Kind::real, "faithfulness slack"},
      {"--tree-depth", "tree_depth", Kind::integer, "depth of the embedded tree (default 4)"},
      {"--max-nodes", "budget.max_nodes", Kind::integer, "search node budget"}}},
    {"sweep",
     "exact distortion over a grid of domains and hosts with running D_N",
     {{"--family", "grid.family", Kind::text, "domain family spec; n comes from --n"},
      {"--n", "grid.n", Kind::integer_list, "domain sizes"},
      {"--host", "grid.hosts", Kind::text, "host space spec"},
      {"--max-nodes", "budget.max_nodes", Kind::integer, "search node budget per cell"}}},
};

json& at_path(json& root, const std::string& dotted) {
    json* node = &root;
    std::size_t start = 0;
    while (true) {
        const auto dot = dotted.find('.', start);
        const auto part = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        node = &(*node)[part];
        if (dot == std::string::npos) return *node;
        start = dot + 1;
    }
}

json convert(const Flag& f, const std::string& value) {
    switch (f.kind) {
        case Kind::integer: return std::stoll(value);
        case Kind::real: return std::stod(value);
        case Kind::text: return value;
        case Kind::boolean: return true;
        case Kind::integer_list: {
            json list = json::array();
            std::stringstream in(value);
            std::string item;
            while (std::getline(in, item, ',')) list.push_back(std::stoll(item));
            return list;
        }
    }
    return value;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App cli{"Metric dichotomy experiments: embeddings, distortion bounds and functional invariants.\n"
                 "Thread count comes from METDICH_THREADS. Exit codes: 0 ok, 2 invalid config,\n"
                 "3 budget exhausted without a result, 4 internal invariant violation."};
    cli.require_subcommand(1);

    struct Bound {
        const Flag* flag;
        CLI::Option* option;
        std::string value;
    };
    std::vector<std::pair<CLI::App*, std::vector<std::unique_ptr<Bound>>>> subs;
    std::vector<std::string> config_paths(std::size(kCommands));

    for (std::size_t c = 0; c < std::size(kCommands); ++c) {
        const auto& cmd = kCommands[c];
        auto* sub = cli.add_subcommand(cmd.name, cmd.help);
        sub->add_option("--config", config_paths[c], "JSON config file; flags override its keys");
        std::vector<std::unique_ptr<Bound>> bound;
        auto bind = [&](const Flag& f) {
            auto b = std::make_unique<Bound>();
            b->flag = &f;
            if (f.kind == Kind::boolean)
                b->option = sub->add_flag(f.name, f.help);
            else
                b->option = sub->add_option(f.name, b->value, f.help);
            bound.push_back(std::move(b));
        };
        for (const auto& f : kCommon) bind(f);
        for (const auto& f : cmd.flags) bind(f);
        subs.emplace_back(sub, std::move(bound));
    }

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = cli.exit(e);
        return code == 0 ? 0 : metdich::app::invalid_config;
    }

    for (std::size_t c = 0; c < subs.size(); ++c) {
        auto& [sub, bound] = subs[c];
        if (!sub->parsed()) continue;
        json config = json::object();
        try {
            if (!config_paths[c].empty()) {
                std::ifstream in(config_paths[c]);
                if (!in) throw std::invalid_argument("cannot read " + config_paths[c]);
                config = json::parse(in);
            }
            config["command"] = kCommands[c].name;
            for (const auto& b : bound) {
                if (b->option->count() == 0) continue;
                json value = convert(*b->flag, b->value);
                const std::string key = b->flag->key;
                // Boolean flags map onto their config sense.
                if (key == "budget.allow_heuristic" || key == "distinct_prongs") value = false;
                if (key == "grid.hosts") value = json::array({value});
                at_path(config, key) = value;
            }
        } catch (const std::exception& e) {
            std::cerr << "invalid config: " << e.what() << "\n";
            return metdich::app::invalid_config;
        }
        return metdich::app::run(config, std::cerr);
    }
    return metdich::app::invalid_config;
}
