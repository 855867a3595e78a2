#include "tauq/config.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace tauq {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    for (const auto& item : obj.items()) {
        if (!allowed.count(item.key()))
            throw ConfigError("config: unknown key \"" + item.key() + "\" in " + where);
    }
}

double get_number(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw ConfigError("config: missing key \"" + key + "\" in " + where);
    if (!obj[key].is_number()) throw ConfigError("config: \"" + key + "\" must be a number");
    return obj[key].get<double>();
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config: top level must be an object");
    require_keys(root, "top level", {"preset", "tau", "t", "grid", "n_sweep", "mc", "levy", "out"});

    ExperimentConfig cfg;
    if (!root.contains("preset") || !root["preset"].is_string())
        throw ConfigError("config: \"preset\" (string) is required");
    cfg.preset = root["preset"].get<std::string>();

    cfg.tau = get_number(root, "tau", "top level");
    if (cfg.tau < 0.0 || cfg.tau > 1.0) throw ConfigError("config: tau must lie in [0,1]");

    cfg.t = get_number(root, "t", "top level");
    if (!(cfg.t > 0.0)) throw ConfigError("config: t must be positive");

    if (!root.contains("grid") || !root["grid"].is_object())
        throw ConfigError("config: \"grid\" object is required");
    const json& grid = root["grid"];
    require_keys(grid, "grid", {"min", "max", "points"});
    cfg.grid_min = get_number(grid, "min", "grid");
    cfg.grid_max = get_number(grid, "max", "grid");
    if (!(cfg.grid_max > cfg.grid_min)) throw ConfigError("config: grid.max must exceed grid.min");
    if (!grid.contains("points") || !grid["points"].is_number_integer())
        throw ConfigError("config: grid.points (integer) is required");
    cfg.grid_points = grid["points"].get<int>();
    if (cfg.grid_points < 16 || cfg.grid_points > 2048)
        throw ConfigError("config: grid.points must lie in [16, 2048]");

    if (root.contains("n_sweep")) {
        if (!root["n_sweep"].is_array() || root["n_sweep"].empty())
            throw ConfigError("config: n_sweep must be a non-empty array");
        for (const auto& v : root["n_sweep"]) {
            if (!v.is_number_integer() || v.get<int>() < 1)
                throw ConfigError("config: n_sweep entries must be positive integers");
            cfg.n_sweep.push_back(v.get<int>());
        }
    }

    if (root.contains("mc")) {
        const json& mc = root["mc"];
        if (!mc.is_object()) throw ConfigError("config: mc must be an object");
        require_keys(mc, "mc", {"paths", "steps", "seed"});
        McParams p;
        if (!mc.contains("paths") || !mc["paths"].is_number_integer() || mc["paths"].get<long long>() < 100)
            throw ConfigError("config: mc.paths (integer >= 100) is required");
        p.paths = mc["paths"].get<std::uint64_t>();
        if (!mc.contains("steps") || !mc["steps"].is_number_integer() || mc["steps"].get<int>() < 1)
            throw ConfigError("config: mc.steps (integer >= 1) is required");
        p.steps = mc["steps"].get<int>();
        if (!mc.contains("seed") || !mc["seed"].is_number_integer())
            throw ConfigError("config: mc.seed (integer) is required");
        p.seed = mc["seed"].get<std::uint64_t>();
        cfg.mc = p;
    }

    if (root.contains("levy")) {
        if (!root["levy"].is_array()) throw ConfigError("config: levy must be an array");
        for (const auto& atom : root["levy"]) {
            if (!atom.is_object()) throw ConfigError("config: levy atoms must be objects");
            require_keys(atom, "levy atom", {"y", "w"});
            const double y = get_number(atom, "y", "levy atom");
            const double w = get_number(atom, "w", "levy atom");
            if (y == 0.0) throw ConfigError("config: levy atom at the origin");
            if (!(w > 0.0)) throw ConfigError("config: levy weight must be positive");
            cfg.levy.emplace_back(y, w);
        }
    }

    if (root.contains("out")) {
        if (!root["out"].is_string()) throw ConfigError("config: out must be a string");
        cfg.out = root["out"].get<std::string>();
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

HamiltonSymbol ExperimentConfig::build_symbol() const {
    std::optional<LevySpec> spec;
    if (!levy.empty()) {
        std::vector<LevyAtom> atoms;
        atoms.reserve(levy.size());
        for (const auto& [y, w] : levy) atoms.push_back({vec1(y), w});
        spec = LevySpec(1, std::move(atoms));
    }
    return make_preset(preset, std::move(spec));
}

GridSpec ExperimentConfig::build_grid() const { return GridSpec::line(grid_min, grid_max, grid_points); }

}  // namespace tauq
