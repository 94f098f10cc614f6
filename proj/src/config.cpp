#include "rotwave/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace rotwave {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::vector<std::string>& known,
                    const std::string& block) {
    std::string bad;
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            bad += (bad.empty() ? "" : ", ") + it.key();
    if (!bad.empty()) throw ConfigError("unknown key(s) in " + block + ": " + bad);
}

std::complex<double> complex_of(const json& j, const std::string& name) {
    if (!j.is_array() || j.size() != 2)
        throw ConfigError("model parameter " + name + " must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

RunConfig parse_config_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    reject_unknown(j, {"model", "pde", "spectral", "decay", "out_dir"}, "config root");
    RunConfig cfg;
    if (j.contains("model")) {
        const json& m = j["model"];
        reject_unknown(m, {"name", "alpha", "beta", "gamma", "delta"}, "model");
        if (m.contains("name")) cfg.model_name = m["name"].get<std::string>();
        if (m.contains("alpha")) cfg.params.alpha = complex_of(m["alpha"], "alpha");
        if (m.contains("beta")) cfg.params.beta = complex_of(m["beta"], "beta");
        if (m.contains("gamma")) cfg.params.gamma = complex_of(m["gamma"], "gamma");
        if (m.contains("delta")) cfg.params.delta = complex_of(m["delta"], "delta");
    }
    if (j.contains("pde")) {
        const json& p = j["pde"];
        reject_unknown(p, {"R", "dx", "dt", "t_sim", "t_freeze", "scheme"}, "pde");
        if (p.contains("R")) cfg.R = p["R"].get<double>();
        if (p.contains("dx")) cfg.dx = p["dx"].get<double>();
        if (p.contains("dt")) cfg.dt = p["dt"].get<double>();
        if (p.contains("t_sim")) cfg.t_sim = p["t_sim"].get<double>();
        if (p.contains("t_freeze")) cfg.t_freeze = p["t_freeze"].get<double>();
        if (p.contains("scheme")) {
            std::string s = p["scheme"].get<std::string>();
            if (s == "imex_euler")
                cfg.scheme = Scheme::imex_euler;
            else if (s == "imex_bdf2")
                cfg.scheme = Scheme::imex_bdf2;
            else
                throw ConfigError("unknown scheme: " + s);
        }
    }
    if (j.contains("spectral")) {
        const json& s = j["spectral"];
        reject_unknown(s, {"sigma", "neigs", "krylov_dim", "tol"}, "spectral");
        if (s.contains("sigma")) cfg.sigma = s["sigma"].get<double>();
        if (s.contains("neigs")) cfg.neigs = s["neigs"].get<int>();
        if (s.contains("krylov_dim")) cfg.krylov_dim = s["krylov_dim"].get<int>();
        if (s.contains("tol")) cfg.tol = s["tol"].get<double>();
    }
    if (j.contains("decay")) {
        const json& d = j["decay"];
        reject_unknown(d, {"window", "direction", "p_list", "eps"}, "decay");
        if (d.contains("window")) {
            if (!d["window"].is_array() || d["window"].size() != 2)
                throw ConfigError("decay.window must be [lo, hi]");
            cfg.window_lo = d["window"][0].get<double>();
            cfg.window_hi = d["window"][1].get<double>();
        }
        if (d.contains("direction")) {
            if (!d["direction"].is_array() || d["direction"].size() != 2)
                throw ConfigError("decay.direction must be [x, y]");
            cfg.dir_x = d["direction"][0].get<double>();
            cfg.dir_y = d["direction"][1].get<double>();
        }
        if (d.contains("p_list")) cfg.p_list = d["p_list"].get<std::vector<double>>();
        if (d.contains("eps")) cfg.eps = d["eps"].get<double>();
    }
    if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();
    validate(cfg);
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    if (path.empty()) {
        RunConfig cfg;
        validate(cfg);
        return cfg;
    }
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("invalid JSON in " + path + ": " + e.what());
    }
    return parse_config_json(j);
}

void validate(const RunConfig& cfg) {
    if (cfg.model_name != "qcgl") throw ConfigError("unknown model: " + cfg.model_name);
    if (!(cfg.R > 0.0)) throw ConfigError("pde.R must be positive");
    if (!(cfg.dx > 0.0)) throw ConfigError("pde.dx must be positive");
    double ratio = 2.0 * cfg.R / cfg.dx;
    if (std::abs(ratio - std::lround(ratio)) > 1e-9 ||
        std::lround(ratio) % 2 != 0)
        throw ConfigError("2R/dx must be an even integer (origin must be a node)");
    if (!(cfg.dt > 0.0)) throw ConfigError("pde.dt must be positive");
    if (!(cfg.t_sim >= 0.0)) throw ConfigError("pde.t_sim must be nonnegative");
    if (!(cfg.t_freeze >= cfg.t_sim)) throw ConfigError("pde.t_freeze must be >= t_sim");
    if (cfg.neigs < 1) throw ConfigError("spectral.neigs must be >= 1");
    if (!(cfg.tol > 0.0)) throw ConfigError("spectral.tol must be positive");
    if (!(cfg.window_lo < cfg.window_hi)) throw ConfigError("decay.window must be increasing");
    if (cfg.dir_x == 0.0 && cfg.dir_y == 0.0)
        throw ConfigError("decay.direction must be nonzero");
    if (!(cfg.eps > 0.0 && cfg.eps < 1.0)) throw ConfigError("decay.eps must lie in (0, 1)");
    for (double p : cfg.p_list)
        if (!(p >= 1.0)) throw ConfigError("decay.p_list entries must be >= 1");
}

nlohmann::json config_to_json(const RunConfig& cfg) {
    json j;
    j["model"] = {{"name", cfg.model_name},
                  {"alpha", {cfg.params.alpha.real(), cfg.params.alpha.imag()}},
                  {"beta", {cfg.params.beta.real(), cfg.params.beta.imag()}},
                  {"gamma", {cfg.params.gamma.real(), cfg.params.gamma.imag()}},
                  {"delta", {cfg.params.delta.real(), cfg.params.delta.imag()}}};
    j["pde"] = {{"R", cfg.R},
                {"dx", cfg.dx},
                {"dt", cfg.dt},
                {"t_sim", cfg.t_sim},
                {"t_freeze", cfg.t_freeze},
                {"scheme", cfg.scheme == Scheme::imex_bdf2 ? "imex_bdf2" : "imex_euler"}};
    j["spectral"] = {
        {"sigma", cfg.sigma}, {"neigs", cfg.neigs}, {"krylov_dim", cfg.krylov_dim}, {"tol", cfg.tol}};
    j["decay"] = {{"window", {cfg.window_lo, cfg.window_hi}},
                  {"direction", {cfg.dir_x, cfg.dir_y}},
                  {"p_list", cfg.p_list},
                  {"eps", cfg.eps}};
    j["out_dir"] = cfg.out_dir;
    return j;
}

std::string config_hash(const RunConfig& cfg) {
    std::string s = config_to_json(cfg).dump();
    uint64_t h = 1469598103934665603ull;  // FNV-1a 64
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

}  // namespace rotwave
