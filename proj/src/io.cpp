#include "rotwave/io.hpp"

#include "rotwave/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace rotwave {

namespace fs = std::filesystem;

void write_field_csv(const std::string& path, const Field& field, const std::string& hash) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << "# config_hash=" << hash << " version=" << kVersion << "\n";
    out << "x,y";
    for (int c = 0; c < field.ncomp; ++c) out << ",u" << (c + 1);
    out << "\n";
    char buf[64];
    const Grid2D& g = field.grid;
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g", g.coord(i), g.coord(j));
            out << buf;
            for (int c = 0; c < field.ncomp; ++c) {
                std::snprintf(buf, sizeof buf, ",%.17g", field.at(i, j, c));
                out << buf;
            }
            out << "\n";
        }
}

Field read_field_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    std::string line;
    std::vector<std::vector<double>> rows;
    int ncols = -1;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'x') continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) row.push_back(std::stod(tok));
        if (ncols < 0) ncols = static_cast<int>(row.size());
        if (static_cast<int>(row.size()) != ncols)
            throw ConfigError("ragged CSV row in " + path);
        rows.push_back(std::move(row));
    }
    if (rows.empty() || ncols < 3) throw ConfigError("no field data in " + path);

    std::set<double> xs;
    for (const auto& r : rows) xs.insert(r[0]);
    const int n = static_cast<int>(xs.size());
    if (n < 2 || static_cast<int>(rows.size()) != n * n)
        throw ConfigError("field in " + path + " is not a full square grid");
    std::vector<double> xv(xs.begin(), xs.end());
    double dx = xv[1] - xv[0];
    Grid2D g = Grid2D::make(-xv.front(), dx);
    if (g.n != n) throw ConfigError("grid in " + path + " is not origin-centered uniform");

    Field f = Field::zeros(g, ncols - 2);
    for (const auto& r : rows) {
        int i = static_cast<int>(std::lround((r[0] + g.half_width) / g.dx));
        int j = static_cast<int>(std::lround((r[1] + g.half_width) / g.dx));
        for (int c = 0; c + 2 < ncols; ++c) f.at(i, j, c) = r[c + 2];
    }
    return f;
}

void write_json(const std::string& path, nlohmann::json payload, const std::string& hash) {
    payload["meta"] = {{"config_hash", hash}, {"version", kVersion}};
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << payload.dump(2) << "\n";
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("invalid JSON in " + path + ": " + e.what());
    }
    return j;
}

nlohmann::json frame_to_json(const FreezeState& state, const Frame& frame) {
    return {{"S12", state.S12},
            {"tau", {state.tau(0), state.tau(1)}},
            {"x_star", {frame.x_star(0), frame.x_star(1)}},
            {"sigma1", frame.sigma1},
            {"period", frame.period},
            {"t", state.t},
            {"residual", state.residual}};
}

DirLock::DirLock(const std::string& dir) {
    fs::create_directories(dir);
    path_ = (fs::path(dir) / ".rotwave.lock").string();
    std::FILE* f = std::fopen(path_.c_str(), "wx");
    if (!f)
        throw ConfigError("output directory " + dir +
                          " is locked by another run (stale? remove .rotwave.lock)");
    std::fclose(f);
}

DirLock::~DirLock() {
    std::error_code ec;
    fs::remove(path_, ec);
}

}  // namespace rotwave
