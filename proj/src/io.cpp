#include "radialwave/io.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace radialwave {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_initial_data_csv(std::ostream& os, const SimConfig& cfg, const InitialData& data) {
    os << "t0,n,q,k\n";
    os << format_g17(data.t0) << ',' << cfg.params.n << ',' << format_g17(cfg.params.q) << ','
       << cfg.params.k << '\n';
    os << "r,u,ut\n";
    for (size_t i = 0; i < data.u.size(); ++i) {
        double r = cfg.r_max * double(i) / (data.u.size() - 1);
        os << format_g17(r) << ',' << format_g17(data.u[i]) << ',' << format_g17(data.ut[i])
           << '\n';
    }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

double to_double(const std::string& s) {
    try {
        return std::stod(s);
    } catch (...) {
        throw ConfigError("CSV: cannot parse number '" + s + "'");
    }
}

} // namespace

InitialDataFile read_initial_data_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || split_csv(line) != std::vector<std::string>{"t0", "n", "q", "k"})
        throw ConfigError("initial data CSV: expected header t0,n,q,k");
    if (!std::getline(is, line)) throw ConfigError("initial data CSV: missing value row");
    auto vals = split_csv(line);
    if (vals.size() != 4) throw ConfigError("initial data CSV: bad value row");
    InitialDataFile f{ModelParams(int(to_double(vals[1])), to_double(vals[2]),
                                  int(to_double(vals[3]))),
                      {}};
    f.data.t0 = to_double(vals[0]);
    if (!std::getline(is, line) || split_csv(line) != std::vector<std::string>{"r", "u", "ut"})
        throw ConfigError("initial data CSV: expected column header r,u,ut");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto row = split_csv(line);
        if (row.size() != 3) throw ConfigError("initial data CSV: bad data row");
        f.data.u.push_back(to_double(row[1]));
        f.data.ut.push_back(to_double(row[2]));
    }
    if (f.data.u.size() < 2) throw ConfigError("initial data CSV: too few rows");
    return f;
}

void write_field_csv(std::ostream& os, const SimState& st) {
    os << "t,r,u\n";
    for (const auto& [t, u] : st.snapshots)
        for (size_t i = 0; i < u.size(); ++i)
            os << format_g17(t) << ',' << format_g17(st.r[i]) << ',' << format_g17(u[i])
               << '\n';
}

void write_energy_csv(std::ostream& os, const SimState& st) {
    os << "t,E\n";
    for (auto [t, E] : st.energy_history)
        os << format_g17(t) << ',' << format_g17(E) << '\n';
}

void write_convergence_csv(std::ostream& os, const ConvergenceReport& rep) {
    os << "N,L2,Linf\n";
    for (size_t i = 0; i < rep.resolutions.size(); ++i)
        os << rep.resolutions[i] << ',' << format_g17(rep.l2[i]) << ','
           << format_g17(rep.linf[i]) << '\n';
}

void write_quadrature_csv(std::ostream& os,
                          const std::vector<std::pair<double, double>>& rows) {
    os << "v,x\n";
    for (auto [v, x] : rows) os << format_g17(v) << ',' << format_g17(x) << '\n';
}

RunFileConfig parse_run_config(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config: JSON object expected");
    if (!j.contains("schema") || !j["schema"].is_number_integer() || j["schema"] != 1)
        throw ConfigError("config: missing or unsupported \"schema\" (expected 1)");
    static const std::set<std::string> known = {
        "schema", "n", "q", "k", "family", "c", "c_tilde", "branch", "t0",
        "t_end", "r_max", "N", "cfl", "boundary", "blowup_threshold",
        "energy_stride", "seed"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            throw ConfigError("config: unknown key \"" + it.key() + "\"");
    RunFileConfig c;
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j[key].get<std::decay_t<decltype(field)>>();
    };
    get("n", c.n);
    get("q", c.q);
    get("k", c.k);
    get("family", c.family);
    get("c", c.c);
    get("c_tilde", c.c_tilde);
    get("branch", c.branch);
    get("t0", c.t0);
    get("t_end", c.t_end);
    get("r_max", c.r_max);
    get("N", c.N);
    get("cfl", c.cfl);
    get("boundary", c.boundary);
    get("blowup_threshold", c.blowup_threshold);
    get("energy_stride", c.energy_stride);
    get("seed", c.seed);
    return c;
}

} // namespace radialwave
