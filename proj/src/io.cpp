#include "rootb/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace rootb::io {

using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out.precision(17);
    return out;
}

} // namespace

std::string measure_to_json(const ProbabilityMeasure& m) {
    json j;
    switch (m.kind()) {
    case MeasureKind::Atomic: {
        j["kind"] = "atomic";
        auto atoms = json::array();
        for (std::size_t i = 0; i < m.atom_positions().size(); ++i)
            atoms.push_back({m.atom_positions()[i], m.atom_masses()[i]});
        j["atoms"] = std::move(atoms);
        break;
    }
    case MeasureKind::Gaussian:
        j["kind"] = "gaussian";
        j["mean"] = m.param1();
        j["variance"] = m.param2();
        break;
    case MeasureKind::Lognormal:
        j["kind"] = "lognormal";
        j["log_mean"] = m.param1();
        j["log_variance"] = m.param2();
        break;
    case MeasureKind::Uniform:
        j["kind"] = "uniform";
        j["lo"] = m.param1();
        j["hi"] = m.param2();
        break;
    }
    return j.dump();
}

ProbabilityMeasure measure_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad measure JSON: ") + e.what());
    }
    const std::string kind = j.value("kind", "");
    if (kind == "atomic") {
        std::vector<std::pair<double, double>> atoms;
        for (const auto& a : j.at("atoms")) atoms.emplace_back(a.at(0), a.at(1));
        return ProbabilityMeasure::atomic(std::move(atoms));
    }
    if (kind == "dirac") return ProbabilityMeasure::dirac(j.at("location"));
    if (kind == "gaussian") return ProbabilityMeasure::gaussian(j.at("mean"), j.at("variance"));
    if (kind == "lognormal")
        return ProbabilityMeasure::lognormal(j.at("log_mean"), j.at("log_variance"));
    if (kind == "uniform") return ProbabilityMeasure::uniform(j.at("lo"), j.at("hi"));
    if (kind == "empirical") {
        std::vector<double> samples;
        for (const auto& s : j.at("samples")) samples.push_back(s);
        return ProbabilityMeasure::empirical(std::move(samples));
    }
    throw ConfigError("unknown measure kind '" + kind + "'");
}

std::pair<std::vector<double>, std::vector<double>> read_market_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty market CSV");
    std::vector<double> strikes, prices;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw ConfigError("bad market CSV row: " + line);
        strikes.push_back(std::stod(line.substr(0, comma)));
        prices.push_back(std::stod(line.substr(comma + 1)));
    }
    return {std::move(strikes), std::move(prices)};
}

void write_barrier_csv(const std::string& path, const RootBarrier& b) {
    auto out = open_out(path);
    out << "x,f\n";
    for (std::size_t j = 0; j < b.xs().size(); ++j) {
        out << b.xs()[j] << ',';
        if (b.is_inf(j))
            out << "inf\n";
        else
            out << b.f()[j] << '\n';
    }
}

RootBarrier read_barrier_csv(const std::string& path, double sentinel) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty barrier CSV");
    std::vector<double> xs, f;
    double max_finite = 0.0;
    std::vector<std::size_t> inf_rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw ConfigError("bad barrier CSV row: " + line);
        xs.push_back(std::stod(line.substr(0, comma)));
        const std::string val = line.substr(comma + 1);
        if (val == "inf" || val == "Inf" || val == "INF") {
            inf_rows.push_back(f.size());
            f.push_back(0.0);
        } else {
            f.push_back(std::stod(val));
            max_finite = std::max(max_finite, f.back());
        }
    }
    sentinel = std::max({sentinel, 1.0, 2.0 * max_finite});
    for (std::size_t i : inf_rows) f[i] = sentinel;
    return RootBarrier(std::move(xs), std::move(f), sentinel, BarrierProvenance::Manual);
}

void write_solution_csv(const std::string& path, const PdeSolution& sol, int time_stride) {
    auto out = open_out(path);
    out << "t,x,u\n";
    const auto xs = sol.grid.xs();
    const int stride = std::max(1, time_stride);
    for (int n = 0; n <= sol.grid.n_t; n += stride) {
        const double t = n * sol.grid.dt();
        for (int j = 0; j < sol.grid.n_x + 2; ++j)
            out << t << ',' << xs[j] << ',' << sol.at(n, j) << '\n';
    }
}

void write_meta_json(const std::string& path, const PdeSolution& sol, double cfl_ratio,
                     int solution_stride, const std::string& kernels_isa) {
    json j;
    switch (sol.kind) {
    case PdeKind::Obstacle: j["kind"] = "obstacle"; break;
    case PdeKind::Penalized: j["kind"] = "penalized"; break;
    case PdeKind::Heat: j["kind"] = "heat"; break;
    case PdeKind::Rost: j["kind"] = "rost"; break;
    }
    j["a"] = sol.grid.a;
    j["b"] = sol.grid.b;
    j["n_x"] = sol.grid.n_x;
    j["n_t"] = sol.grid.n_t;
    j["T"] = sol.grid.T;
    j["cfl_ratio"] = cfl_ratio;
    j["sigma"] = sol.sigma_id;
    j["solution_stride"] = solution_stride;
    j["kernels"] = kernels_isa;
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

void write_report_json(const std::string& path, const EmbeddingReport& rep, double threshold) {
    json j;
    j["n_paths"] = rep.n_paths;
    j["seed"] = rep.seed;
    j["stopped"] = rep.tau_samples.size();
    j["unstopped_fraction"] = rep.unstopped_fraction;
    j["mean_tau"] = rep.mean_tau;
    j["second_moment_tau"] = rep.second_moment_tau;
    if (std::isfinite(rep.potential_distance)) j["potential_distance"] = rep.potential_distance;
    j["threshold"] = threshold;
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

void write_samples_csv(const std::string& path, const EmbeddingReport& rep) {
    auto out = open_out(path);
    out << "tau,x\n";
    for (std::size_t i = 0; i < rep.tau_samples.size(); ++i)
        out << rep.tau_samples[i] << ',' << rep.x_samples[i] << '\n';
}

namespace {

void flatten_json(const json& j, const std::string& prefix,
                  std::map<std::string, std::string>& out) {
    for (const auto& [key, value] : j.items()) {
        const std::string full = prefix.empty() ? key : prefix + "." + key;
        if (value.is_object())
            flatten_json(value, full, out);
        else if (value.is_string())
            out[full] = value.get<std::string>();
        else
            out[full] = value.dump();
    }
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

std::map<std::string, std::string> read_config(const std::string& path) {
    const std::string text = slurp(path);
    std::map<std::string, std::string> out;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::exception& e) {
            throw ConfigError(std::string("bad JSON config: ") + e.what());
        }
        flatten_json(j, "", out);
        return out;
    }
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("bad config line: " + line);
        out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

} // namespace rootb::io
