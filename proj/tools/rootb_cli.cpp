// Command-line front end: solve an obstacle problem and export its Root
// barrier, verify a barrier by simulation, or price a variance option from a
// call chain.

#include <CLI11.hpp>

#include "rootb/barrier.hpp"
#include "rootb/embed_mc.hpp"
#include "rootb/io.hpp"
#include "rootb/kernels.hpp"
#include "rootb/pde.hpp"
#include "rootb/pricing.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

using namespace rootb;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitVerifyFailed = 4;
constexpr int kExitArbitrage = 5;

using ConfigMap = std::map<std::string, std::string>;

std::string require(const ConfigMap& cfg, const std::string& key) {
    auto it = cfg.find(key);
    if (it == cfg.end()) throw ConfigError("missing config key '" + key + "'");
    return it->second;
}

std::optional<std::string> maybe(const ConfigMap& cfg, const std::string& key) {
    auto it = cfg.find(key);
    if (it == cfg.end()) return std::nullopt;
    return it->second;
}

double get_num(const ConfigMap& cfg, const std::string& key) {
    return std::stod(require(cfg, key));
}

double get_num_or(const ConfigMap& cfg, const std::string& key, double fallback) {
    auto v = maybe(cfg, key);
    return v ? std::stod(*v) : fallback;
}

ProbabilityMeasure measure_from_config(const ConfigMap& cfg, const std::string& key) {
    std::string spec = require(cfg, key);
    if (!spec.empty() && spec[0] == '@') {
        std::ifstream in(spec.substr(1));
        if (!in) throw ConfigError("cannot open measure file " + spec.substr(1));
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        return io::measure_from_json(text);
    }
    return io::measure_from_json(spec);
}

Sigma sigma_from_config(const ConfigMap& cfg) {
    const std::string spec = require(cfg, "problem.sigma");
    if (spec == "identity") return Sigma::identity();
    if (spec.rfind("table:", 0) == 0) {
        const auto [xs, vals] = io::read_market_csv(spec.substr(6)); // same 2-column layout
        return Sigma::table(xs, vals);
    }
    return Sigma::constant(std::stod(spec));
}

Grid grid_from_config(const ConfigMap& cfg, const Sigma& sigma) {
    const double a = get_num(cfg, "grid.a"), b = get_num(cfg, "grid.b");
    const double T = get_num(cfg, "grid.T");
    const double ssq = sigma.sup_sq(a, b);
    const auto n_x = maybe(cfg, "grid.n_x");
    const auto n_t = maybe(cfg, "grid.n_t");
    const auto ratio = maybe(cfg, "grid.cfl_ratio");
    if (n_x && n_t) return Grid::with_steps(a, b, std::stoi(*n_x), T, std::stoi(*n_t));
    if (n_t && ratio) return Grid::from_time_steps(a, b, T, std::stoi(*n_t), std::stod(*ratio), ssq);
    if (n_x && ratio) return Grid::from_spatial(a, b, std::stoi(*n_x), T, std::stod(*ratio), ssq);
    throw ConfigError("grid needs two of {n_x, n_t, cfl_ratio}");
}

HitRule hit_rule_from_config(const ConfigMap& cfg) {
    const auto rule = maybe(cfg, "mc.hit_rule");
    if (!rule || *rule == "linear") return HitRule::Linear;
    if (*rule == "min_neighbor") return HitRule::MinNeighbor;
    throw ConfigError("mc.hit_rule must be 'linear' or 'min_neighbor'");
}

int cmd_solve(const std::string& config_path, std::string out_dir) {
    ConfigMap cfg;
    ProbabilityMeasure mu = ProbabilityMeasure::dirac(0.0);
    ProbabilityMeasure nu = ProbabilityMeasure::dirac(0.0);
    Sigma sigma = Sigma::constant(1.0);
    Grid grid;
    double extract_tol = 1e-10;
    try {
        cfg = io::read_config(config_path);
        mu = measure_from_config(cfg, "problem.mu");
        nu = measure_from_config(cfg, "problem.nu");
        sigma = sigma_from_config(cfg);
        grid = grid_from_config(cfg, sigma);
        extract_tol = get_num_or(cfg, "extract.tol", 1e-10);
        if (out_dir.empty()) out_dir = maybe(cfg, "outputs.dir").value_or(".");
        fs::create_directories(out_dir);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    try {
        // dense when the full array is small enough to keep, else streaming
        const std::size_t cells =
            (static_cast<std::size_t>(grid.n_t) + 1) * (static_cast<std::size_t>(grid.n_x) + 2);
        RootBarrier barrier(std::vector<double>{0.0, 1.0}, std::vector<double>{0.0, 0.0}, 1.0,
                            BarrierProvenance::Manual);
        int stride = 1;
        if (cells <= 10'000'000) {
            auto sol = solve_obstacle(sigma, mu, nu, grid);
            barrier = extract_barrier(sol, nu, extract_tol);
            stride = std::max(1, grid.n_t / 200);
            io::write_solution_csv(out_dir + "/solution.csv", sol, stride);
            io::write_meta_json(out_dir + "/meta.json", sol,
                                get_num_or(cfg, "grid.cfl_ratio", 0.0), stride,
                                kern::active().name);
        } else {
            auto stream = solve_obstacle_streaming(sigma, mu, nu, grid, extract_tol);
            barrier = extract_barrier(stream);
            PdeSolution final_only;
            final_only.grid = grid;
            final_only.grid.n_t = 0;
            final_only.kind = PdeKind::Obstacle;
            final_only.sigma_id = sigma.id();
            final_only.values = stream.final_row;
            io::write_solution_csv(out_dir + "/solution.csv", final_only, 1);
            final_only.grid.n_t = grid.n_t;
            io::write_meta_json(out_dir + "/meta.json", final_only,
                                get_num_or(cfg, "grid.cfl_ratio", 0.0), 0, kern::active().name);
        }
        barrier = regularize(barrier, contact_set(mu, nu, grid.xs()));
        io::write_barrier_csv(out_dir + "/barrier.csv", barrier);
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return kExitSolver;
    }
    return kExitOk;
}

int cmd_verify(const std::string& config_path, const std::string& barrier_path,
               std::string out_dir) {
    ConfigMap cfg;
    ProbabilityMeasure nu = ProbabilityMeasure::dirac(0.0);
    SdeConfig mc;
    double threshold = 0.02;
    double ga = 0.0, gb = 0.0;
    try {
        cfg = io::read_config(config_path);
        nu = measure_from_config(cfg, "problem.nu");
        mc.sigma = sigma_from_config(cfg);
        mc.initial = measure_from_config(cfg, "problem.mu");
        mc.dt = get_num_or(cfg, "mc.dt", 1e-4);
        mc.t_max = get_num_or(cfg, "mc.t_max", 4.0 * get_num_or(cfg, "grid.T", 2.0));
        mc.n_paths = static_cast<std::int64_t>(get_num_or(cfg, "mc.n_paths", 100000));
        mc.seed = static_cast<std::uint64_t>(get_num_or(cfg, "mc.seed", 1));
        mc.hit_rule = hit_rule_from_config(cfg);
        threshold = get_num_or(cfg, "mc.threshold", 0.02);
        ga = get_num(cfg, "grid.a");
        gb = get_num(cfg, "grid.b");
        if (out_dir.empty()) out_dir = maybe(cfg, "outputs.dir").value_or(".");
        fs::create_directories(out_dir);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    try {
        // "inf" columns must stay out of reach of the simulation horizon
        auto barrier = io::read_barrier_csv(barrier_path, 2.0 * mc.t_max);
        auto rep = simulate_embedding(mc, barrier);
        std::vector<double> grid;
        const double lo = std::min(ga, barrier.xs().front());
        const double hi = std::max(gb, barrier.xs().back());
        for (int i = 0; i <= 200; ++i) grid.push_back(lo + (hi - lo) * i / 200.0);
        if (!rep.x_samples.empty())
            rep.potential_distance = embedding_distance(rep.x_samples, nu, grid);
        io::write_report_json(out_dir + "/report.json", rep, threshold);
        if (maybe(cfg, "outputs.samples"))
            io::write_samples_csv(out_dir + "/" + *maybe(cfg, "outputs.samples"), rep);
        if (!(rep.potential_distance <= threshold)) {
            std::cerr << "verification failed: potential_distance = " << rep.potential_distance
                      << " > " << threshold << " (unstopped_fraction = " << rep.unstopped_fraction
                      << ")\n";
            return kExitVerifyFailed;
        }
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return kExitSolver;
    }
    return kExitOk;
}

int cmd_price(const std::string& market_path, double maturity, double forward,
              const std::string& payoff_kind, double strike, const std::string& out_dir,
              std::int64_t n_paths, double mc_dt, std::uint64_t seed, int n_x, double horizon) {
    VariancePayoff payoff = VariancePayoff::identity();
    VarianceOptionSpec spec;
    try {
        if (payoff_kind == "call")
            payoff = VariancePayoff::call(strike);
        else if (payoff_kind != "identity")
            throw ConfigError("payoff must be 'call' or 'identity'");
        const auto [strikes, prices] = io::read_market_csv(market_path);
        spec = ingest_market(strikes, prices, maturity, forward, payoff);
    } catch (const ArbitrageDetected& e) {
        std::cerr << e.what() << '\n';
        return kExitArbitrage;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    try {
        PricingPdeParams pde;
        pde.n_x = n_x;
        pde.t_horizon = horizon;
        PricingMcParams mc;
        mc.n_paths = n_paths;
        mc.dt = mc_dt;
        mc.seed = seed;
        auto res = variance_bound_lower(spec, pde, mc);

        std::string barrier_csv;
        if (!out_dir.empty()) {
            fs::create_directories(out_dir);
            barrier_csv = out_dir + "/barrier.csv";
            io::write_barrier_csv(barrier_csv, res.barrier);
        }
        nlohmann::json j;
        j["bound"] = res.bound;
        j["stderr"] = res.stderr_;
        j["barrier_csv_path"] = barrier_csv;
        j["n_paths"] = n_paths;
        j["grid"] = {{"n_x", pde.n_x}, {"t_horizon", pde.t_horizon}};
        j["unstopped_fraction"] = res.report.unstopped_fraction;
        j["qv_mean"] = res.qv_mean;
        j["gbm_identity_discrepancy"] = res.gbm_identity_discrepancy;
        std::cout << j.dump(2) << '\n';
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return kExitSolver;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Root barriers of the Skorokhod embedding problem via the obstacle PDE"};
    app.require_subcommand(1);

    std::string config_path, barrier_path, out_dir;

    auto* solve = app.add_subcommand("solve", "solve the obstacle PDE and export the barrier");
    solve->add_option("--config", config_path, "run configuration")->required();
    solve->add_option("--out", out_dir, "output directory (default from config)");

    auto* verify = app.add_subcommand("verify", "verify a barrier CSV by SDE simulation");
    verify->add_option("--config", config_path, "run configuration")->required();
    verify->add_option("--barrier", barrier_path, "barrier CSV")->required();
    verify->add_option("--out", out_dir, "output directory (default from config)");

    std::string market_path, payoff_kind = "call";
    double maturity = 1.0, forward = 1.0, strike = 0.0, mc_dt = 5e-4, horizon = 2.0;
    std::int64_t n_paths = 100000;
    std::uint64_t seed = 1;
    int n_x = 400;
    auto* price = app.add_subcommand("price", "lower bound for an option on realized variance");
    price->add_option("--market", market_path, "CSV of strike,price")->required();
    price->add_option("--maturity", maturity, "option maturity")->required();
    price->add_option("--forward", forward, "forward price")->required();
    price->add_option("--payoff", payoff_kind, "call | identity");
    price->add_option("--strike", strike, "variance strike for the call payoff");
    price->add_option("--paths", n_paths, "Monte Carlo paths");
    price->add_option("--dt", mc_dt, "Monte Carlo step");
    price->add_option("--seed", seed, "RNG seed");
    price->add_option("--nx", n_x, "PDE interior points");
    price->add_option("--horizon", horizon, "PDE horizon in variance units");
    price->add_option("--out", out_dir, "directory for barrier.csv");

    CLI11_PARSE(app, argc, argv);

    if (solve->parsed()) return cmd_solve(config_path, out_dir);
    if (verify->parsed()) return cmd_verify(config_path, barrier_path, out_dir);
    if (price->parsed())
        return cmd_price(market_path, maturity, forward, payoff_kind, strike, out_dir, n_paths,
                         mc_dt, seed, n_x, horizon);
    return kExitConfig;
}
