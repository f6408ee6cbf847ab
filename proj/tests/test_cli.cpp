#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rootb/io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(CLI_BIN) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const fs::path cfgdir = CONFIG_DIR;
const fs::path scratch = fs::temp_directory_path() / "rootb_cli_tests";

void write(const fs::path& p, const std::string& text) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p);
    out << text;
}

// small-budget copies of the bundled configs keep this suite quick; the
// acceptance binary runs the full-size ones
std::string small_spike(const std::string& outdir) {
    return
        "problem.mu = {\"kind\":\"atomic\",\"atoms\":[[0.0,1.0]]}\n"
        "problem.nu = {\"kind\":\"atomic\",\"atoms\":[[-1.0,0.25],[0.0,0.5],[1.0,0.25]]}\n"
        "problem.sigma = 1.0\n"
        "grid.a = -1.0\ngrid.b = 1.0\ngrid.T = 2.0\n"
        "grid.n_t = 8000\ngrid.cfl_ratio = 0.2\n"
        "mc.n_paths = 20000\nmc.dt = 2.5e-4\nmc.t_max = 8.0\nmc.seed = 3\nmc.threshold = 0.02\nmc.hit_rule = min_neighbor\n"
        "outputs.dir = " + outdir + "\n";
}

} // namespace

TEST_CASE("solve writes the barrier, solution and metadata") {
    const auto out = scratch / "fig1";
    fs::remove_all(out);
    write(scratch / "fig1.cfg", small_spike(out.string()));
    REQUIRE(run("solve --config " + (scratch / "fig1.cfg").string()) == 0);
    REQUIRE(fs::exists(out / "barrier.csv"));
    REQUIRE(fs::exists(out / "solution.csv"));
    REQUIRE(fs::exists(out / "meta.json"));

    auto b = rootb::io::read_barrier_csv((out / "barrier.csv").string());
    CHECK(std::abs(b.eval(0.0) - 0.39348) < 0.02);
    CHECK(b.eval(-1.0) == 0.0);
    const std::string meta = slurp(out / "meta.json");
    CHECK(meta.find("\"kind\": \"obstacle\"") != std::string::npos);
}

TEST_CASE("solve then verify round-trips on the bundled style config") {
    const auto out = scratch / "fig1rt";
    fs::remove_all(out);
    write(scratch / "fig1rt.cfg", small_spike(out.string()));
    REQUIRE(run("solve --config " + (scratch / "fig1rt.cfg").string()) == 0);
    REQUIRE(run("verify --config " + (scratch / "fig1rt.cfg").string() + " --barrier " +
                (out / "barrier.csv").string()) == 0);
    const std::string report = slurp(out / "report.json");
    CHECK(report.find("potential_distance") != std::string::npos);
}

TEST_CASE("mu = nu solves to an all-zero barrier") {
    const auto out = scratch / "mueq";
    fs::remove_all(out);
    REQUIRE(run("solve --config " + (cfgdir / "mu_eq_nu.cfg").string() + " --out " +
                out.string()) == 0);
    auto b = rootb::io::read_barrier_csv((out / "barrier.csv").string());
    for (double v : b.f()) CHECK(v == 0.0);
}

TEST_CASE("cfl violation exits with the solver code") {
    CHECK(run("solve --config " + (cfgdir / "cfl_violation.cfg").string() + " --out " +
              (scratch / "cfl").string()) == 3);
}

TEST_CASE("missing config keys exit with the config code") {
    write(scratch / "broken.cfg", "grid.a = -1.0\n");
    CHECK(run("solve --config " + (scratch / "broken.cfg").string()) == 2);
    CHECK(run("solve --config " + (scratch / "no_such_file.cfg").string()) == 2);
}

TEST_CASE("verify fails with code 4 when the barrier cannot embed") {
    const auto out = scratch / "inf";
    fs::remove_all(out);
    fs::create_directories(out);
    // interior-infinite barrier, walls far out of reach: nothing stops
    std::ostringstream csv;
    csv << "x,f\n";
    csv << "-4,0\n";
    for (double x = -3.9; x <= 3.9 + 1e-9; x += 0.1) csv << x << ",inf\n";
    csv << "4,0\n";
    write(out / "barrier.csv", csv.str());
    write(out / "verify.cfg",
          "problem.mu = {\"kind\":\"atomic\",\"atoms\":[[0.0,1.0]]}\n"
          "problem.nu = {\"kind\":\"atomic\",\"atoms\":[[-1.0,0.5],[1.0,0.5]]}\n"
          "problem.sigma = 1.0\n"
          "grid.a = -2.0\ngrid.b = 2.0\ngrid.T = 0.5\ngrid.n_x = 40\ngrid.cfl_ratio = 0.9\n"
          "mc.n_paths = 2000\nmc.dt = 1e-3\nmc.t_max = 1.0\nmc.seed = 5\nmc.threshold = 0.02\n"
          "outputs.dir = " + out.string() + "\n");
    CHECK(run("verify --config " + (out / "verify.cfg").string() + " --barrier " +
              (out / "barrier.csv").string()) == 4);
    const std::string report = slurp(out / "report.json");
    const std::string key = "\"unstopped_fraction\": ";
    const auto pos = report.find(key);
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(report.substr(pos + key.size())) >= 0.99);
}

TEST_CASE("verify reports are reproducible byte for byte") {
    const auto out1 = scratch / "rep1";
    const auto out2 = scratch / "rep2";
    fs::remove_all(out1);
    fs::remove_all(out2);
    write(scratch / "rep.cfg", small_spike((scratch / "repsolve").string()));
    REQUIRE(run("solve --config " + (scratch / "rep.cfg").string()) == 0);
    const std::string barrier = (scratch / "repsolve" / "barrier.csv").string();
    REQUIRE(run("verify --config " + (scratch / "rep.cfg").string() + " --barrier " + barrier +
                " --out " + out1.string()) == 0);
    REQUIRE(run("verify --config " + (scratch / "rep.cfg").string() + " --barrier " + barrier +
                " --out " + out2.string()) == 0);
    CHECK(slurp(out1 / "report.json") == slurp(out2 / "report.json"));
}

TEST_CASE("price reproduces the lognormal degeneracy from the bundled chain") {
    const int code = std::system((std::string(CLI_BIN) + " price --market " +
                                  (cfgdir / "bs_chain.csv").string() +
                                  " --maturity 1.0 --forward 1.0 --payoff call --strike 0.01" +
                                  " --paths 20000 --dt 2.5e-4 --nx 250 --horizon 0.3 --seed 9 > " +
                                  (scratch / "price.json").string() + " 2>/dev/null")
                                     .c_str());
    REQUIRE(WEXITSTATUS(code) == 0);
    const std::string out = slurp(scratch / "price.json");
    const auto pos = out.find("\"bound\": ");
    REQUIRE(pos != std::string::npos);
    const double bound = std::stod(out.substr(pos + 9));
    CHECK(std::abs(bound - 0.03) < 0.004);
}

TEST_CASE("price rejects arbitrage with exit code 5") {
    CHECK(run("price --market " + (cfgdir / "arbitrage_chain.csv").string() +
              " --maturity 1.0 --forward 1.0 --payoff call --strike 0.01") == 5);
}
