#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

// Full-size round trips of every bundled example config: solve, then verify
// the produced barrier against the configured target.

#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(CLI_BIN) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const fs::path cfgdir = CONFIG_DIR;
const fs::path scratch = fs::temp_directory_path() / "rootb_cli_bundled";

} // namespace

TEST_CASE("every bundled solve config round-trips through verify") {
    for (const std::string name : {"spike.cfg", "gaussian.json", "mu_eq_nu.cfg"}) {
        INFO("config: ", name);
        const auto out = scratch / fs::path(name).stem();
        fs::remove_all(out);
        const std::string cfg = (cfgdir / name).string();
        REQUIRE(run("solve --config " + cfg + " --out " + out.string()) == 0);
        REQUIRE(fs::exists(out / "barrier.csv"));
        CHECK(run("verify --config " + cfg + " --barrier " + (out / "barrier.csv").string() +
                  " --out " + out.string()) == 0);
    }
}
