#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string cli = NONSTATQ_CLI_PATH;
const fs::path scenarios = NONSTATQ_SCENARIO_DIR;

int run(const std::string& args, const std::string& capture = "/dev/null") {
    const std::string cmd = "'" + cli + "' " + args + " >'" + capture + "' 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("nonstatq_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("exit code 0: passing run and builtin battery") {
    const auto out = scratch("pass");
    CHECK(run("run '" + (scenarios / "vacuum.toml").string() + "' --out '" + out.string() + "'") == 0);
    CHECK(fs::exists(out / "summary.json"));
    CHECK(run("check --builtin", (out / "table.txt").string()) == 0);
    CHECK(slurp(out / "table.txt").find("checks passed") != std::string::npos);
    fs::remove_all(out);
}

TEST_CASE("exit code 1: failed checks") {
    const auto out = scratch("fail");
    CHECK(run("check --builtin --tol 1e-14", (out / "table.txt").string()) == 1);
    CHECK(slurp(out / "table.txt").find("FAIL") != std::string::npos);
    fs::remove_all(out);
}

TEST_CASE("exit code 2: configuration and usage errors") {
    const auto dir = scratch("config");
    std::ofstream(dir / "typo.toml") << "[medium]\nsgima = 0.2\n";
    std::ofstream(dir / "wronskian.toml")
        << "[initial_conditions]\npolicy = \"explicit\"\neps = [1.0, 0.0]\ndeps = [0.0, 3.0]\n";
    CHECK(run("run '" + (dir / "typo.toml").string() + "' --out '" + (dir / "o").string() + "'") == 2);
    CHECK(run("check --config '" + (dir / "wronskian.toml").string() + "'") == 2);
    CHECK(!fs::exists(dir / "o" / "envelope.csv"));
    CHECK(run("frobnicate") == 2);
    CHECK(run("exact --case elliptic --omega0 1 --t-end 1") == 2);
    CHECK(run("exact --case stationary --omega0 -1 --t-end 1") == 2);
    fs::remove_all(dir);
}

TEST_CASE("exit code 3: numerical failure") {
    const auto out = scratch("numerical");
    CHECK(run("run '" + (scenarios / "inverted_blowup.toml").string() + "' --out '" + out.string() + "'") == 3);
    fs::remove_all(out);
}

TEST_CASE("exact subcommand prints the closed form") {
    const auto out = scratch("exact");
    const auto file = out / "exact.csv";
    CHECK(run("exact --case hyperbolic --omega0 1 --t-end 1.718281828459045 --n-points 2", file.string()) == 0);
    const auto text = slurp(file);
    CHECK(text.rfind("t,re_eps,im_eps,re_deps,im_deps,rho,phi\r\n", 0) == 0);
    CHECK(text.find(",1.7716663") != std::string::npos);
    fs::remove_all(out);
}

TEST_CASE("repeated CLI runs produce identical artifacts") {
    const auto a = scratch("det_a");
    const auto b = scratch("det_b");
    const auto cfg = (scenarios / "hyperbolic_decay.toml").string();
    REQUIRE(run("run '" + cfg + "' --out '" + a.string() + "'") == 0);
    REQUIRE(run("run '" + cfg + "' --out '" + b.string() + "'") == 0);
    for (const auto& entry : fs::directory_iterator(a)) {
        const auto name = entry.path().filename();
        if (name == "summary.json") continue;
        CHECK(slurp(a / name) == slurp(b / name));
    }
    fs::remove_all(a);
    fs::remove_all(b);
}
