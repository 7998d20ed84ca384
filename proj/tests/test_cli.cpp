#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "gpvw/snapshot.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using gpvw::Field2D;
using gpvw::make_grid;

namespace {

/// Scratch directory removed at the end of each test case.
struct Scratch {
    fs::path dir;
    Scratch() {
        dir = fs::temp_directory_path() / ("gpvw_cli_" + std::to_string(::getpid()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    fs::path operator/(const std::string& name) const { return dir / name; }
};

int run_cli(const std::string& args) {
    const std::string cmd = std::string(GPVW_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit with 2") {
    CHECK(run_cli("--version") == 0);
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("") == 2);
    CHECK(run_cli("frobnicate") == 2);
    CHECK(run_cli("solve --c 0.2 --p 40") == 2);
    CHECK(run_cli("ansatz --d 5 --n 128") == 2);
    CHECK(run_cli("solve --c 0.01 --L 30 --n 129") == 2);
}

TEST_CASE("profile CSV is byte-identical across runs") {
    Scratch s;
    REQUIRE(run_cli("profile --rmax 20 --nodes 801 --out " + q(s / "a.csv")) == 0);
    REQUIRE(run_cli("profile --rmax 20 --nodes 801 --out " + q(s / "b.csv") + " --report " + q(s / "r.json")) == 0);
    CHECK(slurp(s / "a.csv") == slurp(s / "b.csv"));
    CHECK(slurp(s / "a.csv").rfind("r,rho,drho\n", 0) == 0);
    const auto r = read_json(s / "r.json");
    CHECK(r["tool"] == "gpvw");
    CHECK(r["config"]["nodes"] == 801);
}

TEST_CASE("verify: trivial field passes, corrupted snapshots are format errors") {
    Scratch s;
    gpvw::write_gpfield(s / "one.gpfield", Field2D(make_grid(10.0, 65)), {0.0, std::nullopt});
    CHECK(run_cli("verify " + q(s / "one.gpfield") + " --c 0 --report " + q(s / "v.json")) == 0);
    CHECK(read_json(s / "v.json")["passed"] == true);

    std::string bytes = slurp(s / "one.gpfield");
    bytes.replace(bytes.find("GPFIELD1"), 8, "GPFIELDX");
    std::ofstream(s / "bad.gpfield", std::ios::binary) << bytes;
    CHECK(run_cli("verify " + q(s / "bad.gpfield")) == 2);
    const std::string good = slurp(s / "one.gpfield");
    std::ofstream(s / "short.gpfield", std::ios::binary) << good.substr(0, good.size() - 3);
    CHECK(run_cli("verify " + q(s / "short.gpfield")) == 2);

    // A field with a vortex fails the degree checks.
    Field2D u(make_grid(10.0, 65));
    u((u.grid().nx - 1) / 2, (u.grid().ny - 1) / 2) = 0.0;
    for (auto& v : u.values()) v *= 3.0;
    gpvw::write_gpfield(s / "wild.gpfield", u, {0.0, std::nullopt});
    CHECK(run_cli("verify " + q(s / "wild.gpfield") + " --c 0") == 1);
}

TEST_CASE("config files: flags win, unknown keys are rejected") {
    Scratch s;
    std::ofstream(s / "cfg.json") << R"({"d": 5, "L": 20, "n": 81, "nodes": 801, "rmax": 20})";
    REQUIRE(run_cli("ansatz --config " + q(s / "cfg.json") + " --n 97 --out " + q(s / "u.gpfield")) == 0);
    const gpvw::Snapshot snap = gpvw::read_gpfield(s / "u.gpfield");
    CHECK(snap.field.grid() == make_grid(20.0, 97));

    std::ofstream(s / "typo.json") << R"({"d": 5, "LL": 20})";
    CHECK(run_cli("ansatz --config " + q(s / "typo.json") + " --out " + q(s / "v.gpfield")) == 2);
    std::ofstream(s / "broken.json") << R"({"d": 5,)";
    CHECK(run_cli("ansatz --config " + q(s / "broken.json") + " --out " + q(s / "v.gpfield")) == 2);
}

TEST_CASE("non-convergence exits with 3 and keeps the iterate") {
    Scratch s;
    CHECK(run_cli("solve --c 0.2 --L 30 --n 129 --max-iters 1 --out " + q(s / "w.gpfield") + " --report " +
               q(s / "r.json")) == 3);
    CHECK_FALSE(fs::exists(s / "w.gpfield"));
    CHECK(fs::exists(s / "failed" / "w.gpfield"));
    const auto r = read_json(s / "r.json");
    CHECK(r["status"] == "not_converged");
    CHECK(r["last_residual"].get<double>() > 0.0);
}

TEST_CASE("branch CSV is byte-identical across runs and thread counts") {
    Scratch s;
    const std::string args = "branch --c-start 0.18 --c-end 0.2 --steps 3 --L 30 --n 129 --snapshots " +
                             q(s / "snaps") + " --out ";
    const int first = run_cli("--threads 1 " + args + q(s / "a.csv"));
    CHECK((first == 0 || first == 1));  // coarse grid: checks may fail, output must not vary
    CHECK(run_cli("--threads 1 " + args + q(s / "b.csv")) == first);
    CHECK(run_cli("--threads 3 " + args + q(s / "c.csv")) == first);
    const std::string a = slurp(s / "a.csv");
    CHECK(!a.empty());
    CHECK(a == slurp(s / "b.csv"));
    CHECK(a == slurp(s / "c.csv"));
    CHECK(fs::exists(s / "snaps" / "c_0.19.gpfield"));
}

TEST_CASE("pipeline config errors") {
    Scratch s;
    std::ofstream(s / "missing.json") << R"({"output_dir": "x", "grid": {"L": 30}})";
    CHECK(run_cli("run " + q(s / "missing.json") + " --out-dir " + q(s / "out")) == 2);
    std::ofstream(s / "unknown.json") << R"({"output_dir": "x", "gird": {}})";
    CHECK(run_cli("run " + q(s / "unknown.json") + " --out-dir " + q(s / "out")) == 2);
}

}
