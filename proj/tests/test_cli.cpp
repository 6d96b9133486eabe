#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "support/paths.hpp"

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(VOIPSIM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

std::string fixture(const char* name) { return testsupport::scenario_dir() + "/" + name; }

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("voipsim-test-" + std::to_string(::getpid()))) {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("validate accepts the bundled fixtures") {
    REQUIRE(run_cli("validate --scenario " + fixture("paper-topology.scn")) == 0);
    REQUIRE(run_cli("validate --scenario " + fixture("paper-topology-expanded.scn")) == 0);
}

TEST_CASE("validation failures exit with code 1") {
    TempDir tmp;
    const fs::path bad = tmp.path / "bad.scn";
    std::ofstream(bad) << "schema 1\nname broken\nnode a {\n  kind host\n}\nlink l {\n  a a\n  b ghost\n"
                          "  rate_bps 1000\n}\nqdisc {\n  discipline fifo\n}\n";
    REQUIRE(run_cli("validate --scenario " + bad.string()) == 1);
    REQUIRE(run_cli("run --scenario " + bad.string()) == 1);
    REQUIRE(run_cli("validate --scenario " + (tmp.path / "missing.scn").string()) == 1);
}

TEST_CASE("usage errors exit with code 1") {
    REQUIRE(run_cli("run") == 1);                 // missing --scenario
    REQUIRE(run_cli("frobnicate") == 1);          // unknown subcommand
    REQUIRE(run_cli("") == 1);                    // subcommand required
}

TEST_CASE("run writes the artifacts and respects overrides") {
    TempDir tmp;
    const int code = run_cli("run --scenario " + fixture("paper-topology.scn") +
                             " --qdisc pq --duration 15 --seed 3 --out " + tmp.path.string());
    REQUIRE(code == 0);
    REQUIRE(fs::exists(tmp.path / "paper-topology-pq-timeseries.csv"));
    REQUIRE(fs::exists(tmp.path / "paper-topology-pq-summary.kv"));

    const std::string kv = testsupport::read_file((tmp.path / "paper-topology-pq-summary.kv").string());
    REQUIRE(kv.find("scenario.qdisc pq") != std::string::npos);
    REQUIRE(kv.find("scenario.seed 3") != std::string::npos);
    REQUIRE(kv.find("scenario.duration_s 15") != std::string::npos);
}

TEST_CASE("compare writes one artifact set per discipline plus the rollup") {
    TempDir tmp;
    const int code = run_cli("compare --scenario " + fixture("paper-topology.scn") +
                             " --duration 12 --out " + tmp.path.string());
    REQUIRE(code == 0);
    for (const char* disc : {"fifo", "pq", "wfq"}) {
        REQUIRE(fs::exists(tmp.path / ("paper-topology-" + std::string(disc) + "-timeseries.csv")));
        REQUIRE(fs::exists(tmp.path / ("paper-topology-" + std::string(disc) + "-summary.kv")));
    }
    REQUIRE(fs::exists(tmp.path / "paper-topology-comparison.kv"));

    SECTION("serial mode produces byte-identical files") {
        TempDir serial;
        REQUIRE(run_cli("compare --scenario " + fixture("paper-topology.scn") +
                        " --duration 12 --serial --out " + serial.path.string()) == 0);
        for (const char* file : {"paper-topology-fifo-timeseries.csv", "paper-topology-pq-summary.kv",
                                 "paper-topology-comparison.kv"}) {
            REQUIRE(testsupport::read_file((tmp.path / file).string()) ==
                    testsupport::read_file((serial.path / file).string()));
        }
    }
}
