#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef QRLIM_CLI_PATH
#error "QRLIM_CLI_PATH must point at the built CLI binary"
#endif
#ifndef QRLIM_DATA_DIR
#error "QRLIM_DATA_DIR must point at the bundled data directory"
#endif

namespace {

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    std::string out_path = "cli_test_out.txt";
    std::string cmd = std::string(QRLIM_CLI_PATH) + " " + args + " > " + out_path + " 2>&1";
    int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream f(out_path);
    std::stringstream ss;
    ss << f.rdbuf();
    r.output = ss.str();
    std::remove(out_path.c_str());
    return r;
}

std::string fixture(const std::string& name) {
    return std::string(QRLIM_DATA_DIR) + "/profiles/" + name;
}

}  // namespace

TEST_CASE("metrics subcommand prints known values") {
    auto r = run_cli("metrics --rho 0 0 0.5 0");
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("1.0986") != std::string::npos);  // log 3

    auto j = run_cli("metrics --j 0 0 0.5 0");
    REQUIRE(j.exit_code == 0);
    CHECK(j.output.find("0.6931") != std::string::npos);  // log 2
}

TEST_CASE("metrics chain run is deterministic") {
    auto a = run_cli("--seed 9 metrics --chain --samples 40");
    auto b = run_cli("--seed 9 metrics --chain --samples 40");
    REQUIRE(a.exit_code == 0);
    CHECK(a.output == b.output);
    CHECK(a.output.find("j,k,rho,two_j") != std::string::npos);
}

TEST_CASE("computation errors exit 1, usage errors exit 2") {
    CHECK(run_cli("metrics --rho 0 0 1.5 0").exit_code == 1);  // point outside the ball
    CHECK(run_cli("metrics --rho 0 0").exit_code == 2);        // odd coordinate count
    CHECK(run_cli("frobnicate").exit_code == 2);               // unknown subcommand
}

TEST_CASE("scan reproduces the fixture verdicts") {
    auto d = run_cli("scan --theorem lindelof --phi 0.2 --profile " +
                     fixture("lindelof_diverges.csv"));
    REQUIRE(d.exit_code == 0);
    CHECK(d.output.find("verdict=diverges") != std::string::npos);

    auto f = run_cli("scan --theorem lindelof --phi 0.2 --profile " +
                     fixture("lindelof_fails.csv"));
    REQUIRE(f.exit_code == 0);
    CHECK(f.output.find("verdict=fails") != std::string::npos);

    auto t = run_cli("scan --theorem tangential --profile " +
                     fixture("tangential_diverges.csv"));
    REQUIRE(t.exit_code == 0);
    CHECK(t.output.find("verdict=diverges") != std::string::npos);

    auto k = run_cli("scan --theorem koebe --phi 0.2 --profile " +
                     fixture("koebe_diverges.csv"));
    REQUIRE(k.exit_code == 0);
    CHECK(k.output.find("verdict=diverges") != std::string::npos);
    CHECK(k.output.find("conclusion=f-must-be-constant") != std::string::npos);
}

TEST_CASE("malformed scan input exits 2 with a row diagnostic") {
    std::string path = "cli_bad_profile.csv";
    {
        std::ofstream f(path);
        f << "r,delta,epsilon\n0.25,1,0.5\n0.5,1,0.5\n";  // radii increase
    }
    auto r = run_cli("scan --theorem lindelof --phi 0.2 --profile " + path);
    std::remove(path.c_str());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("row 2") != std::string::npos);

    CHECK(run_cli("scan --theorem lindelof --phi 0.2 --profile no_such.csv").exit_code == 2);
}

TEST_CASE("bad config file exits 2") {
    std::string path = "cli_bad_config.conf";
    {
        std::ofstream f(path);
        f << "lambda_K = 0.6\n";
    }
    auto r = run_cli("--config " + path + " constants");
    std::remove(path.c_str());
    CHECK(r.exit_code == 2);
}

TEST_CASE("constants subcommand dumps the ledger") {
    auto r = run_cli("constants");
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("c1") != std::string::npos);
    CHECK(r.output.find("beta0") != std::string::npos);

    auto t = run_cli("constants --theorem koebe --phi 0.3 --r 0.1");
    REQUIRE(t.exit_code == 0);
    CHECK(t.output.find("gamma4") != std::string::npos);
}

TEST_CASE("boundary subcommand scans the singular inner function") {
    auto r = run_cli("boundary --map inner --curve radial --r-max 0.4 --count 8");
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("map=inner") != std::string::npos);
    CHECK(r.output.find("r,abs_f") != std::string::npos);
}

TEST_CASE("verify subcommand passes and emits JSON") {
    auto r = run_cli("verify");
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("\"pass\": true") != std::string::npos);
    CHECK(r.output.find("\"pass\": false") == std::string::npos);
}
