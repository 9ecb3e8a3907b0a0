#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <unistd.h>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "frao/spd_geometry.hpp"

namespace {

using json = nlohmann::json;

struct CliResult {
    int exit_code = -1;
    std::string out;
};

const char* cli_bin() {
    const char* env = std::getenv("FRAO_CLI_BIN");
    return env ? env : "tools/frao";
}

std::string temp_path(const std::string& tag) {
    static int counter = 0;
    std::ostringstream s;
    s << "/tmp/frao_cli_test_" << getpid() << "_" << counter++ << "_" << tag;
    return s.str();
}

CliResult run_cli(const std::string& request, const std::string& extra_args = "") {
    const std::string req = temp_path("req.json");
    const std::string out = temp_path("out");
    {
        std::ofstream f(req);
        f << request;
    }
    const std::string cmd = std::string(cli_bin()) + " --input " + req + " " + extra_args + " > " +
                            out + " 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    CliResult result;
    result.exit_code = WEXITSTATUS(rc);
    std::ifstream f(out);
    std::stringstream buf;
    buf << f.rdbuf();
    result.out = buf.str();
    std::remove(req.c_str());
    std::remove(out.c_str());
    return result;
}

const char* kSpdGoldenRequest =
    R"json({"family":"spd(2)","task":"dist","points":[[[1.5,1],[1,1]],[[2,1],[1,1]]]})json";

}  // namespace

TEST_CASE("cli: golden SPD pair returns the exact closed form") {
    const CliResult r = run_cli(kSpdGoldenRequest);
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(std::fabs(doc["results"][0]["value"].get<double>() -
                    std::log(2.0) / std::sqrt(2.0)) <= 1e-10);
    CHECK(doc["results"][0]["kind"] == "exact");
}

TEST_CASE("cli: exponential rates (1, e) give distance 1") {
    const CliResult r =
        run_cli(R"json({"family":"exponential","task":"dist","points":[1, 2.718281828459045]})json");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["results"][0]["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cli: mvn bounds emit a sandwiched lower/upper pair") {
    const CliResult r = run_cli(
        R"json({"family":"mvn(2)","task":"bounds","points":[
            {"mean":[0,0],"scale":[[1,0],[0,1]]},
            {"mean":[1,0.5],"scale":[[2,0.4],[0.4,1]]}]})json");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    const double lo = doc["results"][0]["value"].get<double>();
    const double hi = doc["results"][1]["value"].get<double>();
    CHECK(doc["results"][0]["kind"] == "lower");
    CHECK(doc["results"][1]["kind"] == "upper");
    CHECK(lo <= hi + 1e-12);
    CHECK(lo > 0.0);
}

TEST_CASE("cli: deterministic output bytes") {
    const CliResult a = run_cli(kSpdGoldenRequest);
    const CliResult b = run_cli(kSpdGoldenRequest);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("cli: result document values survive a JSON round trip bit-for-bit") {
    const CliResult r = run_cli(kSpdGoldenRequest);
    REQUIRE(r.exit_code == 0);
    const nlohmann::ordered_json doc = nlohmann::ordered_json::parse(r.out);
    const std::string again = doc.dump(2) + "\n";
    const nlohmann::ordered_json doc2 = nlohmann::ordered_json::parse(again);
    CHECK(doc["results"][0]["value"].get<double>() == doc2["results"][0]["value"].get<double>());
    CHECK(r.out == again);
}

TEST_CASE("cli: exit codes for the documented error classes") {
    CHECK(run_cli(R"json({"family":"nosuch","task":"dist","points":[1,2]})json").exit_code == 2);
    CHECK(run_cli(R"json({"family":"normal1d","task":"dist","points":[[0,1],[0,-1]]})json").exit_code == 3);
    CHECK(run_cli(R"json({"family":"mvn(2)","task":"dist","points":[
        {"mean":[0,0],"scale":[[1,0],[0,1]]},{"mean":[1,1],"scale":[[1,0],[0,1]]}]})json")
              .exit_code == 4);
    CHECK(run_cli("this is not json").exit_code == 1);
}

TEST_CASE("cli: structured error object accompanies nonzero exits") {
    const CliResult r = run_cli(R"json({"family":"nosuch","task":"dist","points":[1,2]})json");
    const json doc = json::parse(r.out);
    CHECK(doc["error"]["code"] == 2);
    CHECK(doc["error"]["type"] == "unknown-family");
}

TEST_CASE("cli: geodesic CSV has exact endpoints and an accurate cumulative length") {
    const CliResult r = run_cli(
        R"json({"family":"spd(2)","task":"geodesic","points":[[[1.5,1],[1,1]],[[2,1],[1,1]]],
            "options":{"segments":11}})json");
    REQUIRE(r.exit_code == 0);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "t,p0,p1,p2,cum_length");
    std::vector<std::vector<double>> rows;
    while (std::getline(lines, line)) {
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    REQUIRE(rows.size() == 11);
    CHECK(rows.front()[1] == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(rows.back()[1] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(rows.back()[3] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::fabs(rows.back()[4] - std::log(2.0) / std::sqrt(2.0)) <= 1e-6);
    CHECK(rows.front()[4] == 0.0);
}

TEST_CASE("cli: approx task honors the additive contract on the golden pair") {
    const CliResult r = run_cli(kSpdGoldenRequest, "--task approx --delta 1e-4");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(std::fabs(doc["results"][0]["value"].get<double>() -
                    std::log(2.0) / std::sqrt(2.0)) <= 1e-4);
    CHECK(doc["results"][0]["contract"]["type"] == "add");
}

TEST_CASE("cli: matrix task emits deterministic pair order") {
    const CliResult r = run_cli(
        R"json({"family":"exponential","task":"matrix","points":[1.0, 2.0, 4.0, 8.0]})json");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    REQUIRE(doc["results"].size() == 6);
    CHECK(doc["results"][0]["pair"] == json::array({0, 1}));
    CHECK(doc["results"][5]["pair"] == json::array({2, 3}));
    CHECK(doc["results"][0]["value"].get<double>() ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("cli: version flag") {
    const std::string out_path = temp_path("version");
    const std::string cmd = std::string(cli_bin()) + " --version > " + out_path;
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    std::ifstream f(out_path);
    std::string line;
    std::getline(f, line);
    std::remove(out_path.c_str());
    CHECK(line.rfind("frao ", 0) == 0);
}

TEST_CASE("cli: matrices are symmetrized on load with a warning") {
    const CliResult r = run_cli(
        R"json({"family":"spd(2)","task":"dist","points":[[[1.5,1.0000000001],[1,1]],[[2,1],[1,1]]]})json");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["warnings"].size() == 1);
    // asymmetry beyond 1e-9 is a domain violation
    CHECK(run_cli(R"json({"family":"spd(2)","task":"dist","points":[[[1.5,1.1],[1,1]],[[2,1],[1,1]]]})json")
              .exit_code == 3);
}

TEST_CASE("cli: pullback curve sampling retracts the endpoints exactly") {
    const CliResult r = run_cli(
        R"json({"family":"mvn(2)","task":"geodesic","points":[
            {"mean":[0,0],"scale":[[1,0],[0,0.5]]},{"mean":[1,1],"scale":[[2,0.3],[0.3,1]]}],
            "options":{"method":"pullback","t_grid":[0,0.5,1]}})json");
    REQUIRE(r.exit_code == 0);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "t,p0,p1,p2,p3,p4,cum_length");
    std::vector<std::vector<double>> rows;
    while (std::getline(lines, line)) {
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    REQUIRE(rows.size() == 3);
    // endpoints: mean then upper-triangle scale
    CHECK(rows.front()[1] == doctest::Approx(0.0));
    CHECK(rows.front()[3] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rows.back()[1] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rows.back()[3] == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(rows.back().back() > 0.0);
}

TEST_CASE("cli: two-point t_grid emits exactly the endpoint rows") {
    const CliResult r = run_cli(
        R"json({"family":"spd(2)","task":"geodesic","points":[[[1.5,1],[1,1]],[[2,1],[1,1]]],
            "options":{"t_grid":[0,1]}})json");
    REQUIRE(r.exit_code == 0);
    int rows = 0;
    std::istringstream lines(r.out);
    std::string line;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 3);  // header + 2 rows
}
