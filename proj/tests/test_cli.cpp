#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

using nlohmann::json;

namespace {

struct CmdResult {
    int exit_code;
    std::string out;
};

CmdResult run_cli(const std::string& args) {
    std::string cmd = std::string(HADAUDIT_BIN) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        out.append(buf.data(), n);
    int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

}  // namespace

TEST_CASE("verify exit codes and verdicts") {
    CmdResult eq = run_cli("verify --thm 2.1 --f x --a 0 --b 1");
    CHECK(eq.exit_code == 0);
    CHECK(eq.out.find("Equality") != std::string::npos);

    CmdResult viol = run_cli("verify --thm 2.4 --f x --a 0 --b 1");
    CHECK(viol.exit_code == 2);
    CHECK(viol.out.find("Violated") != std::string::npos);

    CmdResult parse = run_cli("verify --thm 2.1 --f x+ --a 0 --b 1");
    CHECK(parse.exit_code == 1);

    CmdResult notconvex = run_cli("verify --thm 2.1 --f \"0-x^2\" --a 0 --b 1");
    CHECK(notconvex.exit_code == 3);

    CmdResult midzero =
        run_cli("verify --thm 2.2 --f \"max(2*x-1,1-2*x)\" --a 0 --b 1");
    CHECK(midzero.exit_code == 1);

    CmdResult usage = run_cli("verify --thm 2.1");
    CHECK(usage.exit_code != 0);

    CmdResult unknown_flag = run_cli("verify --thm 2.1 --f x --a 0 --b 1 --zap");
    CHECK(unknown_flag.exit_code == 1);
}

TEST_CASE("verify JSON output matches the schema") {
    CmdResult r = run_cli("verify --thm 1.1 --f x^2 --a 0 --b 1 --json");
    CHECK(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["schema"] == "hadamard-audit/1");
    CHECK(j["subcommand"] == "verify");
    REQUIRE(j.contains("config"));
    REQUIRE(j["reports"].is_array());
    REQUIRE(j["reports"].size() == 1);
    const json& rep = j["reports"][0];
    CHECK(rep["theorem"] == "hadamard-1.1");
    CHECK(rep["function"].is_string());
    REQUIRE(rep["interval"].is_array());
    CHECK(rep["interval"].size() == 2);
    REQUIRE(rep["chain"].is_array());
    for (const auto& e : rep["chain"]) {
        CHECK(e.contains("name"));
        CHECK(e.contains("value"));
        CHECK(e.contains("abs_error"));
    }
    CHECK(rep.contains("aux"));
    CHECK(rep.contains("slack"));
    CHECK(rep.contains("tolerance_used"));
    CHECK(rep["verdict"] == "Holds");
}

TEST_CASE("CSV and JSON carry identical numeric values") {
    CmdResult jr = run_cli("verify --thm 2.1 --f x^2 --a 0 --b 1 --json");
    CmdResult cr = run_cli("verify --thm 2.1 --f x^2 --a 0 --b 1 --csv");
    json j = json::parse(jr.out);
    const json& rep = j["reports"][0];

    std::istringstream csv(cr.out);
    std::string header, line;
    REQUIRE(std::getline(csv, header));
    CHECK(header ==
          "theorem,function,a,b,name,value,abs_error,slack,verdict");
    std::size_t row = 0;
    while (std::getline(csv, line)) {
        REQUIRE(row < rep["chain"].size());
        // function field is quoted; split on the closing quote.
        auto close = line.find('"', line.find('"') + 1);
        std::string tail = line.substr(close + 2);
        std::vector<std::string> cols;
        std::istringstream ts(tail);
        std::string col;
        while (std::getline(ts, col, ',')) cols.push_back(col);
        REQUIRE(cols.size() == 7);
        CHECK(std::stod(cols[3]) ==
              rep["chain"][row]["value"].get<double>());
        CHECK(std::stod(cols[4]) ==
              rep["chain"][row]["abs_error"].get<double>());
        CHECK(std::stod(cols[5]) == rep["slack"].get<double>());
        ++row;
    }
    CHECK(row == rep["chain"].size());
}

TEST_CASE("means subcommand") {
    CmdResult p31 = run_cli("means --prop 3.1 --a 1 --b 2");
    CHECK(p31.exit_code == 0);
    CHECK(p31.out.find("Holds") != std::string::npos);

    CmdResult p32 = run_cli("means --prop 3.2 --a 1 --b 2");
    CHECK(p32.exit_code == 0);

    CmdResult lit = run_cli("means --prop 3.2 --a 1 --b 2 --paper-literal --json");
    CHECK(lit.exit_code == 0);
    json j = json::parse(lit.out);
    CHECK(j["reports"][0]["theorem"] == "prop-3.2-literal");
    REQUIRE(j["reports"][0].contains("notes"));

    CmdResult bad = run_cli("means --prop 3.1 --a 2 --b 1");
    CHECK(bad.exit_code == 1);
}

TEST_CASE("audit subcommand") {
    CmdResult a24 = run_cli("audit --thm 2.4 --f x --a 0 --b 1 --json");
    CHECK(a24.exit_code == 2);
    json j = json::parse(a24.out);
    REQUIRE(j["reports"].size() == 2);
    CHECK(j["reports"][0]["theorem"] == "step-2.4.1");
    CHECK(j["reports"][0]["verdict"] == "Equality");
    CHECK(j["reports"][1]["theorem"] == "step-2.4.2");
    CHECK(j["reports"][1]["verdict"] == "Violated");

    CmdResult a23 =
        run_cli("audit --thm 2.3 --f x --a 0 --b 1 --x 0.3 --y 0.8 --tol 1e-7");
    CHECK(a23.exit_code == 0);

    CmdResult bad = run_cli("audit --thm 2.1 --f x --a 0 --b 1");
    CHECK(bad.exit_code == 1);
}

TEST_CASE("sweep subcommand") {
    CmdResult ok = run_cli(
        "sweep --thms 1.1,2.1 --trials 10 --seed 3 --families quadratic,power "
        "--json");
    CHECK(ok.exit_code == 0);
    json j = json::parse(ok.out);
    CHECK(j["schema"] == "hadamard-audit/1");
    CHECK(j["summary"]["per_theorem"]["1.1"]["violated"] == 0);

    CmdResult viol = run_cli(
        "sweep --thms 2.4 --trials 40 --seed 7 --families power --lo 0.5 "
        "--hi 2 --json");
    CHECK(viol.exit_code == 2);
    json vj = json::parse(viol.out);
    CHECK(vj["summary"]["per_theorem"]["2.4"]["violated"].get<int>() >= 1);
    CHECK_FALSE(vj["summary"]["per_theorem"]["2.4"]["violations"].empty());

    CmdResult bad = run_cli("sweep --trials 0");
    CHECK(bad.exit_code == 1);

    CmdResult badfam = run_cli("sweep --trials 5 --families parabola");
    CHECK(badfam.exit_code == 1);
}

TEST_CASE("sharpen subcommand") {
    CmdResult ok = run_cli(
        "sharpen --thm 2.1 --family power --a 0 --b 1 --seed 1 --iters 60 "
        "--json");
    CHECK(ok.exit_code == 0);
    json j = json::parse(ok.out);
    CHECK(j["summary"]["best_slack"].get<double>() <= 1e-4);
    CHECK(j["summary"]["best_function"].is_string());

    CmdResult bad = run_cli(
        "sharpen --thm 2.1 --family parabola --a 0 --b 1 --seed 1 --iters 5");
    CHECK(bad.exit_code == 1);
}
