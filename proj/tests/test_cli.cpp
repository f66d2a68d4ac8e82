#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "ipl/errors.hpp"

using namespace ipl;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "ipl");
    std::ostringstream out, err;
    const int code = cli::main_entry(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) { return fs::temp_directory_path() / ("ipl_test_" + name); }

}  // namespace

TEST_CASE("continuum-spectrum lists the ground level") {
    const Result r = invoke({"continuum-spectrum", "--epsilon", "0.5", "--a", "1", "--L", "15.70796", "--n-max", "5"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("level,sign,energy\n0,+,1.5\n", 0) == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 12);
    CHECK(r.err.find("continuum-spectrum:") == 0);
}

TEST_CASE("discrete-spectrum at zero coupling") {
    const Result r = invoke({"discrete-spectrum", "--n-cells", "3", "--epsilon", "0"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "level,sign,energy");
    int minus = 0, plus = 0;
    while (std::getline(in, line)) {
        const double e = std::stod(line.substr(line.rfind(',') + 1));
        minus += std::abs(e + 1) < 1e-12;
        plus += std::abs(e - 1) < 1e-12;
    }
    CHECK(minus == 3);
    CHECK(plus == 3);
}

TEST_CASE("symmetry-check emits a JSON report") {
    const Result r = invoke({"symmetry-check", "--epsilon", "0.5", "--a", "1", "--L", "15.70796", "--n-max", "4"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["results"]["anticommutator_residual_V"].get<double>() <= 1e-12);
    CHECK(j["results"]["passed"].get<bool>());
    CHECK(j["config"]["n_max"] == 4);
    CHECK(j["config"]["d1"] == 1.0);
    CHECK(j["config"]["norm"] == "unit-total");
}

TEST_CASE("oracle-check passes at the default grid") {
    const Result r = invoke({"oracle-check", "--lambda", "1.5", "--g", "0.05"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["results"]["max_relative_error"].get<double>() <= 1e-4);
    CHECK(j["results"]["eigenvalues_near_minus_lambda"] == 0);
    CHECK(j["config"]["xi_max"].get<double>() == doctest::Approx(10 * std::sqrt(0.05)));
}

TEST_CASE("files and flags") {
    const fs::path cfg = scratch("config.txt"), cfg_json = scratch("config.json");
    const fs::path csv1 = scratch("a.csv"), csv2 = scratch("b.csv"), js = scratch("a.json"), svg = scratch("a.svg");
    std::ofstream(cfg) << "# comment\nepsilon = 0.5\nn-max=3\nL=15.707963267948966\n";
    std::ofstream(cfg_json) << R"({"epsilon": 0.5, "n_max": 3, "L": 15.707963267948966})";

    const Result a = invoke({"continuum-spectrum", "--config", cfg.string(), "--csv", csv1.string(), "--json", js.string()});
    const Result b = invoke({"continuum-spectrum", "--config", cfg_json.string(), "--csv", csv2.string()});
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(slurp(csv1) == slurp(csv2));
    CHECK(a.out.find("continuum-spectrum:") == 0);
    CHECK(a.err.empty());
    const auto j = nlohmann::json::parse(slurp(js));
    CHECK(j["config"]["n_max"] == 3);
    CHECK(j["config"]["lambda"].is_null());
    CHECK(j["results"]["levels"].size() == 7);

    const Result over = invoke({"continuum-spectrum", "--config", cfg.string(), "--n-max", "1"});
    CHECK(std::count(over.out.begin(), over.out.end(), '\n') == 4);

    const Result plot = invoke({"continuum-states", "--level", "2", "--sign", "-", "--svg", svg.string()});
    CHECK(plot.code == 0);
    CHECK(slurp(svg).find("<polyline") != std::string::npos);
    CHECK(plot.out.rfind("xi,psi1,psi2\n", 0) == 0);

    for (const auto& p : {cfg, cfg_json, csv1, csv2, js, svg}) fs::remove(p);
}

TEST_CASE("validation errors exit with 2") {
    const fs::path bad = scratch("bad.txt");
    std::ofstream(bad) << "epsilon=0.5\nbogus=1\n";
    CHECK(invoke({"continuum-spectrum", "--config", bad.string()}).code == 2);
    fs::remove(bad);
    CHECK(invoke({"continuum-spectrum", "--config", "/nonexistent/config.txt"}).code == 2);
    CHECK(invoke({"continuum-spectrum", "--bogus", "1"}).code == 2);
    CHECK(invoke({"continuum-spectrum", "--epsilon", "abc"}).code == 2);
    CHECK(invoke({"continuum-spectrum", "--epsilon", "nan"}).code == 2);
    CHECK(invoke({"discrete-spectrum", "--d1", "1", "--d2", "1"}).code == 2);
    CHECK(invoke({"continuum-states", "--level", "0", "--sign", "-"}).code == 2);
    CHECK(invoke({"continuum-spectrum", "--csv", "/nonexistent/dir/out.csv"}).code == 2);
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"continuum-spectrum", "--help"}).code == 0);
}

TEST_CASE("numerical failures exit with 3") {
    CHECK(invoke({"symmetry-check", "--tolerance", "1e-40"}).code == 3);
}

TEST_CASE("config parsing rules") {
    const auto kv = cli::parse_config_text("n-cells=5\n\n  epsilons = 0.1, 0.2 # trailing\n");
    CHECK(kv.at("n_cells") == "5");
    CHECK(kv.at("epsilons") == "0.1, 0.2");
    const auto js = cli::parse_config_text(R"({"epsilons": [0.1, 0.2], "norm": "per-component", "n_cells": 7})");
    CHECK(js.at("epsilons") == "0.1,0.2");
    CHECK(js.at("n_cells") == "7");
    CHECK_THROWS_AS(cli::parse_config_text("nope=1"), InvalidArgument);
    CHECK_THROWS_AS(cli::parse_config_text("just text"), InvalidArgument);
    CHECK_THROWS_AS(cli::resolve_config("frobnicate", {}, {}), InvalidArgument);
    const cli::RunConfig c = cli::resolve_config("compare", kv, {{"n_cells", "9"}});
    CHECK(c.integer("n_cells") == 9);
    CHECK(c.real_list("epsilons") == std::vector<double>{0.1, 0.2});
}

TEST_CASE("shortest round-trip numbers") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 1.5}) CHECK(std::stod(cli::format_number(v)) == v);
    CHECK(cli::format_number(1.5) == "1.5");
    CHECK(cli::format_number(-0.0) == "0");
}

TEST_CASE("localization-scan honours IPL_THREADS and stays deterministic") {
    const std::vector<std::string> args = {"localization-scan", "--n-cells", "21", "--epsilons", "0,0.5,2"};
    const Result a = invoke(args);
    ::setenv("IPL_THREADS", "1", 1);
    const Result b = invoke(args);
    ::setenv("IPL_THREADS", "0", 1);
    const Result c = invoke(args);
    ::unsetenv("IPL_THREADS");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(c.code == 2);
    CHECK(a.out.rfind("epsilon,state_index,energy,ipr,width_cells,class\n", 0) == 0);
}
