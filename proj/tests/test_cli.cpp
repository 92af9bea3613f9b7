#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const fs::path& scratch() {
    static const fs::path dir = [] {
        fs::path p = fs::temp_directory_path() / ("geolab_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

int run(const std::string& args, const std::string& out_name = "") {
    std::string cmd = std::string("\"") + GEOLAB_CLI_PATH + "\" " + args;
    if (!out_name.empty()) cmd += " > \"" + (scratch() / out_name).string() + "\"";
    cmd += " 2> \"" + (scratch() / "stderr.txt").string() + "\"";
    int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const std::string& name) {
    std::ifstream f(scratch() / name, std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("exit codes") {
    CHECK(run("stats cuspmass --disc 5 --H 2 --samples 500", "a.json") == 0);
    CHECK(run("", "none.txt") == 1);
    CHECK(run("stats cuspmass --disc 7 --H 2", "bad.json") == 1);
    CHECK(run("stats cuspmass --disc 5 --format xml", "bad.json") == 1);
    CHECK(run("ternary count --q 1,0,1 --gram 1,0,0,0,1,0,0,0,-1", "bad.json") == 1);  // indefinite without a box
    CHECK(slurp("stderr.txt").find("--box") != std::string::npos);
    CHECK(run("accept --criteria 1", "accept.txt") == 2);
    CHECK(slurp("stderr.txt").rfind("FAIL criterion  1", 0) == 0);
    CHECK(json::parse(slurp("accept.txt"))["status"] == "check_failed");
}

TEST_CASE("cusp mass at d = 5 vanishes above the orbit") {
    REQUIRE(run("stats cuspmass --disc 5 --H 2,1.05 --samples 4000", "mass.json") == 0);
    json doc = json::parse(slurp("mass.json"));
    CHECK(doc["schema"] == 1);
    CHECK(doc["command"] == "stats cuspmass");
    CHECK(doc["status"] == "ok");
    REQUIRE(doc["rows"].size() == 2);
    auto cols = doc["columns"];
    std::size_t mass_col = 0;
    for (std::size_t i = 0; i < cols.size(); ++i)
        if (cols[i] == "mass") mass_col = i;
    for (const auto& row : doc["rows"])
        if (row[1].get<double>() == 2.0) CHECK(row[mass_col].get<double>() == 0.0);
    CHECK(doc["parameters"]["samples"] == 4000);
}

TEST_CASE("csv layout") {
    REQUIRE(run("stats cuspmass --disc 5,8 --H 2 --samples 300 --format csv", "mass.csv") == 0);
    std::string text = slurp("mass.csv");
    auto eol = text.find("\r\n");
    REQUIRE(eol != std::string::npos);
    std::string header = text.substr(0, eol);
    CHECK(header.rfind("param_disc,", 0) == 0);
    CHECK(header.find(",mass,") != std::string::npos);
    CHECK(header.find("\"") == std::string::npos);
    std::size_t lines = 0;
    for (std::size_t p = 0; (p = text.find("\r\n", p)) != std::string::npos; p += 2) ++lines;
    CHECK(lines == 3);  // header plus one row per discriminant
    CHECK(text.find("\"5,8\"") != std::string::npos);  // list parameters are quoted
}

TEST_CASE("repeat runs are byte-identical") {
    const std::string args = "stats paircorr --disc 10001 --H 1.3 --samples 3000 --seed 5";
    REQUIRE(run(args, "p1.json") == 0);
    REQUIRE(run(args + " --threads 1", "p2.json") == 0);
    CHECK(slurp("p1.json") == slurp("p2.json"));
    REQUIRE(run("dynamics cover --disc 5 --samples 500 --N 2 --eta 0.02 --out " + (scratch() / "c1.json").string()) == 0);
    REQUIRE(run("dynamics cover --disc 5 --samples 500 --N 2 --eta 0.02 --out " + (scratch() / "c2.json").string()) == 0);
    CHECK(!slurp("c1.json").empty());
    CHECK(slurp("c1.json") == slurp("c2.json"));
}

TEST_CASE("config file sits between defaults and flags") {
    {
        std::ofstream f(scratch() / "run.ini");
        f << "samples = 700\nseed = 11\ndisc = 5,8\n";
    }
    std::string cfg = (scratch() / "run.ini").string();
    REQUIRE(run("stats cuspmass --H 2 --config \"" + cfg + "\" --seed 99", "cfg.json") == 0);
    json doc = json::parse(slurp("cfg.json"));
    CHECK(doc["parameters"]["samples"] == 700);
    CHECK(doc["parameters"]["seed"] == 99);
    CHECK(doc["parameters"]["disc"] == "5,8");
    CHECK(doc["rows"].size() == 2);
    REQUIRE(run("stats cuspmass --H 2 --disc 5", "def.json") == 0);
    json def = json::parse(slurp("def.json"));
    CHECK(def["parameters"]["samples"] == 100000);
    CHECK(def["parameters"]["seed"] == 0);
}

TEST_CASE("per-class sampling and Gram files") {
    REQUIRE(run("geodesics sample --disc 229 --per-class 7 --format csv", "g.csv") == 0);
    std::string text = slurp("g.csv");
    std::size_t lines = 0;
    for (std::size_t p = 0; (p = text.find("\r\n", p)) != std::string::npos; p += 2) ++lines;
    CHECK(lines == 1 + 3 * 7);  // h(229) = 3
    {
        std::ofstream f(scratch() / "a2.json");
        f << "{\"gram\": [[1, 0.5, 0], [0.5, 1, 0], [0, 0, 1]]}";
    }
    std::string q = (scratch() / "a2.json").string();
    REQUIRE(run("ternary count --q 1,1,1 --Q \"" + q + "\"", "t1.json") == 0);
    REQUIRE(run("ternary count --q 1,1,1 --gram 1,0.5,0,0.5,1,0,0,0,1", "t2.json") == 0);
    json a = json::parse(slurp("t1.json")), b = json::parse(slurp("t2.json"));
    CHECK(a["rows"] == b["rows"]);
    {
        std::ofstream f(scratch() / "bad.json");
        f << "[[1, 0.25, 0], [0.25, 1, 0], [0, 0, 1]]";
    }
    CHECK(run("ternary count --q 1,0,1 --Q \"" + (scratch() / "bad.json").string() + "\"", "t3.json") == 1);
    CHECK(run("ternary count --q 1,0,1 --Q /nonexistent/gram.json", "t4.json") == 1);
}
