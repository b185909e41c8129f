#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "hvdp/table.hpp"

using namespace hvdp;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("hvdp_cli_" + name);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("usage errors") {
    const Result none = run({});
    CHECK(none.code == cli::kExitUsage);
    CHECK(none.err.find("Usage") != std::string::npos);
    CHECK(run({"bogus"}).code == cli::kExitUsage);
    CHECK(run({"freq", "--order", "7"}).code == cli::kExitUsage);
    CHECK(run({"freq", "--omega", "-1"}).code == cli::kExitUsage);
    CHECK(run({"fig1", "--cycles", ""}).code == cli::kExitUsage);
    CHECK(run({"freq", "--config", temp_file("missing.json").string()}).code == cli::kExitFailure);
    CHECK(run({"--help"}).code == cli::kExitOk);
}

TEST_CASE("freq") {
    const Result r = run({"freq", "--omega", "1", "--eps", "0.3", "--order", "4"});
    CHECK(r.code == 0);
    CHECK(r.out.find("0.9944198") != std::string::npos);
    const Result m = run({"freq", "--omega", "1", "--eps", "0.3", "--measure"});
    CHECK(m.code == 0);
    CHECK(m.out.find("measured frequency: 0.99441") != std::string::npos);
}

TEST_CASE("hannay") {
    const Result r = run({"hannay", "--loop", "square", "--omega", "0.6:0.8", "--eps", "0.1:0.3"});
    CHECK(r.code == 0);
    CHECK(r.out.find("0.010416") != std::string::npos);
    CHECK(r.out.find("0.0104") != std::string::npos);
    CHECK(r.out.find("delta") != std::string::npos);
    const Result e = run({"hannay", "--loop", "ellipse"});
    CHECK(e.code == 0);
    CHECK(e.out.find("0.0128787") != std::string::npos);
    CHECK(e.out.find("0.0147") != std::string::npos);
    CHECK(run({"hannay", "--loop", "triangle"}).code == cli::kExitUsage);
}

TEST_CASE("geophase and the adiabaticity guard") {
    const Result r = run({"geophase", "--loop", "square", "--cycles", "10"});
    CHECK(r.code == cli::kExitFailure);
    CHECK(r.err.find("error") != std::string::npos);
}

TEST_CASE("cycle export is deterministic and carries provenance") {
    const auto a = temp_file("cycle_a.csv"), b = temp_file("cycle_b.csv");
    CHECK(run({"cycle", "--omega", "1", "--eps", "0.2", "--n-theta", "64", "--out", a.string()}).code == 0);
    CHECK(run({"cycle", "--omega", "1", "--eps", "0.2", "--n-theta", "64", "--out", b.string()}).code == 0);
    CHECK(slurp(a) == slurp(b));
    const ResultTable t = read_csv(a);
    CHECK(t.rows.size() == 64);
    CHECK(t.columns == std::vector<std::string>{"theta", "R", "Omega", "psi"});
    bool has_order = false;
    for (const auto& line : t.provenance) has_order = has_order || line.find("series order") != std::string::npos;
    CHECK(has_order);
    std::filesystem::remove(a);
    std::filesystem::remove(b);
}

TEST_CASE("fig1 writes a table with the asymptote column") {
    const auto csv = temp_file("fig1.csv"), svg = temp_file("fig1.svg");
    const Result r = run({"fig1", "--loop", "square", "--cycles", "60,120", "--n-s", "16", "--out", csv.string(),
                          "--svg", svg.string()});
    CHECK(r.code == 0);
    const ResultTable t = read_csv(csv);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0][t.column("cycles")] == doctest::Approx(60.0));
    CHECK(t.rows[0][t.column("phi_H")] == doctest::Approx(0.0104166667));
    CHECK(t.rows[1][t.column("ok")] == 1.0);
    CHECK(std::filesystem::file_size(svg) > 100);
    std::filesystem::remove(csv);
    std::filesystem::remove(svg);

    // A row below the adiabaticity guard fails, is marked, and sets exit code 2.
    const Result bad = run({"fig1", "--loop", "square", "--cycles", "10,60", "--n-s", "16", "--out", csv.string()});
    CHECK(bad.code == cli::kExitFailure);
    const ResultTable tb = read_csv(csv);
    REQUIRE(tb.rows.size() == 2);
    CHECK(tb.rows[0][tb.column("ok")] == 0.0);
    CHECK(std::isnan(tb.rows[0][tb.column("psi_G")]));
    CHECK(tb.rows[1][tb.column("ok")] == 1.0);
    std::filesystem::remove(csv);
}

TEST_CASE("JSON config mirrors the flags and flags win") {
    const auto cfg = temp_file("cfg.json");
    {
        std::ofstream f(cfg);
        f << R"({"command": "freq", "omega": 1.0, "eps": 0.1, "order": 2})";
    }
    const Result r = run({"--config", cfg.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("order 2") != std::string::npos);
    CHECK(r.out.find("0.9993750000") != std::string::npos);
    const Result o = run({"freq", "--order", "4", "--config", cfg.string()});
    CHECK(o.out.find("0.9993755534") != std::string::npos);
    std::filesystem::remove(cfg);
}

TEST_CASE("resonance") {
    const Result r = run({"resonance", "--omega1", "1", "--omega2", "2.3", "--eps", "0.02", "--quadratic-frequency"});
    CHECK(r.code == 0);
    CHECK(r.out.find("nonresonant") != std::string::npos);
    CHECK(r.out.find("prediction") != std::string::npos);
    CHECK(run({"resonance", "--form", "sideways"}).code == cli::kExitUsage);
}

TEST_CASE("selftest subset") {
    const Result r = run({"selftest", "--only", "3,9"});
    CHECK(r.code == 0);
    CHECK(r.out.find("[PASS] criterion  3") != std::string::npos);
    CHECK(r.out.find("[PASS] criterion  9") != std::string::npos);
}
