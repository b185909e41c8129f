#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <random>

#include "hvdp/errors.hpp"
#include "hvdp/svg.hpp"
#include "hvdp/table.hpp"

using namespace hvdp;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("hvdp_test_" + name);
}

}  // namespace

TEST_CASE("format_double round trips bit-exactly") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
        CHECK(same_bits(parse_double(format_double(v)), v));
    }
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(std::isnan(parse_double(format_double(std::nan("")))));
    CHECK_THROWS_AS(parse_double("1.5x"), InvalidArgument);
}

TEST_CASE("CSV write/read round trip") {
    ResultTable t;
    t.provenance = {"hannay-vdp test", "series order 4; tolerance 1e-11"};
    t.columns = {"a", "b", "c"};
    t.add_row({1.0 / 3.0, -2.5e-300, 7.0});
    t.add_row({std::nan(""), 1e300, -0.0});
    CHECK_THROWS_AS(t.add_row({1.0}), InvalidArgument);
    CHECK(t.column("b") == 1);
    CHECK_THROWS(t.column("zz"));

    const auto path = temp_file("roundtrip.csv");
    write_csv(t, path);
    const ResultTable r = read_csv(path);
    CHECK(r.provenance == t.provenance);
    CHECK(r.columns == t.columns);
    REQUIRE(r.rows.size() == 2);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            if (std::isnan(t.rows[i][j]))
                CHECK(std::isnan(r.rows[i][j]));
            else
                CHECK(same_bits(r.rows[i][j], t.rows[i][j]));
        }
    CHECK(to_csv(r) == to_csv(t));
    std::filesystem::remove(path);

    CHECK_THROWS_AS(read_csv(temp_file("does_not_exist.csv")), IoError);
    CHECK_THROWS_AS(write_csv(t, "/nonexistent-dir/x.csv"), IoError);
}

TEST_CASE("CSV text format") {
    ResultTable t;
    t.provenance = {"p"};
    t.columns = {"x", "y"};
    t.add_row({1.0, 2.0});
    CHECK(to_csv(t) == "# p\nx,y\n1,2\n");
    const ResultTable back = from_csv("# p\n# q\nx,y\n1,2\n3.5,-4\n");
    CHECK(back.provenance.size() == 2);
    CHECK(back.rows[1][1] == -4.0);
    CHECK_THROWS_AS(from_csv("x,y\n1\n"), InvalidArgument);
}

TEST_CASE("SVG rendering") {
    PlotSeries s{"psi_G", {50, 100, 200, 500, 1000}, {0.008, 0.009, 0.0098, 0.0102, 0.0103}};
    PlotSeries h{"phi_H", {50, 1000}, {0.0104, 0.0104}, "#d62728", true, false};
    const std::string svg = render_svg({"title", "T", "psi", true}, {s, h});
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("stroke-dasharray") != std::string::npos);
    CHECK(svg.find("psi_G") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg == render_svg({"title", "T", "psi", true}, {s, h}));

    const auto path = temp_file("plot.svg");
    write_svg(path, {"t", "x", "y"}, {s});
    CHECK(std::filesystem::file_size(path) > 100);
    std::filesystem::remove(path);
}
