#include <doctest.h>

#include <cstdlib>
#include <string>

#include "dmt/report.hpp"

using namespace dmt;

TEST_CASE("format_double round-trips and stays short") {
    for (double v : {0.0, 1.0, 0.05, -3.25, 1e-300, 6.456688892632132, 0.1}) {
        const std::string s = format_double(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(2.0) == "2");
}

TEST_CASE("csv_escape quotes only when needed") {
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_escape("line\nbreak") == "\"line\nbreak\"");
    CHECK(csv_escape("") == "");
}

TEST_CASE("fnv1a64 is stable") {
    CHECK(fnv1a64("") == 14695981039346656037ull);
    CHECK(fnv1a64("a") == 12638187200555641996ull);
    CHECK(fnv1a64("abc") != fnv1a64("acb"));
}

TEST_CASE("render_csv: header contract, quoting, LF endings") {
    ReportRow row;
    row.run_id = 1;
    row.test_name = "bonferroni";
    row.regime = "homogeneous";
    row.b_true_index = 0;
    row.alpha = 0.05;
    row.beta = 0.05;
    row.epsilon = 0.1;
    row.m = 50;
    row.dict_size = 2;
    row.n_reps = 100;
    row.rejections = 3;
    row.rate = 0.03;
    row.ci_low = 0.01;
    row.ci_high = 0.08;
    row.seed = 42;
    row.notes = "gate=PASS, type1<=0.05";
    const std::string text = render_csv({row}, 0xabcdef, 42);

    CHECK(text.find("# dmt-csv v1 artifact=0.1.0 config=0000000000abcdef seed=42\n") == 0);
    CHECK(text.find("run_id,test_name,regime,b_true_index,alpha,beta,epsilon,m,dict_size,"
                    "n_reps,rejections,rate,ci_low,ci_high,seed,notes\n") != std::string::npos);
    CHECK(text.find("1,bonferroni,homogeneous,0,0.05,0.05,0.1,50,2,100,3,0.03,0.01,0.08,42,"
                    "\"gate=PASS, type1<=0.05\"\n") != std::string::npos);
    CHECK(text.find('\r') == std::string::npos);
    CHECK(text.back() == '\n');
}

TEST_CASE("render_power_svg: standalone document with axes and polylines") {
    std::map<std::string, std::vector<std::pair<double, double>>> series;
    series["single"] = {{0.0, 0.95}, {1.0, 0.4}, {2.0, 0.01}};
    series["min"] = {{0.0, 0.9}, {1.0, 0.6}, {2.0, 0.05}};
    const std::string svg = render_power_svg("power", series);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("scale") != std::string::npos);
    CHECK(svg.find("acceptance rate") != std::string::npos);
    // one polyline per series
    std::size_t count = 0;
    for (std::size_t pos = svg.find("<polyline"); pos != std::string::npos;
         pos = svg.find("<polyline", pos + 1)) {
        ++count;
    }
    CHECK(count == 2);
    // deterministic output
    CHECK(render_power_svg("power", series) == svg);
}
