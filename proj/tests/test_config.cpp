#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "nhqc/config.hpp"
#include "nhqc/runs.hpp"
#include "nhqc/table.hpp"

using namespace nhqc;

TEST_CASE("zero-argument config is the reference working point") {
    const RunConfig cfg;
    CHECK(cfg.circuit.omega_a == 4475.0);
    CHECK(cfg.circuit.omega_q == std::array<double, 2>{4500.0, 4505.0});
    CHECK(cfg.circuit.omega_c == 5200.0);
    CHECK(cfg.circuit.gamma_q == std::array<double, 2>{1.00, 1.01});
    CHECK(cfg.circuit.gamma_a == 65.0);
    CHECK(cfg.circuit.g_xy == 4.0);
    CHECK(cfg.circuit.g_qc == std::array<double, 2>{30.0, 30.3});
    CHECK(cfg.circuit.lambda_q == std::array<double, 2>{11.0, 11.0});
    CHECK(cfg.circuit.sigma_z == std::array<double, 2>{-1.0, -1.0});
    CHECK(!cfg.ge_override.has_value());
    CHECK(cfg.format == "csv");
    CHECK(cfg.threads == 1);
}

TEST_CASE("document parsing handles comments, blanks, and inline comments") {
    const std::string text =
        "# full-line comment\n"
        "\n"
        "circuit.gamma_a = 80   # trailing comment\n"
        "scan.axis1 = dtheta\n"
        "scan.a1_values = 0.1, 0.2,0.3\n"
        "evolve.engine = rk4\n"
        "evolve.feedback = self_consistent\n"
        "oracle.with_coupler = yes\n"
        "output.format = json\n";
    const RunConfig cfg = parse_config_text(text);
    CHECK(cfg.circuit.gamma_a == 80.0);
    CHECK(cfg.scan.axis1 == Axis::DeltaTheta);
    CHECK(cfg.scan.a1_values == std::vector<double>{0.1, 0.2, 0.3});
    CHECK(cfg.evolve.engine == Engine::Rk4);
    CHECK(cfg.evolve.feedback == Feedback::SelfConsistent);
    CHECK(cfg.oracle.with_coupler);
    CHECK(cfg.format == "json");
    CHECK(cfg.warnings.empty());
}

TEST_CASE("unknown keys fail with a nearest-key suggestion") {
    try {
        parse_config_text("circuit.gama_a = 65\n");
        FAIL("expected UnknownKey");
    } catch (const UnknownKey& e) {
        CHECK(e.key == "circuit.gama_a");
        CHECK(e.suggestion == "circuit.gamma_a");
        CHECK(e.line == 1);
        CHECK(std::string(e.what()).find("did you mean 'circuit.gamma_a'") !=
              std::string::npos);
    }
}

TEST_CASE("parse errors carry the line they came from") {
    try {
        parse_config_text("circuit.gamma_a = 65\n\n   just words\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 3);
        CHECK(e.col == 4);  // first non-blank column
    }
    CHECK_THROWS_AS(parse_config_text("scan.n1 = eleven\n"), ParseError);
    CHECK_THROWS_AS(parse_config_text("circuit.gamma_a = 6.5e\n"), ParseError);
    CHECK_THROWS_AS(parse_config_text("oracle.with_coupler = maybe\n"), ParseError);
    CHECK_THROWS_AS(parse_config_text("scan.axis1 = voltage\n"), ParseError);
    CHECK_THROWS_AS(parse_config_text("evolve.engine = euler\n"), ParseError);
    CHECK_THROWS_AS(parse_config_text("evolve.feedback = banana\n"), ParseError);
    CHECK_THROWS_AS(parse_config_text("output.format = xml\n"), ParseError);
    CHECK_THROWS_AS(parse_config_text("threads = 0\n"), ParseError);
    CHECK_THROWS_AS(parse_config_text("scan.a1_values = \n"), ParseError);
}

TEST_CASE("overrides take precedence over the document") {
    RunConfig cfg = parse_config_text("circuit.gamma_a = 80\nthreads = 2\n");
    apply_override(cfg, "circuit.gamma_a=95.5");
    apply_override(cfg, " seed = 7 ");
    CHECK(cfg.circuit.gamma_a == 95.5);
    CHECK(cfg.threads == 2);
    CHECK(cfg.seed == 7);
    CHECK_THROWS_AS(apply_override(cfg, "no equals sign"), ParseError);
    CHECK_THROWS_AS(apply_override(cfg, "=5"), ParseError);
}

TEST_CASE("suspicious magnitudes produce warnings, not errors") {
    const RunConfig cfg = parse_config_text(
        "circuit.omega_a = 4.475\n"     // looks like GHz
        "circuit.gamma_a = 65000\n"     // looks like kHz
        "circuit.theta_q1 = 12.0\n");   // outside any radian wrap
    REQUIRE(cfg.warnings.size() == 3);
    CHECK(cfg.warnings[0].find("circuit.omega_a") != std::string::npos);
    CHECK(cfg.warnings[1].find("circuit.gamma_a") != std::string::npos);
    CHECK(cfg.warnings[2].find("radians") != std::string::npos);
    // the values are still applied verbatim
    CHECK(cfg.circuit.omega_a == 4.475);
}

TEST_CASE("explicit value lists win over min/max/n") {
    RunConfig cfg;
    cfg.scan.a1_min = -1.0;
    cfg.scan.a1_max = 1.0;
    cfg.scan.n1 = 5;
    CHECK(resolved_axis1(cfg).values.size() == 5);
    CHECK(resolved_axis1(cfg).values.front() == -1.0);
    CHECK(resolved_axis1(cfg).values.back() == 1.0);
    cfg.scan.a1_values = {0.25, 0.5};
    const AxisSpec ax = resolved_axis1(cfg);
    CHECK(ax.values == std::vector<double>{0.25, 0.5});
    CHECK(ax.axis == Axis::GeDirect);
}

TEST_CASE("echo round-trips to an identical configuration") {
    RunConfig cfg = parse_config_text(
        "circuit.lambda_q2 = 11.6\n"
        "model.ge_override = -0.031\n"
        "scan.axis2 = sigma_z\n"
        "scan.a2_values = -1,0,1\n"
        "evolve.t_max = 50\n"
        "evolve.engine = both\n"
        "oracle.gamma_a_schedule = 65,130\n"
        "seed = 42\n");
    std::string doc;
    for (const std::string& line : echo_config(cfg)) doc += line + "\n";
    const RunConfig back = parse_config_text(doc);
    CHECK(echo_config(back) == echo_config(cfg));
    CHECK(back.ge_override == cfg.ge_override);
    CHECK(back.evolve.engine == Engine::Both);
}

TEST_CASE("every echoed key is a recognized key") {
    const auto& keys = config_keys();
    for (const std::string& line : echo_config(RunConfig{})) {
        const std::string key = line.substr(0, line.find(" ="));
        CHECK(std::find(keys.begin(), keys.end(), key) != keys.end());
    }
}

TEST_CASE("file parsing reports unreadable paths") {
    CHECK_THROWS_AS(parse_config_file("/nonexistent/nhqc.conf"), ConfigError);
    const std::string path = "test_config_roundtrip.conf";
    {
        std::ofstream f(path);
        f << "circuit.g_xy = 3.5\n";
    }
    const RunConfig cfg = parse_config_file(path);
    CHECK(cfg.circuit.g_xy == 3.5);
    std::remove(path.c_str());
}

TEST_CASE("json rendering parses back with the same content") {
    RunConfig cfg;
    cfg.scan.n1 = 4;
    cfg.scan.n2 = 3;
    const Table t = run_scan2d(cfg);
    const nlohmann::json j = nlohmann::json::parse(render_json(t));
    REQUIRE(j.contains("comments"));
    REQUIRE(j.contains("columns"));
    REQUIRE(j.contains("rows"));
    CHECK(j["columns"].size() == t.columns.size());
    CHECK(j["rows"].size() == 12);
    CHECK(j["comments"][0].get<std::string>().find("command = scan2d") !=
          std::string::npos);
    // every row is column-aligned and numeric cells survive the round trip
    const auto& row0 = j["rows"][0];
    REQUIRE(row0.size() == t.columns.size());
    CHECK(row0[0].get<double>() == std::get<double>(t.rows[0][0]));
}

TEST_CASE("rendered tables are byte-identical across thread counts") {
    RunConfig base;
    base.scan.n1 = 21;
    base.scan.n2 = 21;
    RunConfig one = base, four = base;
    one.threads = 1;
    four.threads = 4;
    Table t1 = run_scan2d(one);
    Table t4 = run_scan2d(four);
    t1.comments.clear();  // comments echo the thread count by design
    t4.comments.clear();
    CHECK(render_csv(t1) == render_csv(t4));
    CHECK(render_json(t1) == render_json(t4));
}
