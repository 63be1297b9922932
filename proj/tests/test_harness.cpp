#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

#include "kschemo/errors.hpp"
#include "kschemo/harness/catalog.hpp"
#include "kschemo/harness/commands.hpp"
#include "kschemo/harness/config.hpp"
#include "kschemo/harness/io.hpp"

using namespace kschemo;
using namespace kschemo::harness;
namespace fs = std::filesystem;

namespace {

const char* kUnitConfig = R"(# unit setup
name = unit
model.d1 = 1
model.d2 = 1
model.chi = 4.4
model.mu = 1
model.ubar = 1
domain.kind = interval
domain.lx = pi
grid.nx = 64
init.u.kind = branch_seed
init.u.m = 1
init.u.s = 0.01
init.v.kind = branch_seed
init.v.m = 1
init.v.s = 0.01
)";

int error_line(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.line();
    }
    return -1;
}

std::string error_text(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

fs::path temp_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("kschemo_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("parse fills defaults") {
    const ScenarioConfig c = parse_config(kUnitConfig);
    CHECK(c.name == "unit");
    CHECK(c.params.chi() == 4.4);
    CHECK(c.params.alpha() == 1.0);
    CHECK(c.domain.lx == std::numbers::pi);
    CHECK(c.run.tol_ss == 1e-8);
    CHECK_FALSE(c.run.blow_up_cap.has_value());
    CHECK(c.run.t_max == 200.0);
    CHECK(c.init_u.kind == InitKind::branch_seed);
    CHECK(parse_config(emit_config(c)) == c);
}

TEST_CASE("parse errors carry line numbers") {
    std::string text = kUnitConfig;
    CHECK(error_line(text + "model.bogus = 1\n") == 17);
    CHECK(error_line(text + "model.chi = 3\n") == 17);
    CHECK(error_line(text + "run.t_max = abc\n") == 17);
    CHECK(error_line(text + "this line has no equals\n") == 17);
    CHECK(error_line(text + "init.u.width = 2\n") == 17);

    std::string neg = text;
    neg.replace(neg.find("model.d1 = 1"), 12, "model.d1 = -1");
    CHECK(error_line(neg) == 3);
    CHECK(error_text(neg).find("d1 must be positive") != std::string::npos);

    std::string missing = text;
    missing.erase(missing.find("model.ubar = 1\n"), 15);
    CHECK(error_text(missing).find("model.ubar") != std::string::npos);

    std::string family = text;
    family.replace(family.find("kind = branch_seed"), 18, "kind = sawtooth");
    CHECK(error_line(family) == 11);

    std::string noise = text;
    noise.replace(noise.find("init.u.kind = branch_seed\ninit.u.m = 1\ninit.u.s = 0.01"), 52,
                  "init.u.kind = noise\ninit.u.amp = 0.1");
    CHECK(error_text(noise).find("seed") != std::string::npos);
}

TEST_CASE("catalog: names, round-trip, transcribed parameters") {
    const auto& cat = scenario_catalog();
    CHECK(cat.size() == 13);
    std::set<std::string> names;
    for (const ScenarioConfig& c : cat) {
        names.insert(c.name);
        CAPTURE(c.name);
        CHECK(parse_config(emit_config(c)) == c);
        CHECK(c.params.alpha() == 1.0);
        if (c.domain.lx <= 4.0) {
            CHECK(c.nx == 128);
        }
    }
    CHECK(names.size() == cat.size());

    const ScenarioConfig& fig2 = find_scenario("fig2");
    CHECK(fig2.params.d1() == 5.0);
    CHECK(fig2.params.chi() == 5.0);
    CHECK(fig2.params.d2() == 0.01);
    CHECK(fig2.params.ubar() == 3.0);
    CHECK(fig2.params.mu() == 1.0);
    CHECK(fig2.domain == Domain::square(1.0));
    CHECK(fig2.nx == 128);
    CHECK(fig2.ny == 128);
    CHECK(fig2.run.t_max == 200.0);
    CHECK(fig2.init_u.amp == 1.0);
    CHECK(fig2.init_u.kx == 2 * std::numbers::pi);
    CHECK(fig2.init_u.ky == std::numbers::pi);

    const ScenarioConfig& fig3 = find_scenario("fig3");
    CHECK(fig3.params.d1() == 0.0625);
    CHECK(fig3.params.d2() == 1.0);
    CHECK(fig3.params.chi() == 19.0);
    CHECK(fig3.params.mu() == 8.0);
    CHECK(fig3.params.ubar() == 1.0);

    CHECK(find_scenario("fig4b").params.chi() == 20.0);
    CHECK(find_scenario("fig4c").params.d2() == 0.005);
    CHECK(find_scenario("fig5_L15").domain.lx == 15.0);
    CHECK(find_scenario("fig5_L15").nx == 480);
    CHECK(find_scenario("fig6_ii").params.d1() == 0.125);
    CHECK(find_scenario("fig6_iii").params.mu() == 6.0);
    CHECK(find_scenario("fig6_iv").domain.lx == 2 * find_scenario("fig6_iii").domain.lx);
    CHECK_THROWS_AS(find_scenario("fig7"), ConfigError);
}

TEST_CASE("analyze: unit ladder and fig4a threshold") {
    ScenarioConfig c = parse_config(kUnitConfig);
    const AnalyticsReport r = analyze(c);
    REQUIRE(!r.rows.empty());
    CHECK(r.rows[0].mode.m == 1);
    CHECK(r.rows[0].chi_bar == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(r.rows[0].q == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.rows[0].is_minimizer);
    CHECK(r.rows[0].branch_type == BranchType::pitchfork);
    for (std::size_t k = 1; k < r.rows.size(); ++k) {
        CHECK(r.rows[k - 1].chi_bar <= r.rows[k].chi_bar);
        CHECK(r.rows[k].chi_bar > 0.0);
    }
    std::ostringstream csv;
    write_analytics_csv(csv, r);
    CHECK(csv.str().rfind("m,n,lambda,chi_bar,Q,branch_type,chi_prime,chi_double_prime,stability,minimizer,multiplicity\n",
                          0) == 0);
    CHECK(csv.str().find("\n1,0,1,4,2,pitchfork,") != std::string::npos);

    CHECK(analyze(find_scenario("fig4a")).threshold.chi0 < 5.0);
    CHECK(analyze(c, 50.0).rows.size() == 7);

    c.params = ModelParams(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, Sensitivity(SensitivityKind::volume_filling));
    CHECK_THROWS_WITH_AS(analyze(c), doctest::Contains("unit"), DegenerateModelError);
}

TEST_CASE("mu = 0 with constant sensitivity has a flat second-order branch") {
    ScenarioConfig c = parse_config(kUnitConfig);
    c.params = ModelParams(1.0, 1.0, 1.0, 0.0, 1.0, 1.0, Sensitivity(SensitivityKind::constant));
    const AnalyticsReport r = analyze(c);
    REQUIRE(!r.rows.empty());
    if (r.rows[0].chi_double_prime) {
        CHECK(std::abs(*r.rows[0].chi_double_prime) <= 1e-12);
    } else {
        CHECK(!r.rows[0].warnings.empty());
    }
}

TEST_CASE("field CSV and PGM writers") {
    const Grid grid(Domain::rectangle(2.0, 1.0), 8, 8);
    FieldState s;
    for (int j = 0; j < 8; ++j)
        for (int i = 0; i < 8; ++i) {
            s.u.push_back(0.1 + i + 10 * j);
            s.v.push_back(1.0 / 3.0);
        }
    std::ostringstream csv;
    write_field_csv(csv, grid, s);
    std::istringstream lines(csv.str());
    std::string header, first;
    std::getline(lines, header);
    std::getline(lines, first);
    CHECK(header == "x,y,u,v");
    CHECK(first == "0.125,0.0625,0.1,0.3333333333333333");

    std::ostringstream pgm;
    const HeatmapRange range = write_pgm(pgm, grid, s.u);
    CHECK(range.min == 0.1);
    CHECK(range.max == doctest::Approx(77.1));
    const std::string img = pgm.str();
    REQUIRE(img.rfind("P5\n8 8\n255\n", 0) == 0);
    const std::string pixels = img.substr(std::string("P5\n8 8\n255\n").size());
    REQUIRE(pixels.size() == 64);
    CHECK(static_cast<unsigned char>(pixels[7 * 8 + 0]) == 0);    // bottom-left cell, smallest value
    CHECK(static_cast<unsigned char>(pixels[0 * 8 + 7]) == 255);  // top-right cell, largest value

    std::ostringstream flat;
    write_pgm(flat, grid, s.v);
    const std::string fp = flat.str().substr(std::string("P5\n8 8\n255\n").size());
    CHECK(fp == std::string(64, '\0'));

    const Grid line(Domain::interval(1.0), 8);
    FieldState s1{std::vector<double>(8, 1.0), std::vector<double>(8, 2.0), 0.0, 0};
    std::ostringstream csv1;
    write_field_csv(csv1, line, s1);
    CHECK(csv1.str().rfind("x,u,v\n0.0625,1,2\n", 0) == 0);
}

TEST_CASE("simulate writes snapshots and is reproducible") {
    ScenarioConfig c = parse_config(kUnitConfig);
    c.run.t_max = 0.2;
    c.output.times = {0.1};
    const fs::path d1 = temp_dir("sim_a"), d2 = temp_dir("sim_b");
    const SimulationResult a = simulate(c, d1);
    simulate(c, d2);
    CHECK(fs::exists(d1 / "unit_t0.1.csv"));
    CHECK(fs::exists(d1 / "unit_u_t0.1.pgm"));
    CHECK(fs::exists(d1 / "unit_u_t0.1.range.txt"));
    CHECK(fs::exists(d1 / "unit_v_t0.2.pgm"));
    CHECK(fs::exists(d1 / "unit_t0.2.csv"));
    CHECK(fs::exists(d1 / "unit_monitor.csv"));
    CHECK(fs::exists(d1 / "unit_summary.txt"));
    CHECK(slurp(d1 / "unit_t0.2.csv") == slurp(d2 / "unit_t0.2.csv"));
    CHECK(a.report.outcome == Outcome::max_steps);
    fs::remove_all(d1);
    fs::remove_all(d2);
}

TEST_CASE("sweep: empty, input order, failures recorded") {
    ScenarioConfig c = parse_config(kUnitConfig);
    c.run.t_max = 0.05;
    CHECK(sweep(c, SweepAxis::chi, {}).empty());
    const auto rows = sweep(c, SweepAxis::chi, {1.0, 3.0, 2.0}, 2);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].value == 1.0);
    CHECK(rows[1].value == 3.0);
    CHECK(rows[2].value == 2.0);
    const auto bad = sweep(c, SweepAxis::d1, {-1.0, 1.0}, 1);
    CHECK(bad[0].outcome == "error");
    CHECK(!bad[0].error.empty());
    CHECK(bad[1].outcome != "error");
    std::ostringstream csv;
    write_sweep_csv(csv, bad);
    CHECK(csv.str().rfind("value,outcome,max_u,dominant_mode,steady_residual,error\n", 0) == 0);

    CHECK(apply_axis(find_scenario("fig5_L2"), SweepAxis::L, 4.0).domain == Domain::square(4.0));
    CHECK(apply_axis(c, SweepAxis::mu, 3.0).params.mu() == 3.0);
    CHECK(parse_sweep_axis("d2") == SweepAxis::d2);
    CHECK_THROWS_AS(parse_sweep_axis("beta"), ConfigError);
}

TEST_CASE("dominant mode of a branch seed") {
    const ScenarioConfig c = parse_config(kUnitConfig);
    const FieldState s = initial_state(c);
    const auto dom = dominant_mode(c.grid(), s.u, 20.0);
    REQUIRE(dom.has_value());
    CHECK(dom->m == 1);
    CHECK_FALSE(dominant_mode(c.grid(), std::vector<double>(64, 1.0), 20.0).has_value());
}

TEST_CASE("noise initial data is seeded") {
    ScenarioConfig c = parse_config(kUnitConfig);
    c.init_u = FieldInit{};
    c.init_u.kind = InitKind::noise;
    c.init_u.amp = 0.1;
    c.init_u.seed = 17;
    const FieldState a = initial_state(c);
    const FieldState b = initial_state(parse_config(emit_config(c)));
    CHECK(a.u == b.u);
    c.init_u.seed = 18;
    CHECK(initial_state(c).u != a.u);
}

}
