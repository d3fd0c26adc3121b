#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "spinlab/scenario.hpp"
#include "spinlab/spin_curves.hpp"

using namespace spinlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
    const fs::path dir = "test_artifacts";
    fs::create_directories(dir);
    return dir;
}

fs::path write_config(const std::string& stem, const std::string& body) {
    const fs::path p = scratch_dir() / (stem + ".json");
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << body;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("step count fitting hits t_end exactly and respects the ceiling") {
    double dt = 0.0;
    const long k = steps_for(0.4, 1.28e-4, dt);
    CHECK(dt <= 1.28e-4);
    CHECK(static_cast<double>(k) * dt == doctest::Approx(0.4).epsilon(1e-15));

    const long one = steps_for(1.0, 2.0, dt);
    CHECK(one == 1);
    CHECK(dt == 1.0);

    CHECK_THROWS_AS(steps_for(0.0, 1.0, dt), ConfigError);
    CHECK_THROWS_AS(steps_for(1.0, 0.0, dt), ConfigError);
}

TEST_CASE("log sweep covers both signs of the stated magnitude range") {
    const std::vector<double> s = log_sweep_mur(5, 1e-3, 10.0);
    REQUIRE(s.size() == 10);
    CHECK(s[0] == doctest::Approx(-1e-3).epsilon(1e-12));
    CHECK(s[4] == doctest::Approx(-10.0).epsilon(1e-12));
    CHECK(s[5] == doctest::Approx(1e-3).epsilon(1e-12));
    CHECK(s[9] == doctest::Approx(10.0).epsilon(1e-12));
    for (int i = 0; i < 5; ++i) {
        CHECK(s[i] < 0.0);
        CHECK(s[i + 5] > 0.0);
        CHECK(std::abs(s[i]) >= 1e-3 * (1.0 - 1e-12));
        CHECK(std::abs(s[i]) <= 10.0 * (1.0 + 1e-12));
    }
    CHECK_THROWS_AS(log_sweep_mur(1, 1e-3, 1.0), ConfigError);
    CHECK_THROWS_AS(log_sweep_mur(5, 0.0, 1.0), ConfigError);
    CHECK_THROWS_AS(log_sweep_mur(5, 2.0, 1.0), ConfigError);
}

TEST_CASE("named scenarios carry their intended defaults") {
    const Scenario base = make_scenario("identities");
    CHECK(base.alpha == 0.0);
    CHECK(base.beta == 2.0);
    CHECK(base.epsilon == 0.1);
    CHECK(base.grid_n == 201);
    CHECK(base.boundary == "dirichlet");

    CHECK(make_scenario("mcf-sphere").t_end == 0.4);
    CHECK(make_scenario("defect-check").t_end == 0.2);

    const Scenario cap = make_scenario("front-capture");
    CHECK(cap.delta == 0.04);
    CHECK(cap.boundary == "reflective");
    CHECK(cap.epsilon == 0.05);
    CHECK(cap.azimuth == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
    CHECK(make_scenario("map2-asymptotics").azimuth == 0.0);

    CHECK(scenario_names().size() == 8);
    CHECK_THROWS_AS(make_scenario("no-such-thing"), ConfigError);
}

TEST_CASE("config files roundtrip and reject malformed input") {
    const fs::path good = write_config(
        "cfg_good", R"({"scenario":"identities","alpha":1.0,"epsilon":0.2,"out":"somewhere"})");
    const Scenario sc = load_scenario(good);
    CHECK(sc.name == "identities");
    CHECK(sc.alpha == 1.0);
    CHECK(sc.epsilon == 0.2);
    CHECK(sc.beta == 2.0); // untouched default
    CHECK(sc.out_dir == "somewhere");

    CHECK_THROWS_AS(load_scenario(scratch_dir() / "does_not_exist.json"), ConfigError);
    CHECK_THROWS_AS(load_scenario(write_config("cfg_trunc", "{")), ConfigError);
    CHECK_THROWS_AS(load_scenario(write_config("cfg_array", "[1,2]")), ConfigError);
    CHECK_THROWS_AS(load_scenario(write_config("cfg_nokey", R"({"alpha":1.0})")), ConfigError);
    CHECK_THROWS_AS(
        load_scenario(write_config("cfg_unknown", R"({"scenario":"identities","bogus":1})")),
        ConfigError);
    CHECK_THROWS_AS(
        load_scenario(write_config("cfg_type", R"({"scenario":"identities","grid_n":"many"})")),
        ConfigError);
    CHECK_THROWS_AS(
        load_scenario(write_config("cfg_frac", R"({"scenario":"identities","grid_n":100.5})")),
        ConfigError);
    CHECK_THROWS_AS(
        load_scenario(write_config("cfg_name", R"({"scenario":"no-such-thing"})")), ConfigError);
}

TEST_CASE("identity and shape row bundles pass on honest parameters") {
    const std::vector<AssertionRow> rows = identity_suite(PhysParams::make(1.0, 2.0, 0.1));
    CHECK(rows.size() >= 8);
    for (const AssertionRow& r : rows) {
        CHECK(r.pass);
        CHECK(r.name.rfind("spin_maps/", 0) == 0);
    }

    const std::vector<AssertionRow> prows = profile_suite(ProfileParams::make(0.2, 0.5));
    CHECK(prows.size() >= 6);
    for (const AssertionRow& r : prows) {
        CHECK(r.pass);
        CHECK(r.name.rfind("transition_profile/", 0) == 0);
    }
}

TEST_CASE("bisection agrees with the closed-form peak location") {
    for (const PhysParams& p :
         {PhysParams::make(1.0, 2.0, 0.1), PhysParams::make(3.0, 1.0, 0.05)}) {
        const double ref = critical_point_v3(p);
        CHECK(std::abs(bisect_critical_point(p) - ref) <= 1e-8 * p.epsilon);
    }
}

TEST_CASE("scenario runs validate eagerly and write deterministic summaries") {
    Scenario bad = make_scenario("identities");
    bad.epsilon = 0.9; // outside the curve-map domain
    CHECK_THROWS_AS(run_scenario(bad), ConfigError);

    Scenario nope;
    nope.name = "no-such-thing";
    CHECK_THROWS_AS(run_scenario(nope), ConfigError);
    CHECK(!fs::exists(fs::path("artifacts") / "no-such-thing"));

    Scenario a = make_scenario("identities");
    a.out_dir = (scratch_dir() / "ident_a").string();
    const ScenarioResult ra = run_scenario(a);
    CHECK(ra.passed);
    CHECK(!ra.rows.empty());
    CHECK(fs::exists(fs::path(a.out_dir) / "summary.csv"));
    CHECK(fs::exists(fs::path(a.out_dir) / "manifest.json"));

    Scenario b = make_scenario("identities");
    b.out_dir = (scratch_dir() / "ident_b").string();
    run_scenario(b);
    CHECK(slurp(fs::path(a.out_dir) / "summary.csv") ==
          slurp(fs::path(b.out_dir) / "summary.csv"));
}

TEST_CASE("the shape-check scenario passes end to end") {
    Scenario sc = make_scenario("profile-checks");
    sc.out_dir = (scratch_dir() / "profchk").string();
    const ScenarioResult res = run_scenario(sc);
    CHECK(res.passed);
    for (const std::string& art : res.artifacts)
        CHECK(fs::exists(fs::path(sc.out_dir) / art));
}
