#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lorot/report.hpp"
#include "lorot/serde.hpp"

using namespace lorot;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

const std::string& cli_path() {
    static const std::string path = [] {
        for (const char* cand : {"./lorot", "../lorot", "build/lorot", "tools/lorot"})
            if (fs::exists(cand)) return fs::absolute(cand).string();
        return std::string{};
    }();
    return path;
}

int run_cli(const std::string& args) {
    REQUIRE(!cli_path().empty());
    const std::string cmd = cli_path() + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("lorot_cli_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    REQUIRE(is.good());
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream os(p, std::ios::binary);
    os << text;
    REQUIRE(os.good());
}

nlohmann::json first_report(const fs::path& json_path) {
    const auto arr = nlohmann::json::parse(slurp(json_path));
    REQUIRE(arr.is_array());
    REQUIRE(!arr.empty());
    return arr[0];
}

const std::string kDiamondConfig = R"({
  "region": {
    "kind": "diamond",
    "spacetime": {"chart": "minkowski", "dim": 2},
    "lo": [-1.0, 0.0],
    "hi": [1.0, 2.0],
    "V": {"kind": "point", "center": [0.0, 0.0]},
    "S": {"kind": "point", "center": [0.0, 2.0]}
  },
  "n_samples": 300
})";

} // namespace

TEST_SUITE("cli_io") {

TEST_CASE("report json survives infinities and nan") {
    VerificationReport r;
    r.name = "edge";
    r.lhs = -std::numeric_limits<double>::infinity();
    r.rhs = 1.5;
    r.slack = std::numeric_limits<double>::infinity();
    r.tolerance = 0.0;
    r.stderr_ = std::nan("");
    r.pass = false;
    r.metadata["note"] = "has, commas";

    const auto j = nlohmann::json::parse(report_to_json(r).dump());
    const auto back = report_from_json(j);
    CHECK(back.name == "edge");
    CHECK(std::isinf(back.lhs));
    CHECK(back.lhs < 0);
    CHECK(back.rhs == 1.5);
    CHECK(std::isinf(back.slack));
    CHECK(back.slack > 0);
    CHECK(std::isnan(back.stderr_));
    CHECK_FALSE(back.pass);
    CHECK(back.metadata.at("note") == "has, commas");

    VerificationReport plain;
    plain.name = "plain";
    plain.lhs = 0.123456789;
    plain.rhs = 1.0;
    plain.slack = plain.rhs - plain.lhs;
    plain.tolerance = 1e-6;
    plain.finalize();
    const auto reports = reports_from_json(reports_to_json({plain, r}));
    REQUIRE(reports.size() == 2);
    CHECK(reports[0].lhs == 0.123456789);
    CHECK(reports[0].pass);
}

TEST_CASE("csv header and special values are stable") {
    VerificationReport r;
    r.name = "row";
    r.lhs = -std::numeric_limits<double>::infinity();
    r.rhs = 2.0;
    r.slack = 0.25;
    r.stderr_ = std::nan("");
    r.pass = true;
    const auto csv = reports_to_csv({r});
    CHECK(csv.rfind("name,lhs,rhs,slack,stderr,pass\n", 0) == 0);
    CHECK(csv.find("row,-inf,2,0.25,nan,true\n") != std::string::npos);
}

TEST_CASE("text files land atomically") {
    const auto dir = fresh_dir("txt");
    const auto target = dir / "out.txt";
    write_text_file(target.string(), "hello\n");
    CHECK(slurp(target) == "hello\n");
    CHECK_FALSE(fs::exists(target.string() + ".tmp"));
    write_text_file(target.string(), "second\n");
    CHECK(slurp(target) == "second\n");
}

TEST_CASE("descriptor serialization round-trips") {
    SpacetimeDescriptor mk;
    mk.kind = Chart::minkowski;
    mk.dim = 3;
    const auto mk2 = nlohmann::json(mk).get<SpacetimeDescriptor>();
    CHECK(mk2.kind == Chart::minkowski);
    CHECK(mk2.dim == 3);

    SpacetimeDescriptor cn;
    cn.kind = Chart::cone;
    cn.dim = 2;
    cn.cone_aperture = 0.75;
    const auto cn2 = nlohmann::json(cn).get<SpacetimeDescriptor>();
    CHECK(cn2.cone_aperture == 0.75);

    SpacetimeDescriptor wp;
    wp.kind = Chart::warped;
    wp.dim = 2;
    wp.profile = WarpProfile::linear;
    wp.fiber = FiberKind::circle;
    wp.fiber_radius = 0.5;
    wp.r_min = 0.5;
    wp.r_max = 3.0;
    const auto wp2 = nlohmann::json(wp).get<SpacetimeDescriptor>();
    CHECK(wp2.profile == WarpProfile::linear);
    CHECK(wp2.fiber == FiberKind::circle);
    CHECK(wp2.fiber_radius == 0.5);
    CHECK(wp2.r_min == 0.5);
    CHECK(wp2.r_max == 3.0);

    SpacetimeDescriptor sw;
    sw.kind = Chart::schwarzschild_interior;
    sw.dim = 4;
    sw.mass = 1.25;
    sw.slab_lo = 0.2;
    sw.slab_hi = 1.5;
    const auto sw2 = nlohmann::json(sw).get<SpacetimeDescriptor>();
    CHECK(sw2.mass == 1.25);
    CHECK(sw2.slab_lo == 0.2);
    CHECK(sw2.slab_hi == 1.5);

    AchronalSetDescriptor slice;
    slice.kind = SetKind::coordinate_slice;
    slice.axis = 1;
    slice.value = 0.5;
    slice.rapidity_cap = 2.5;
    const auto slice2 = nlohmann::json(slice).get<AchronalSetDescriptor>();
    CHECK(slice2.kind == SetKind::coordinate_slice);
    CHECK(slice2.axis == 1);
    CHECK(slice2.value == 0.5);
    CHECK(slice2.rapidity_cap == 2.5);

    AchronalSetDescriptor lvl;
    lvl.kind = SetKind::tau_level;
    lvl.center = {0.25, 0.0};
    lvl.level = 1.5;
    const auto lvl2 = nlohmann::json(lvl).get<AchronalSetDescriptor>();
    CHECK(lvl2.center == std::vector<double>{0.25, 0.0});
    CHECK(lvl2.level == 1.5);

    RegionDescriptor reg;
    reg.st = mk;
    reg.st.dim = 2;
    reg.kind = RegionKind::slope_cone;
    reg.slope_a = 2.0;
    reg.radius = 1.5;
    reg.lo = {-2.0, 0.0};
    reg.hi = {2.0, 2.0};
    const auto reg2 = nlohmann::json(reg).get<RegionDescriptor>();
    CHECK(reg2.kind == RegionKind::slope_cone);
    CHECK(reg2.slope_a == 2.0);
    CHECK(reg2.radius == 1.5);
    CHECK(reg2.lo == reg.lo);

    const auto diamond =
        nlohmann::json::parse(kDiamondConfig)["region"].get<RegionDescriptor>();
    CHECK(diamond.kind == RegionKind::diamond);
    CHECK(diamond.has_V);
    CHECK(diamond.has_S);
    CHECK(diamond.S.center == std::vector<double>{0.0, 2.0});

    CurvatureParams cp{-1.5, 3.5};
    const auto cp2 = nlohmann::json(cp).get<CurvatureParams>();
    CHECK(cp2.K == -1.5);
    CHECK(cp2.N == 3.5);
}

TEST_CASE("sharpness command matches its closed form") {
    const auto dir = fresh_dir("sharp");
    CHECK(run_cli("verify-sharpness --n 2 --a 1 --out " + dir.string()) == 0);
    const auto rep = first_report(dir / "sharpness.json");
    CHECK(rep["pass"].get<bool>());
    CHECK(std::abs(rep["lhs"].get<double>() - std::sqrt(2.0)) < 1e-6);
    const auto csv = slurp(dir / "sharpness.csv");
    CHECK(csv.rfind("name,lhs,rhs,slack,stderr,pass\n", 0) == 0);
}

TEST_CASE("schwarzschild command reproduces the closed-form bound") {
    const auto dir = fresh_dir("sch");
    CHECK(run_cli("verify-schwarzschild --m 1 --slab 0 1 --r0 1 --out " + dir.string()) == 0);
    const auto rep = first_report(dir / "schwarzschild.json");
    CHECK(rep["pass"].get<bool>());
    CHECK(std::abs(rep["lhs"].get<double>() - 4.0 * kPi * (kPi / 2.0 - 1.0)) < 1e-10);
    CHECK(std::abs(rep["rhs"].get<double>() - 128.0 * kPi / 3.0) < 1e-9);
}

TEST_CASE("identical invocations write identical bytes") {
    const auto d1 = fresh_dir("rep1");
    const auto d2 = fresh_dir("rep2");
    const std::string args = "verify-schwarzschild --m 1 --slab 0 1 --r0 0.5 1.0 1.5 --out ";
    CHECK(run_cli(args + d1.string()) == 0);
    CHECK(run_cli(args + d2.string()) == 0);
    CHECK(slurp(d1 / "schwarzschild.json") == slurp(d2 / "schwarzschild.json"));
    CHECK(slurp(d1 / "schwarzschild.csv") == slurp(d2 / "schwarzschild.csv"));
}

TEST_CASE("sprinkle is deterministic for a fixed config and seed") {
    const auto d1 = fresh_dir("sp1");
    const auto d2 = fresh_dir("sp2");
    spit(d1 / "config.json", kDiamondConfig);
    const std::string args =
        "sprinkle --config " + (d1 / "config.json").string() + " --seed 99 --out ";
    CHECK(run_cli(args + d1.string()) == 0);
    CHECK(run_cli(args + d2.string()) == 0);
    const auto body = slurp(d1 / "samples.jsonl");
    CHECK(body == slurp(d2 / "samples.jsonl"));
    CHECK(body.find("\"format\"") != std::string::npos);
}

TEST_CASE("transport and localize commands run the diamond pipeline") {
    const auto dir = fresh_dir("pipe");
    spit(dir / "config.json", kDiamondConfig);
    const std::string cfg = " --config " + (dir / "config.json").string();
    CHECK(run_cli("transport" + cfg + " --n 200 --seed 1 --out " + dir.string()) == 0);
    const auto plan = nlohmann::json::parse(slurp(dir / "plan.json"));
    CHECK(plan["feasible"].get<bool>());
    CHECK(plan["value"].get<double>() > 0.0);
    CHECK(!plan["entries"].empty());

    // a median split can violate the matching condition; the verdict goes red
    CHECK(run_cli("transport" + cfg + " --n 200 --seed 3 --out " + dir.string()) == 1);
    const auto stuck = nlohmann::json::parse(slurp(dir / "plan.json"));
    CHECK_FALSE(stuck["feasible"].get<bool>());
    CHECK(stuck["entries"].empty());

    CHECK(run_cli("localize" + cfg + " --n 120 --out " + dir.string()) == 0);
    const auto rays = nlohmann::json::parse(slurp(dir / "localize.json"));
    REQUIRE(rays.is_array());
    CHECK(!rays.empty());
    for (const auto& r : rays) CHECK(r["pass"].get<bool>());
}

TEST_CASE("content command reports the slice density") {
    const auto dir = fresh_dir("content");
    spit(dir / "config.json", R"({
      "spacetime": {"chart": "minkowski", "dim": 2},
      "V": {"kind": "coordinate_slice", "axis": 1, "value": 0.5},
      "region": {
        "kind": "box",
        "spacetime": {"chart": "minkowski", "dim": 2},
        "lo": [-1.0, 0.2],
        "hi": [1.0, 0.8]
      },
      "eps_grid": [0.05, 0.1],
      "n_samples": 50000
    })");
    CHECK(run_cli("content --config " + (dir / "config.json").string() + " --out " +
                  dir.string()) == 0);
    const auto est = nlohmann::json::parse(slurp(dir / "estimate.json"));
    CHECK(std::abs(est["value"].get<double>() - 2.0) < 0.2);
    CHECK(est["per_eps"].size() == 2);
    const auto reports = nlohmann::json::parse(slurp(dir / "content.json"));
    REQUIRE(reports.is_array());
    CHECK(reports[0]["pass"].get<bool>());
}

TEST_CASE("curvature mismatch turns the monotonicity verdict red") {
    const auto dir = fresh_dir("mono");
    spit(dir / "config.json", R"({
      "region": {
        "kind": "slope_cone",
        "spacetime": {"chart": "minkowski", "dim": 2},
        "lo": [-2.2, 0.0],
        "hi": [2.2, 3.0],
        "slope_a": 2.0,
        "radius": 2.0
      },
      "V": {"kind": "point", "center": [0.0, 0.0]},
      "n_samples": 20000
    })");
    const std::string cfg = " --config " + (dir / "config.json").string();
    const std::string grid = " --t-grid 0.5 1.0 1.5";
    CHECK(run_cli("verify-monotonicity" + cfg + grid + " --K 0 --N 2 --out " + dir.string()) ==
          0);
    CHECK(run_cli("verify-monotonicity" + cfg + grid + " --K 0 --N 1 --out " + dir.string()) ==
          1);
}

TEST_CASE("interpolation command accepts box endpoint sets") {
    const auto dir = fresh_dir("bm");
    spit(dir / "config.json", R"({
      "spacetime": {"chart": "minkowski", "dim": 2},
      "A0_box": {"lo": [-0.5, 0.0], "hi": [0.5, 1.0]},
      "A1_box": {"lo": [-0.5, 2.5], "hi": [0.5, 3.5]},
      "curvature": {"K": 0.0, "N": 2.0},
      "n_samples": 6000
    })");
    CHECK(run_cli("verify-brunn-minkowski --config " + (dir / "config.json").string() +
                  " --t 0.5 --out " + dir.string()) == 0);
    const auto rep = first_report(dir / "brunn_minkowski.json");
    CHECK(rep["pass"].get<bool>());
}

TEST_CASE("isoperimetry command verifies the model cone") {
    const auto dir = fresh_dir("iso");
    spit(dir / "config.json", R"({
      "spacetime": {"chart": "cone", "dim": 2, "aperture": 1.0},
      "V": {"kind": "point"},
      "S": {"kind": "hyperboloid", "level": 1.0},
      "curvature": {"K": 0.0, "N": 2.0},
      "n_samples": 30000
    })");
    CHECK(run_cli("verify-isoperimetry --config " + (dir / "config.json").string() +
                  " --out " + dir.string()) == 0);
    const auto rep = first_report(dir / "isoperimetry.json");
    CHECK(rep["pass"].get<bool>());
}

TEST_CASE("usage and config errors exit with code two") {
    const auto dir = fresh_dir("err");
    CHECK(run_cli("sprinkle --config " + (dir / "missing.json").string()) == 2);
    CHECK(run_cli("") == 2);
    CHECK(run_cli("verify-sharpness --bogus 1") == 2);

    spit(dir / "small.json", R"({"n_samples": 50})");
    CHECK(run_cli("verify-sharpness --config " + (dir / "small.json").string()) == 2);

    spit(dir / "noregion.json", R"({"n_samples": 500})");
    CHECK(run_cli("sprinkle --config " + (dir / "noregion.json").string()) == 2);
}

} // TEST_SUITE
