#include "berger/commands.hpp"
#include "berger/report.hpp"

#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace berger;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string config_path(const char* name) { return std::string(BERGER_TEST_CONFIGS) + "/" + name; }

std::string temp_path(const char* name) { return (std::filesystem::temp_directory_path() / name).string(); }

struct Run {
    int code;
    std::string out, err;
};

Run run(const std::string& command, const std::string& config, CliOverrides o = {}) {
    std::ostringstream out, err;
    const int code = run_command(command, config, o, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("key-value grammar") {
    const RunConfig c = parse_config(R"(
# leading comment
model.kappa = 5     # trailing comment
[model]
tau = -1
[surface]
kind = "perturbed"
r = 0.25
mode = 3, 1
[grid]
Nu = 40
Nv = 48
[flow]
enabled = false
)");
    CHECK(c.kappa == 5);
    CHECK(c.tau == -1);
    CHECK(c.surface.kind == "perturbed");
    CHECK(c.surface.r == 0.25);
    CHECK(c.surface.mode == std::pair{3, 1});
    CHECK(c.nu == 40);
    CHECK(c.nv == 48);
    CHECK_FALSE(c.flow.enabled);
    CHECK(c.checks == std::vector<std::string>{"all"});
}

TEST_CASE("key-value grammar errors") {
    CHECK_THROWS_AS(parse_config("model.kappa = 1\nmodel.tau = 1\nbogus = 3\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("model.kappa = 1\nmodel.kappa = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("model.kappa = one\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[model\nkappa = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("just words\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("grid.Nu = 32.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("surface.kind = sphere\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("flow.max_steps = -1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("model.kappa = 4\nmodel.tau = 1\n"), ModelError);
    CHECK_THROWS_AS(load_config(config_path("missing.cfg")), ConfigError);
}

TEST_CASE("JSON configs read the same as key-value configs") {
    const RunConfig a = load_config(config_path("clifford.cfg"));
    const RunConfig b = load_config(config_path("clifford.json"));
    CHECK(to_json(a).dump() == to_json(b).dump());
    CHECK_THROWS_AS(parse_config("{\"model\": {\"kappa\": [1, {}]}}"), ConfigError);
    CHECK_THROWS_AS(parse_config("{\"model\": "), ConfigError);
}

TEST_CASE("surfaces built from a config honour the chart") {
    RunConfig c = parse_config("surface.kind = cylinder\nmodel.kappa = 0\nmodel.tau = 0.5\nchart = bcv\n");
    CHECK(build_surface(c).kind == SurfaceKind::Cylinder);
    c.chart = "hopf";
    CHECK_THROWS_AS(build_surface(c), ConfigError);
    c = parse_config("surface.kind = hopf_torus\nmodel.kappa = 0\nmodel.tau = 0.5\n");
    CHECK_THROWS_AS(build_surface(c), ModelError);
    c = parse_config("surface.kind = critical_torus\nmodel.kappa = 3\nmodel.tau = 1\n");
    CHECK_THROWS_AS(build_surface(c), NoCriticalTorusError);
}

TEST_CASE("JSON numbers carry 17 significant digits and keep key order") {
    Json j;
    j["zeta"] = 0.1;
    j["alpha"] = 1;
    j["nan"] = std::nan("");
    j["list"] = {1.0 / 3.0, true, "x"};
    j["empty"] = Json::object();
    const std::string s = dump_json(j);
    CHECK(s.find("\"zeta\": 0.10000000000000001") != std::string::npos);
    CHECK(s.find("\"zeta\"") < s.find("\"alpha\""));
    CHECK(s.find("\"nan\": null") != std::string::npos);
    CHECK(s.find("0.33333333333333331") != std::string::npos);
    CHECK(s.find("\"empty\": {}") != std::string::npos);
    CHECK(Json::parse(s)["list"][1] == true);
}

TEST_CASE("check reports serialize to JSON and CSV") {
    CheckReport r;
    r.id = "lemma5.1";
    r.status = CheckStatus::Fail;
    r.pointwise_max_residual = 2e-3;
    r.tolerance = 1e-4;
    r.residuals = {{"lemma5.1a", 2e-3, -1e-5}, {"lemma5.1b", 1e-6, std::nullopt}};
    r.flags = {{"equality", false}};
    const Json j = to_json(r);
    CHECK(j["passed"] == false);
    CHECK(j["residuals"][0]["id"] == "lemma5.1a");
    CHECK(j["residuals"][1]["integral"].is_null());
    CHECK(j["integral_value"].is_null());
    std::ostringstream csv;
    write_checks_csv(csv, {r});
    CHECK(csv.str() ==
          "check,residual,status,max_abs,integral,tolerance,integral_tolerance\n"
          "lemma5.1,lemma5.1,fail,0.002,,0.0001,0\n"
          "lemma5.1,lemma5.1a,fail,0.002,-1.0000000000000001e-05,0.0001,0\n"
          "lemma5.1,lemma5.1b,fail,9.9999999999999995e-07,,0.0001,0\n");
    CHECK(summarize({r})["fail"] == 1);
}

TEST_CASE("verify command: exit codes and report") {
    const std::string json = temp_path("berger_verify_test.json");
    CliOverrides o;
    o.json_path = json;
    const Run ok = run("verify", config_path("clifford.cfg"), o);
    CHECK(ok.code == kExitOk);
    const Json report = Json::parse(slurp(json));
    CHECK(report["checks"].size() == 12);
    CHECK(report["summary"]["fail"] == 0);
    CHECK(report["config"]["model"]["kappa"] == 1.0);

    CHECK(run("verify", config_path("space_form.cfg")).code == kExitInput);
    CHECK(run("verify", config_path("unknown_check.cfg")).code == kExitInput);
    CHECK(run("verify", config_path("perturbed_strict.cfg")).code == kExitFail);
    CHECK(run("frobnicate", config_path("clifford.cfg")).code == kExitInput);
    std::remove(json.c_str());
}

TEST_CASE("verify command output is byte-identical across runs") {
    const std::string a = temp_path("berger_det_a.json"), b = temp_path("berger_det_b.json");
    CliOverrides oa, ob;
    oa.json_path = a;
    ob.json_path = b;
    oa.grid = ob.grid = 32;
    REQUIRE(run("verify", config_path("clifford.cfg"), oa).code == kExitOk);
    REQUIRE(run("verify", config_path("clifford.cfg"), ob).code == kExitOk);
    CHECK(slurp(a) == slurp(b));
    CHECK(!slurp(a).empty());
    std::remove(a.c_str());
    std::remove(b.c_str());
}

TEST_CASE("energy command") {
    const Run c = run("energy", config_path("clifford.cfg"));
    CHECK(c.code == kExitOk);
    CHECK(c.out.find("W         = 157.9136704\n") != std::string::npos);  // 16 pi^2 to 10 digits
    const Run s = run("energy", config_path("slice.cfg"));
    CHECK(s.code == kExitOk);
    CHECK(s.out.find("not evaluated on a patch") != std::string::npos);
}

TEST_CASE("flow command") {
    const std::string csv = temp_path("berger_flow_test.csv");
    CliOverrides o;
    o.csv_path = csv;
    const Run f = run("flow", config_path("flow.cfg"), o);
    CHECK(f.code == kExitOk);
    CHECK(f.out.find("target H  = 0.707106781187") != std::string::npos);
    CHECK(slurp(csv).rfind("step,parameter,energy,grad_norm,step_size\n", 0) == 0);

    const Run k3 = run("flow", config_path("flow_k3.cfg"));
    CHECK(k3.code == kExitOk);
    CHECK(k3.out.find("no critical torus with H != 0") != std::string::npos);

    const Run zero = run("flow", config_path("flow_zero.cfg"), o);
    CHECK(zero.code == kExitOk);
    const std::string rows = slurp(csv);
    CHECK(std::count(rows.begin(), rows.end(), '\n') == 2);  // header + initial point

    CHECK(run("flow", config_path("flow_short.cfg")).code == kExitFail);
    std::remove(csv.c_str());
}

TEST_CASE("convergence command") {
    const Run c = run("convergence", config_path("convergence.cfg"));
    CHECK(c.code == kExitOk);
    CHECK(c.out.find("slope") != std::string::npos);
    CHECK(run("convergence", config_path("convergence_unknown.cfg")).code == kExitInput);
    CHECK(fit_slope({0.1, 0.05, 0.025}, {1e-2, 2.5e-3, 6.25e-4}) == doctest::Approx(2.0));
}
