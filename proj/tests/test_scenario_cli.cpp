#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "uavplace/cli.hpp"
#include "uavplace/errors.hpp"
#include "uavplace/placement.hpp"
#include "uavplace/scenario_io.hpp"

using namespace uavplace;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

bool close_rel(double a, double b, double tol = 1e-12) {
    return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

fs::path fresh_dir(const char* name) {
    const fs::path p = fs::temp_directory_path() / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

int run_cli(std::vector<const char*> argv) {
    argv.insert(argv.begin(), "uavplace");
    return cli::run(static_cast<int>(argv.size()), argv.data());
}

CrowdSpec two_blob_spec() {
    CrowdSpec spec;
    spec.hotspots.push_back({{300.0, 300.0}, 40.0, 25});
    spec.hotspots.push_back({{900.0, 900.0}, 60.0, 25});
    spec.background_count = 10;
    return spec;
}

}  // namespace

TEST_CASE("generate: counts, bounds, and seed determinism") {
    const CrowdSpec spec = two_blob_spec();
    const Scenario a = io::generate(spec, 7);
    REQUIRE(a.n_ues() == 60);
    CHECK(a.gbs == Point2{600.0, 600.0});
    for (Eigen::Index i = 0; i < a.n_ues(); ++i) {
        CHECK(a.ue(i, 0) >= 0.0);
        CHECK(a.ue(i, 0) <= spec.area.width_m);
        CHECK(a.ue(i, 1) >= 0.0);
        CHECK(a.ue(i, 1) <= spec.area.height_m);
    }

    const Scenario b = io::generate(spec, 7);
    CHECK(a.ue == b.ue);

    const Scenario c = io::generate(spec, 8);
    REQUIRE(c.n_ues() == 60);
    CHECK(a.ue != c.ue);

    CrowdSpec empty;
    empty.background_count = 0;
    CHECK_THROWS_AS(io::generate(empty, 1), ParseError);
    CrowdSpec negative = spec;
    negative.hotspots[0].count = -1;
    CHECK_THROWS_AS(io::generate(negative, 1), ParseError);
}

TEST_CASE("generate_from_spec_json: blocks land, gbs defaults to the centre") {
    const json spec = {
        {"area", {{"width_m", 1000.0}, {"height_m", 800.0}}},
        {"hotspots",
         json::array({{{"x_m", 200.0}, {"y_m", 300.0}, {"std_dev_m", 25.0}, {"count", 10}}})},
        {"background_count", 5},
        {"gbs", {{"x_m", 100.0}, {"y_m", 100.0}}},
        {"radio", {{"c_min", 2e6}}},
        {"env", {{"a", 9.0}}},
    };
    const Scenario s = io::generate_from_spec_json(spec, 2);
    CHECK(s.n_ues() == 15);
    CHECK(s.area.width_m == 1000.0);
    CHECK(s.area.height_m == 800.0);
    CHECK(s.gbs == Point2{100.0, 100.0});
    CHECK(s.radio.c_min_bps == 2e6);
    CHECK(s.radio.alpha == 6.5);  // untouched default
    CHECK(s.env.a == 9.0);
    CHECK(s.env.b == 0.16);

    json centred = spec;
    centred.erase("gbs");
    CHECK(io::generate_from_spec_json(centred, 2).gbs == Point2{500.0, 400.0});

    json bad_radio = spec;
    bad_radio["radio"]["bogus"] = 1;
    CHECK_THROWS_AS(io::generate_from_spec_json(bad_radio, 2), ParseError);
}

TEST_CASE("scenario json round-trip preserves every field") {
    CrowdSpec spec = two_blob_spec();
    Scenario s = io::generate(spec, 3);
    s.seed = 42;
    s.radio.c_min_bps = 1.5e6;
    s.radio.mmwave_sinr_gate = true;
    s.radio.c_hat_g_override_bps = 3.3e7;
    s.env.b = 0.2;
    s.gbs = {400.0, 500.0};

    const json j = io::scenario_to_json(s);
    const Scenario t = io::scenario_from_json(j, "");

    CHECK(t.ue == s.ue);  // bitwise: shortest round-trip doubles
    CHECK(t.gbs == s.gbs);
    CHECK(t.area.width_m == s.area.width_m);
    CHECK(t.area.height_m == s.area.height_m);
    CHECK(t.seed == 42);

    // Linear fields cross the boundary untouched.
    CHECK(t.radio.c_min_bps == s.radio.c_min_bps);
    CHECK(t.radio.alpha == s.radio.alpha);
    CHECK(t.radio.g_tx == s.radio.g_tx);
    CHECK(t.radio.bandwidth_hz == s.radio.bandwidth_hz);
    CHECK(t.radio.bandwidth_mmwave_total_hz == s.radio.bandwidth_mmwave_total_hz);
    CHECK(t.radio.f_c_hz == s.radio.f_c_hz);
    CHECK(t.radio.c_hat_g_override_bps == s.radio.c_hat_g_override_bps);
    CHECK(t.radio.k_max == s.radio.k_max);
    CHECK(t.radio.mmwave_sinr_gate == s.radio.mmwave_sinr_gate);
    CHECK(t.radio.gbs_outage_mode == s.radio.gbs_outage_mode);
    CHECK(t.env.a == s.env.a);
    CHECK(t.env.b == s.env.b);
    CHECK(t.env.eta_los_db == s.env.eta_los_db);
    CHECK(t.env.eta_nlos_db == s.env.eta_nlos_db);

    // dB-carried fields tolerate one conversion round trip.
    CHECK(close_rel(t.radio.p_g_mw, s.radio.p_g_mw));
    CHECK(close_rel(t.radio.p_uav_mw, s.radio.p_uav_mw));
    CHECK(close_rel(t.radio.p_mmwave_mw, s.radio.p_mmwave_mw));
    CHECK(close_rel(t.radio.n0_mw_hz, s.radio.n0_mw_hz));
    CHECK(close_rel(t.radio.sinr_threshold, s.radio.sinr_threshold));
    CHECK(close_rel(t.radio.sinr_threshold_mmwave, s.radio.sinr_threshold_mmwave));
}

TEST_CASE("scenario json: exactly one UE source, unknown keys rejected") {
    const Scenario s = io::generate(two_blob_spec(), 3);
    json j = io::scenario_to_json(s);

    json both = j;
    both["ue_file"] = "x.csv";
    CHECK_THROWS_AS(io::scenario_from_json(both, ""), ParseError);

    json neither = j;
    neither.erase("ues");
    CHECK_THROWS_AS(io::scenario_from_json(neither, ""), ParseError);

    json bad_env = j;
    bad_env["env"]["zeta"] = 1.0;
    CHECK_THROWS_AS(io::scenario_from_json(bad_env, ""), ParseError);

    json bad_row = j;
    bad_row["ues"][0] = json::array({1.0});
    CHECK_THROWS_AS(io::scenario_from_json(bad_row, ""), ParseError);
}

TEST_CASE("ue csv: exact round trip and malformed inputs") {
    const fs::path dir = fresh_dir("uavplace_csv_test");
    PointList pts(4, 2);
    pts << 314.15926535897933, 1e-3, 0.0, 1199.9999999999999, 600.5, 600.25, 1.0, 2.0;
    const fs::path file = dir / "ues.csv";
    io::save_ue_csv(pts, file.string());

    const PointList back = io::load_ue_csv(file.string());
    CHECK(back == pts);
    CHECK(lines(slurp(file)).size() == 5);
    CHECK(lines(slurp(file))[0] == "id,x,y");

    // Headerless data is accepted.
    std::ofstream(dir / "raw.csv") << "0,5,6\n1,7,8\n";
    const PointList raw = io::load_ue_csv((dir / "raw.csv").string());
    REQUIRE(raw.rows() == 2);
    CHECK(raw(1, 0) == 7.0);

    std::ofstream(dir / "short.csv") << "id,x,y\n0,12\n";
    CHECK_THROWS_AS(io::load_ue_csv((dir / "short.csv").string()), ParseError);
    std::ofstream(dir / "alpha.csv") << "0,a,b\n";
    CHECK_THROWS_AS(io::load_ue_csv((dir / "alpha.csv").string()), ParseError);
    std::ofstream(dir / "empty.csv") << "id,x,y\n";
    CHECK_THROWS_AS(io::load_ue_csv((dir / "empty.csv").string()), ParseError);
    CHECK_THROWS_AS(io::load_ue_csv((dir / "absent.csv").string()), ParseError);
}

TEST_CASE("scenario files: ue_file resolves relative to the scenario") {
    const fs::path dir = fresh_dir("uavplace_scn_test");
    const Scenario s = io::generate(two_blob_spec(), 5);
    io::save_ue_csv(s.ue, (dir / "crowd.csv").string());

    json j = io::scenario_to_json(s);
    j.erase("ues");
    j["ue_file"] = "crowd.csv";
    std::ofstream(dir / "scn.json") << j.dump(2) << "\n";

    const Scenario t = io::load_scenario((dir / "scn.json").string());
    CHECK(t.ue == s.ue);

    // save_scenario / load_scenario with inline UEs round-trips too.
    io::save_scenario(s, (dir / "inline.json").string());
    CHECK(io::load_scenario((dir / "inline.json").string()).ue == s.ue);
}

TEST_CASE("apply_overrides: touched fields change, the rest stay bit-exact") {
    Scenario s = io::generate(two_blob_spec(), 1);
    const Scenario before = s;

    io::apply_overrides(s, {"radio.c_min=2e6", "env.a=12"});
    CHECK(s.radio.c_min_bps == 2e6);
    CHECK(s.env.a == 12.0);
    CHECK(s.radio.alpha == before.radio.alpha);
    CHECK(s.radio.p_g_mw == before.radio.p_g_mw);        // untouched dB field: no drift
    CHECK(s.radio.n0_mw_hz == before.radio.n0_mw_hz);
    CHECK(s.env.b == before.env.b);

    io::apply_overrides(s, {"radio.mmwave_sinr_gate=true"});
    CHECK(s.radio.mmwave_sinr_gate);

    io::apply_overrides(s, {"radio.p_uav_dbm=23"});
    CHECK(close_rel(s.radio.p_uav_mw, channel::dbm_to_mw(23.0)));

    CHECK_THROWS_AS(io::apply_overrides(s, {"c_min=2e6"}), ParseError);
    CHECK_THROWS_AS(io::apply_overrides(s, {"radio.c_min"}), ParseError);
    CHECK_THROWS_AS(io::apply_overrides(s, {"radio.bogus=1"}), ParseError);
    CHECK_THROWS_AS(io::apply_overrides(s, {"radio.c_min=\"fast\""}), ParseError);
}

TEST_CASE("result files: save and load reproduce the placement") {
    const fs::path dir = fresh_dir("uavplace_result_test");
    CrowdSpec spec;
    spec.hotspots.push_back({{600.0, 600.0}, 20.0, 45});
    const Scenario s = io::generate(spec, 11);
    const PlacementResult r = placement::place(s);
    REQUIRE(r.status == PlaceStatus::ok);

    const fs::path file = dir / "result.json";
    io::save_result(r, s, file.string());
    const io::LoadedResult lr = io::load_result(file.string());

    CHECK(lr.scenario.ue == s.ue);
    CHECK(lr.result.k == r.k);
    CHECK(lr.result.status == r.status);
    CHECK(lr.result.sumrate_bps == r.sumrate_bps);
    CHECK(lr.result.unserved == r.unserved);
    CHECK(lr.result.assoc.serving == r.assoc.serving);
    CHECK(lr.result.assoc.sinr == r.assoc.sinr);
    CHECK(lr.result.assoc.rate_bps == r.assoc.rate_bps);
    CHECK(lr.result.assoc.power_mw == r.assoc.power_mw);
    REQUIRE(lr.result.fleet.size() == r.fleet.size());
    for (std::size_t j = 0; j < r.fleet.size(); ++j) {
        CHECK(lr.result.fleet[j].center == r.fleet[j].center);
        CHECK(lr.result.fleet[j].altitude_m == r.fleet[j].altitude_m);
        CHECK(lr.result.fleet[j].radius_m == r.fleet[j].radius_m);
    }
    REQUIRE(lr.result.report.constraints.size() == 6);
    CHECK(lr.result.report.constraints[0].id == "C1");
    CHECK(lr.result.trace.size() == r.trace.size());

    // A second save/load cycle keeps the non-dB payload bit-exact.
    io::save_result(lr.result, lr.scenario, (dir / "again.json").string());
    const io::LoadedResult lr2 = io::load_result((dir / "again.json").string());
    CHECK(lr2.result.assoc.sinr == lr.result.assoc.sinr);
    CHECK(lr2.result.assoc.rate_bps == lr.result.assoc.rate_bps);
    CHECK(lr2.result.sumrate_bps == lr.result.sumrate_bps);
    CHECK(lr2.scenario.ue == lr.scenario.ue);
    CHECK(close_rel(lr2.scenario.radio.p_g_mw, lr.scenario.radio.p_g_mw));
}

TEST_CASE("cli: generate, place, export, and sweep end to end") {
    const fs::path dir = fresh_dir("uavplace_cli_e2e");
    const fs::path spec = dir / "crowd.json";
    std::ofstream(spec) << R"({"hotspots": [{"x_m": 600, "y_m": 600, "std_dev_m": 20, "count": 45}]})"
                        << "\n";

    const fs::path ues = dir / "ues.csv";
    REQUIRE(run_cli({"generate", spec.c_str(), "--out", ues.c_str(), "--seed", "11"}) == 0);
    CHECK(io::load_ue_csv(ues.string()).rows() == 45);

    // Same seed, same bytes; the seed option feeds the sampler.
    const fs::path ues2 = dir / "ues2.csv";
    REQUIRE(run_cli({"generate", spec.c_str(), "--out", ues2.c_str(), "--seed", "11"}) == 0);
    CHECK(slurp(ues2) == slurp(ues));

    const fs::path scn = dir / "scn.json";
    std::ofstream(scn) << R"({"ue_file": "ues.csv"})" << "\n";

    const fs::path res = dir / "res.json";
    REQUIRE(run_cli({"place", scn.c_str(), "--out", res.c_str()}) == 0);
    const io::LoadedResult lr = io::load_result(res.string());
    CHECK(lr.result.status == PlaceStatus::ok);
    CHECK(lr.result.unserved == 0);

    // Determinism across runs, byte for byte.
    const fs::path res2 = dir / "res2.json";
    REQUIRE(run_cli({"place", scn.c_str(), "--out", res2.c_str()}) == 0);
    CHECK(slurp(res2) == slurp(res));

    // --set lands in the embedded scenario of the result.
    const fs::path res3 = dir / "res3.json";
    REQUIRE(run_cli({"place", scn.c_str(), "--out", res3.c_str(), "--set",
                     "radio.c_min=1.2e6"}) == 0);
    CHECK(io::load_result(res3.string()).scenario.radio.c_min_bps == 1.2e6);

    const int k = lr.result.k;
    const fs::path prefix = dir / "plot";
    REQUIRE(run_cli({"export", res.c_str(), "--out", prefix.c_str()}) == 0);
    const auto ue_rows = lines(slurp(prefix.string() + ".ues"));
    REQUIRE(ue_rows.size() == 46);
    CHECK(ue_rows[0] == "id\tx\ty\tserving\tsinr\tbandwidth_hz\trate_bps\tpower_mw");
    CHECK(lines(slurp(prefix.string() + ".uavs")).size() == static_cast<std::size_t>(k) + 1);
    CHECK(lines(slurp(prefix.string() + ".circles")).size() ==
          static_cast<std::size_t>(k) * 64 + 1);

    // csv format and a custom vertex count: exactly that many rows per circle.
    const fs::path prefix2 = dir / "plot2";
    REQUIRE(run_cli({"export", res.c_str(), "--out", prefix2.c_str(), "--format", "csv",
                     "--circle-points", "10"}) == 0);
    const auto circ = lines(slurp(prefix2.string() + ".circles"));
    REQUIRE(circ.size() == static_cast<std::size_t>(k) * 10 + 1);
    CHECK(circ[0] == "id,vertex,x,y");
    int first_circle = 0;
    for (std::size_t i = 1; i < circ.size(); ++i)
        if (circ[i].rfind("1,", 0) == 0) ++first_circle;
    CHECK(first_circle == 10);

    CHECK(run_cli({"export", res.c_str(), "--out", prefix2.c_str(), "--circle-points", "2"}) == 2);
    CHECK(run_cli({"export", res.c_str(), "--out", prefix2.c_str(), "--format", "png"}) == 2);

    // Sweep over a directory: one good scenario, one broken one.
    const fs::path sweep_dir = fresh_dir("uavplace_cli_sweep");
    fs::copy_file(ues, sweep_dir / "ues.csv");
    std::ofstream(sweep_dir / "a_scn.json") << R"({"ue_file": "ues.csv"})" << "\n";
    std::ofstream(sweep_dir / "broken.json") << R"({"ues": []})" << "\n";
    const fs::path table = dir / "table.tsv";
    REQUIRE(run_cli({"sweep", sweep_dir.c_str(), "--out", table.c_str()}) == 0);
    const auto rows = lines(slurp(table));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == "N\tsumrate_with_uav\tsumrate_without_uav\tk");
    CHECK(rows[1].rfind("45\t", 0) == 0);
    CHECK(rows[2].rfind("# broken.json", 0) == 0);

    // Every scenario failing means a failing sweep.
    const fs::path bad_dir = fresh_dir("uavplace_cli_sweep_bad");
    std::ofstream(bad_dir / "broken.json") << R"({"ues": []})" << "\n";
    CHECK(run_cli({"sweep", bad_dir.c_str()}) == 2);
    const fs::path empty_dir = fresh_dir("uavplace_cli_sweep_empty");
    CHECK(run_cli({"sweep", empty_dir.c_str()}) == 2);
}

TEST_CASE("cli: argument and feasibility failures map to exit codes") {
    const fs::path dir = fresh_dir("uavplace_cli_codes");
    CHECK(run_cli({}) == 2);                      // missing subcommand
    CHECK(run_cli({"conquer"}) == 2);             // unknown subcommand
    CHECK(run_cli({"place"}) == 2);               // missing scenario argument
    CHECK(run_cli({"place", (dir / "absent.json").c_str()}) == 2);

    // A fleet bound the demand cannot meet: placement reports infeasibility.
    CrowdSpec spec;
    spec.hotspots.push_back({{600.0, 600.0}, 5.0, 20});
    spec.hotspots.push_back({{800.0, 800.0}, 30.0, 30});
    Scenario s = io::generate(spec, 9);
    s.radio.c_hat_g_override_bps = 5e5;
    s.radio.k_max = 1;
    const fs::path scn = dir / "tight.json";
    io::save_scenario(s, scn.string());
    CHECK(run_cli({"place", scn.c_str()}) == 3);

    const Scenario t = io::generate(spec, 9);
    io::save_scenario(t, (dir / "ok.json").string());
    CHECK(run_cli({"place", (dir / "ok.json").c_str(), "--set", "nonsense"}) == 2);
}
