#include "uavplace/scenario_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "uavplace/errors.hpp"
#include "uavplace/random.hpp"

namespace uavplace {

void Scenario::validate() const {
    radio.validate();
    env.validate();
    if (!(area.width_m > 0.0) || !(area.height_m > 0.0))
        throw ParseError("scenario: area dimensions must be positive");
    if (n_ues() < 1) throw ParseError("scenario: at least one UE required");
    if (gbs.x() < 0.0 || gbs.x() > area.width_m || gbs.y() < 0.0 || gbs.y() > area.height_m)
        throw ParseError("scenario: gbs outside the area");
    for (Eigen::Index i = 0; i < n_ues(); ++i) {
        if (ue(i, 0) < -1e-9 || ue(i, 0) > area.width_m + 1e-9 || ue(i, 1) < -1e-9 ||
            ue(i, 1) > area.height_m + 1e-9)
            throw ParseError("scenario: ue " + std::to_string(i) + " outside the area");
    }
}

int CrowdSpec::total() const {
    int t = background_count;
    for (const auto& h : hotspots) t += h.count;
    return t;
}

void CrowdSpec::validate() const {
    if (!(area.width_m > 0.0) || !(area.height_m > 0.0))
        throw ParseError("crowd spec: area dimensions must be positive");
    if (background_count < 0) throw ParseError("crowd spec: background_count must be >= 0");
    for (const auto& h : hotspots) {
        if (h.count < 0) throw ParseError("crowd spec: hotspot count must be >= 0");
        if (h.std_dev_m < 0.0) throw ParseError("crowd spec: hotspot std_dev_m must be >= 0");
    }
    if (total() < 1) throw ParseError("crowd spec: no users to generate");
}

}  // namespace uavplace

namespace uavplace::io {

namespace {

using nlohmann::json;

json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + path);
    out << text;
    if (!out) throw ParseError("short write to " + path);
}

// Pull one field out of a JSON block, tracking which keys were consumed so
// typos surface as errors instead of silently keeping defaults.
struct BlockReader {
    const json& block;
    std::string where;
    std::vector<std::string> seen;

    template <typename T>
    void get(const char* key, T& into) {
        seen.emplace_back(key);
        auto it = block.find(key);
        if (it == block.end()) return;
        try {
            into = it->get<T>();
        } catch (const json::exception&) {
            throw ParseError(where + "." + key + ": wrong type");
        }
    }

    // Absent keys leave the linear value untouched (no dB round-trip drift).
    void get_db(const char* key, double& into_linear) {
        double db = 0.0;
        const bool present = block.contains(key);
        get(key, db);
        if (present) into_linear = channel::db_to_linear(db);
    }

    void finish() const {
        for (auto it = block.begin(); it != block.end(); ++it) {
            if (std::find(seen.begin(), seen.end(), it.key()) == seen.end())
                throw ParseError(where + ": unknown key \"" + it.key() + "\"");
        }
    }
};

channel::RadioConfig radio_from_json(const json& j, channel::RadioConfig cfg = {}) {
    BlockReader r{j, "radio", {}};
    r.get_db("p_g_dbm", cfg.p_g_mw);
    r.get_db("p_uav_dbm", cfg.p_uav_mw);
    r.get_db("p_g_mmwave_dbm", cfg.p_mmwave_mw);
    r.get("g_tx", cfg.g_tx);
    r.get("g_rx", cfg.g_rx);
    r.get("alpha", cfg.alpha);
    r.get("f_c", cfg.f_c_hz);
    r.get("f_c_mmwave", cfg.f_c_mmwave_hz);
    r.get("bandwidth", cfg.bandwidth_hz);
    r.get("bandwidth_mmwave_total", cfg.bandwidth_mmwave_total_hz);
    r.get_db("n0_dbm", cfg.n0_mw_hz);
    r.get_db("sinr_threshold_db", cfg.sinr_threshold);
    r.get_db("sinr_threshold_mmwave_db", cfg.sinr_threshold_mmwave);
    r.get("c_min", cfg.c_min_bps);
    r.get("h_min", cfg.h_min_m);
    r.get("h_max", cfg.h_max_m);
    r.get("l_max_db", cfg.l_max_db);
    r.get("k_max", cfg.k_max);
    r.get("mmwave_sinr_gate", cfg.mmwave_sinr_gate);
    r.get("gbs_outage_mode", cfg.gbs_outage_mode);
    r.get("c_hat_g_override", cfg.c_hat_g_override_bps);
    r.finish();
    return cfg;
}

json radio_to_json(const channel::RadioConfig& cfg) {
    json j;
    j["p_g_dbm"] = channel::mw_to_dbm(cfg.p_g_mw);
    j["p_uav_dbm"] = channel::mw_to_dbm(cfg.p_uav_mw);
    j["p_g_mmwave_dbm"] = channel::mw_to_dbm(cfg.p_mmwave_mw);
    j["g_tx"] = cfg.g_tx;
    j["g_rx"] = cfg.g_rx;
    j["alpha"] = cfg.alpha;
    j["f_c"] = cfg.f_c_hz;
    j["f_c_mmwave"] = cfg.f_c_mmwave_hz;
    j["bandwidth"] = cfg.bandwidth_hz;
    j["bandwidth_mmwave_total"] = cfg.bandwidth_mmwave_total_hz;
    j["n0_dbm"] = channel::mw_to_dbm(cfg.n0_mw_hz);
    j["sinr_threshold_db"] = channel::linear_to_db(cfg.sinr_threshold);
    j["sinr_threshold_mmwave_db"] = channel::linear_to_db(cfg.sinr_threshold_mmwave);
    j["c_min"] = cfg.c_min_bps;
    j["h_min"] = cfg.h_min_m;
    j["h_max"] = cfg.h_max_m;
    j["l_max_db"] = cfg.l_max_db;
    j["k_max"] = cfg.k_max;
    j["mmwave_sinr_gate"] = cfg.mmwave_sinr_gate;
    j["gbs_outage_mode"] = cfg.gbs_outage_mode;
    j["c_hat_g_override"] = cfg.c_hat_g_override_bps;
    return j;
}

channel::EnvironmentParams env_from_json(const json& j, channel::EnvironmentParams env = {}) {
    BlockReader r{j, "env", {}};
    r.get("a", env.a);
    r.get("b", env.b);
    r.get("eta_los_db", env.eta_los_db);
    r.get("eta_nlos_db", env.eta_nlos_db);
    r.finish();
    return env;
}

json env_to_json(const channel::EnvironmentParams& env) {
    return {{"a", env.a},
            {"b", env.b},
            {"eta_los_db", env.eta_los_db},
            {"eta_nlos_db", env.eta_nlos_db}};
}

Point2 point_from_json(const json& j, const char* where) {
    if (!j.is_object() || !j.contains("x_m") || !j.contains("y_m"))
        throw ParseError(std::string(where) + ": expected {\"x_m\": ..., \"y_m\": ...}");
    return {j.at("x_m").get<double>(), j.at("y_m").get<double>()};
}

Area area_from_json(const json& j) {
    if (!j.is_object() || !j.contains("width_m") || !j.contains("height_m"))
        throw ParseError("area: expected {\"width_m\": ..., \"height_m\": ...}");
    return {j.at("width_m").get<double>(), j.at("height_m").get<double>()};
}

// Finite stand-in for +/-inf margins; JSON has no infinity literal.
double clamp_finite(double v) { return std::clamp(v, -1e300, 1e300); }

}  // namespace

Scenario generate(const CrowdSpec& spec, std::uint64_t seed) {
    spec.validate();
    Scenario s;
    s.area = spec.area;
    s.gbs = {spec.area.width_m / 2.0, spec.area.height_m / 2.0};
    s.seed = seed;
    Rng rng(seed);
    s.ue.resize(spec.total(), 2);
    Eigen::Index row = 0;
    for (const auto& h : spec.hotspots) {
        for (int c = 0; c < h.count; ++c) {
            double x = h.center.x();
            double y = h.center.y();
            bool in_area = false;
            for (int attempt = 0; attempt < 100 && !in_area; ++attempt) {
                x = h.center.x() + h.std_dev_m * rng.normal();
                y = h.center.y() + h.std_dev_m * rng.normal();
                in_area = x >= 0.0 && x <= spec.area.width_m && y >= 0.0 && y <= spec.area.height_m;
            }
            if (!in_area) {
                x = std::clamp(x, 0.0, spec.area.width_m);
                y = std::clamp(y, 0.0, spec.area.height_m);
            }
            s.ue.row(row++) << x, y;
        }
    }
    for (int c = 0; c < spec.background_count; ++c)
        s.ue.row(row++) << rng.uniform() * spec.area.width_m, rng.uniform() * spec.area.height_m;
    return s;
}

Scenario generate_from_spec_json(const json& spec, std::uint64_t seed) {
    CrowdSpec cs;
    if (spec.contains("area")) cs.area = area_from_json(spec.at("area"));
    if (spec.contains("background_count")) cs.background_count = spec.at("background_count").get<int>();
    if (spec.contains("hotspots")) {
        for (const auto& h : spec.at("hotspots")) {
            CrowdHotspot hs;
            hs.center = point_from_json(h, "hotspot");
            hs.std_dev_m = h.value("std_dev_m", 0.0);
            hs.count = h.value("count", 0);
            cs.hotspots.push_back(hs);
        }
    }
    Scenario s = generate(cs, seed);
    if (spec.contains("gbs"))
        s.gbs = point_from_json(spec.at("gbs"), "gbs");
    else
        s.gbs = {cs.area.width_m / 2.0, cs.area.height_m / 2.0};
    if (spec.contains("radio")) s.radio = radio_from_json(spec.at("radio"));
    if (spec.contains("env")) s.env = env_from_json(spec.at("env"));
    s.validate();
    return s;
}

Scenario generate_from_spec_file(const std::string& path, std::uint64_t seed) {
    return generate_from_spec_json(parse_file(path), seed);
}

json scenario_to_json(const Scenario& s) {
    json j;
    j["seed"] = s.seed;
    j["area"] = {{"width_m", s.area.width_m}, {"height_m", s.area.height_m}};
    j["gbs"] = {{"x_m", s.gbs.x()}, {"y_m", s.gbs.y()}};
    j["radio"] = radio_to_json(s.radio);
    j["env"] = env_to_json(s.env);
    json ues = json::array();
    for (Eigen::Index i = 0; i < s.n_ues(); ++i) ues.push_back({s.ue(i, 0), s.ue(i, 1)});
    j["ues"] = std::move(ues);
    return j;
}

Scenario scenario_from_json(const json& j, const std::string& base_dir) {
    Scenario s;
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("area")) s.area = area_from_json(j.at("area"));
    if (j.contains("gbs"))
        s.gbs = point_from_json(j.at("gbs"), "gbs");
    else
        s.gbs = {s.area.width_m / 2.0, s.area.height_m / 2.0};  // default: area center
    if (j.contains("radio")) s.radio = radio_from_json(j.at("radio"));
    if (j.contains("env")) s.env = env_from_json(j.at("env"));

    const bool inline_ues = j.contains("ues");
    const bool file_ues = j.contains("ue_file");
    if (inline_ues == file_ues)
        throw ParseError("scenario: provide exactly one of \"ues\" or \"ue_file\"");
    if (inline_ues) {
        const auto& arr = j.at("ues");
        if (!arr.is_array()) throw ParseError("scenario: \"ues\" must be an array");
        s.ue.resize(static_cast<Eigen::Index>(arr.size()), 2);
        Eigen::Index row = 0;
        for (const auto& p : arr) {
            if (!p.is_array() || p.size() != 2)
                throw ParseError("scenario: each ue must be [x, y]");
            s.ue(row, 0) = p.at(0).get<double>();
            s.ue(row, 1) = p.at(1).get<double>();
            ++row;
        }
    } else {
        std::filesystem::path f = j.at("ue_file").get<std::string>();
        if (f.is_relative() && !base_dir.empty()) f = std::filesystem::path(base_dir) / f;
        s.ue = load_ue_csv(f.string());
    }
    s.validate();
    return s;
}

void apply_overrides(Scenario& s, const std::vector<std::string>& sets) {
    json radio = json::object();
    json env = json::object();
    for (const std::string& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw ParseError("--set expects key=value, got \"" + kv + "\"");
        const std::string key = kv.substr(0, eq);
        const std::string raw = kv.substr(eq + 1);
        json value;
        try {
            value = json::parse(raw);
        } catch (const json::exception&) {
            value = raw;  // unquoted strings pass through as-is
        }
        if (key.rfind("radio.", 0) == 0)
            radio[key.substr(6)] = value;
        else if (key.rfind("env.", 0) == 0)
            env[key.substr(4)] = value;
        else
            throw ParseError("--set supports radio.* and env.* keys, got \"" + key + "\"");
    }
    // Rebuild only the touched blocks so untouched values stay bit-exact.
    if (!radio.empty()) s.radio = radio_from_json(radio, s.radio);
    if (!env.empty()) s.env = env_from_json(env, s.env);
}

Scenario load_scenario(const std::string& path) {
    return scenario_from_json(parse_file(path),
                              std::filesystem::path(path).parent_path().string());
}

void save_scenario(const Scenario& s, const std::string& path) {
    write_file(path, scenario_to_json(s).dump(2) + "\n");
}

PointList load_ue_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::vector<Point2> pts;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first && line.rfind("id,", 0) == 0) {
            first = false;
            continue;
        }
        first = false;
        std::istringstream row(line);
        std::string id, xs, ys;
        if (!std::getline(row, id, ',') || !std::getline(row, xs, ',') || !std::getline(row, ys))
            throw ParseError(path + ": bad row \"" + line + "\"");
        try {
            pts.emplace_back(std::stod(xs), std::stod(ys));
        } catch (const std::exception&) {
            throw ParseError(path + ": bad coordinates in \"" + line + "\"");
        }
    }
    if (pts.empty()) throw ParseError(path + ": no UE rows");
    PointList out(static_cast<Eigen::Index>(pts.size()), 2);
    for (std::size_t i = 0; i < pts.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = pts[i];
    return out;
}

void save_ue_csv(const PointList& ues, const std::string& path) {
    std::string text = "id,x,y\n";
    char buf[96];
    for (Eigen::Index i = 0; i < ues.rows(); ++i) {
        std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g\n", static_cast<long long>(i),
                      ues(i, 0), ues(i, 1));
        text += buf;
    }
    write_file(path, text);
}

json result_to_json(const PlacementResult& r, const Scenario& s) {
    json j;
    j["status"] = r.status == PlaceStatus::ok ? "ok" : "fleet_exhausted";
    j["k"] = r.k;
    j["sumrate_bps"] = r.sumrate_bps;
    j["unserved"] = r.unserved;
    j["scenario"] = scenario_to_json(s);

    json fleet = json::array();
    for (const auto& u : r.fleet)
        fleet.push_back({{"x_m", u.center.x()},
                         {"y_m", u.center.y()},
                         {"altitude_m", u.altitude_m},
                         {"radius_m", u.radius_m},
                         {"backhaul_alloc_hz", u.backhaul_alloc_hz}});
    j["fleet"] = std::move(fleet);

    json assoc;
    assoc["serving"] = std::vector<int>(r.assoc.serving.data(),
                                        r.assoc.serving.data() + r.assoc.serving.size());
    auto col = [](const Eigen::VectorXd& v) {
        return std::vector<double>(v.data(), v.data() + v.size());
    };
    assoc["sinr"] = col(r.assoc.sinr);
    assoc["bandwidth_hz"] = col(r.assoc.bandwidth_hz);
    assoc["rate_bps"] = col(r.assoc.rate_bps);
    assoc["power_mw"] = col(r.assoc.power_mw);
    j["association"] = std::move(assoc);

    json cons = json::array();
    for (const auto& c : r.report.constraints)
        cons.push_back({{"id", c.id},
                        {"satisfied", c.satisfied},
                        {"margin", clamp_finite(c.margin)},
                        {"detail", c.detail}});
    j["constraints"] = std::move(cons);

    json trace = json::array();
    for (const auto& t : r.trace)
        trace.push_back({{"k", t.k},
                         {"inner_iterations", t.inner_iterations},
                         {"unserved", t.unserved},
                         {"sumrate_bps", t.sumrate_bps},
                         {"constraints_ok", t.constraints_ok},
                         {"note", t.note}});
    j["trace"] = std::move(trace);
    return j;
}

void save_result(const PlacementResult& r, const Scenario& s, const std::string& path) {
    write_file(path, result_to_json(r, s).dump(2) + "\n");
}

LoadedResult load_result(const std::string& path) {
    const json j = parse_file(path);
    LoadedResult out;
    try {
        out.scenario = scenario_from_json(j.at("scenario"),
                                          std::filesystem::path(path).parent_path().string());
        out.result.status = j.at("status").get<std::string>() == "fleet_exhausted"
                                ? PlaceStatus::fleet_exhausted
                                : PlaceStatus::ok;
        out.result.k = j.at("k").get<int>();
        out.result.sumrate_bps = j.at("sumrate_bps").get<double>();
        out.result.unserved = j.at("unserved").get<int>();
        for (const auto& u : j.at("fleet")) {
            UavPlacement p;
            p.center = point_from_json(u, "fleet entry");
            p.altitude_m = u.at("altitude_m").get<double>();
            p.radius_m = u.at("radius_m").get<double>();
            p.backhaul_alloc_hz = u.at("backhaul_alloc_hz").get<double>();
            out.result.fleet.push_back(p);
        }
        const auto& a = j.at("association");
        const auto serving = a.at("serving").get<std::vector<int>>();
        const Eigen::Index n = static_cast<Eigen::Index>(serving.size());
        if (n != out.scenario.n_ues())
            throw ParseError(path + ": association size disagrees with the scenario");
        out.result.assoc.resize(n);
        auto fill = [&](const char* key, Eigen::VectorXd& v) {
            const auto vals = a.at(key).get<std::vector<double>>();
            if (static_cast<Eigen::Index>(vals.size()) != n)
                throw ParseError(std::string(path) + ": association." + key + " size mismatch");
            v = Eigen::Map<const Eigen::VectorXd>(vals.data(), n);
        };
        for (Eigen::Index i = 0; i < n; ++i) out.result.assoc.serving(i) = serving[static_cast<std::size_t>(i)];
        fill("sinr", out.result.assoc.sinr);
        fill("bandwidth_hz", out.result.assoc.bandwidth_hz);
        fill("rate_bps", out.result.assoc.rate_bps);
        fill("power_mw", out.result.assoc.power_mw);
        for (const auto& c : j.at("constraints")) {
            Constraint con;
            con.id = c.at("id").get<std::string>();
            con.satisfied = c.at("satisfied").get<bool>();
            con.margin = c.at("margin").get<double>();
            con.detail = c.value("detail", "");
            out.result.report.constraints.push_back(con);
        }
        if (j.contains("trace")) {
            for (const auto& t : j.at("trace")) {
                TraceEntry e;
                e.k = t.value("k", 0);
                e.inner_iterations = t.value("inner_iterations", 0);
                e.unserved = t.value("unserved", 0);
                e.sumrate_bps = t.value("sumrate_bps", 0.0);
                e.constraints_ok = t.value("constraints_ok", false);
                e.note = t.value("note", "");
                out.result.trace.push_back(e);
            }
        }
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return out;
}

}  // namespace uavplace::io
