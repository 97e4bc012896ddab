#include "uavplace/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "uavplace/errors.hpp"
#include "uavplace/placement.hpp"
#include "uavplace/scenario_io.hpp"

namespace uavplace::cli {

namespace {

struct CommonOpts {
    std::vector<std::string> sets;
    std::uint64_t seed = 0;
    bool seed_given = false;
};

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + path);
    out << text;
    if (!out) throw ParseError("short write to " + path);
}

int cmd_generate(const std::string& spec_path, const std::string& out, const CommonOpts& opts) {
    const Scenario s = io::generate_from_spec_file(spec_path, opts.seed);
    io::save_ue_csv(s.ue, out);
    return 0;
}

int cmd_place(const std::string& scenario_path, const std::string& out, const CommonOpts& opts) {
    Scenario s = io::load_scenario(scenario_path);
    if (opts.seed_given) s.seed = opts.seed;
    io::apply_overrides(s, opts.sets);
    s.validate();

    const auto t0 = std::chrono::steady_clock::now();
    const PlacementResult r = placement::place(s);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (!out.empty()) io::save_result(r, s, out);
    std::printf("k=%d\tsumrate_bps=%s\tunserved=%d\twall_s=%.3f\n", r.k,
                fmt(r.sumrate_bps).c_str(), r.unserved, wall);
    return r.status == PlaceStatus::ok ? 0 : 3;
}

int cmd_sweep(const std::string& dir, const std::string& out, const CommonOpts& opts) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw ParseError(dir + " is not a directory");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path());
    if (files.empty()) throw ParseError("no .json scenarios in " + dir);
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });

    std::string table = "N\tsumrate_with_uav\tsumrate_without_uav\tk\n";
    int rows_ok = 0;
    for (const auto& f : files) {
        try {
            Scenario s = io::load_scenario(f.string());
            if (opts.seed_given) s.seed = opts.seed;
            io::apply_overrides(s, opts.sets);
            s.validate();
            const PlacementResult with = placement::place(s);
            const PlacementResult without = placement::place_gbs_only(s);
            table += std::to_string(s.n_ues()) + "\t" + fmt(with.sumrate_bps) + "\t" +
                     fmt(without.sumrate_bps) + "\t" + std::to_string(with.k) + "\n";
            ++rows_ok;
        } catch (const Error& e) {
            table += "# " + f.filename().string() + ": " + e.what() + "\n";
        }
    }
    std::fputs(table.c_str(), stdout);
    if (!out.empty()) write_text(out, table);
    return rows_ok > 0 ? 0 : 2;
}

int cmd_export(const std::string& result_path, const std::string& prefix,
               const std::string& format, int circle_points) {
    const io::LoadedResult lr = io::load_result(result_path);
    const char sep = format == "csv" ? ',' : '\t';
    const std::string s(1, sep);

    std::string ues = "id" + s + "x" + s + "y" + s + "serving" + s + "sinr" + s +
                      "bandwidth_hz" + s + "rate_bps" + s + "power_mw\n";
    for (Eigen::Index i = 0; i < lr.scenario.n_ues(); ++i) {
        const auto& a = lr.result.assoc;
        ues += std::to_string(i) + s + fmt(lr.scenario.ue(i, 0)) + s + fmt(lr.scenario.ue(i, 1)) +
               s + std::to_string(a.serving(i)) + s + fmt(a.sinr(i)) + s +
               fmt(a.bandwidth_hz(i)) + s + fmt(a.rate_bps(i)) + s + fmt(a.power_mw(i)) + "\n";
    }
    write_text(prefix + ".ues", ues);

    std::string uavs =
        "id" + s + "x" + s + "y" + s + "altitude_m" + s + "radius_m" + s + "backhaul_alloc_hz\n";
    for (std::size_t j = 0; j < lr.result.fleet.size(); ++j) {
        const auto& u = lr.result.fleet[j];
        uavs += std::to_string(j + 1) + s + fmt(u.center.x()) + s + fmt(u.center.y()) + s +
                fmt(u.altitude_m) + s + fmt(u.radius_m) + s + fmt(u.backhaul_alloc_hz) + "\n";
    }
    write_text(prefix + ".uavs", uavs);

    // Exactly circle_points vertices per disc; plotters close the loop themselves.
    std::string circles = "id" + s + "vertex" + s + "x" + s + "y\n";
    for (std::size_t j = 0; j < lr.result.fleet.size(); ++j) {
        const auto& u = lr.result.fleet[j];
        for (int t = 0; t < circle_points; ++t) {
            const double ang = 2.0 * std::numbers::pi * t / circle_points;
            circles += std::to_string(j + 1) + s + std::to_string(t) + s +
                       fmt(u.center.x() + u.radius_m * std::cos(ang)) + s +
                       fmt(u.center.y() + u.radius_m * std::sin(ang)) + "\n";
        }
    }
    write_text(prefix + ".circles", circles);
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"UAV base-station placement and downlink network simulation"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string in_path, out_path, format = "tsv";
    int circle_points = 64;

    auto add_seed = [&](CLI::App* cmd) {
        cmd->add_option("--seed", opts.seed, "Seed overriding the scenario's own")
            ->each([&](const std::string&) { opts.seed_given = true; });
    };
    auto add_set = [&](CLI::App* cmd) {
        cmd->add_option("--set", opts.sets,
                        "Override a scenario field, e.g. radio.c_min=2e6 or env.a=9.61");
    };

    auto* gen = app.add_subcommand("generate", "Sample a UE dataset from a crowd spec");
    gen->add_option("spec", in_path, "Crowd spec JSON")->required();
    gen->add_option("--out", out_path, "UE dataset CSV to write")->required();
    add_seed(gen);

    auto* place = app.add_subcommand("place", "Optimize a UAV fleet for a scenario");
    place->add_option("scenario", in_path, "Scenario JSON")->required();
    place->add_option("--out", out_path, "Result JSON to write");
    add_seed(place);
    add_set(place);

    auto* sweep = app.add_subcommand("sweep", "Place every scenario in a directory");
    sweep->add_option("dir", in_path, "Directory of scenario JSON files")->required();
    sweep->add_option("--out", out_path, "Write the table here as well as stdout");
    add_seed(sweep);
    add_set(sweep);

    auto* exp = app.add_subcommand("export", "Dump a result as plotting-friendly tables");
    exp->add_option("result", in_path, "Result JSON from place --out")->required();
    exp->add_option("--out", out_path, "Output path prefix")->required();
    exp->add_option("--format", format, "tsv or csv")
        ->check(CLI::IsMember({"tsv", "csv"}));
    exp->add_option("--circle-points", circle_points, "Vertices per coverage circle")
        ->check(CLI::Range(3, 100000));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (gen->parsed()) return cmd_generate(in_path, out_path, opts);
        if (place->parsed()) return cmd_place(in_path, out_path, opts);
        if (sweep->parsed()) return cmd_sweep(in_path, out_path, opts);
        return cmd_export(in_path, out_path, format, circle_points);
    } catch (const FleetExhaustedError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const InfeasibleRadiusError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const InfeasibleError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

}  // namespace uavplace::cli
