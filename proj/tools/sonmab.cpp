// Command-line front end: run simulations, aggregate regret curves across
// seeds, fit tail growth, and print oracle solutions / theoretical bounds.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sonmab/io.hpp"
#include "sonmab/oracle.hpp"
#include "sonmab/sim.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct SeedRange {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
};

SeedRange parse_seed_range(const std::string& s) {
    const auto pos = s.find("..");
    if (pos == std::string::npos) throw CLI::ValidationError("--seeds expects A..B");
    SeedRange r{std::stoull(s.substr(0, pos)), std::stoull(s.substr(pos + 2))};
    if (r.hi < r.lo) throw CLI::ValidationError("--seeds range is empty");
    return r;
}

sonmab::RunConfig load_config(const std::string& path, const std::string& method,
                              const std::string& explore_mode) {
    sonmab::RunConfig cfg = sonmab::load_run_config(path);
    if (!method.empty()) cfg.method = method;
    if (!explore_mode.empty())
        cfg.explore_mode = explore_mode == "decreasing" ? sonmab::ExploreMode::Decreasing
                                                        : sonmab::ExploreMode::Constant;
    return cfg;
}

json channel_oracle_json(const sonmab::ChannelOracleSolution& s) {
    return json{{"j1", s.j1},
                {"j2", s.j2},
                {"delta_m", s.delta},
                {"degenerate", s.degenerate},
                {"best_channels", s.best_channels},
                {"optimal_occupancy", s.optimal_occupancy}};
}

int cmd_run(const std::string& config_path, const std::string& method,
            const std::string& explore_mode, std::optional<std::uint64_t> seed,
            const std::string& seeds, const std::string& out_dir) {
    const sonmab::RunConfig cfg = load_config(config_path, method, explore_mode);
    SeedRange range{0, 0};
    if (!seeds.empty())
        range = parse_seed_range(seeds);
    else if (seed)
        range = {*seed, *seed};
    else
        throw CLI::ValidationError("run requires --seed or --seeds");

    for (std::uint64_t s = range.lo; s <= range.hi; ++s) {
        const sonmab::RunResult res = sonmab::run(cfg, s);
        sonmab::write_run_outputs(res, cfg, fs::path(out_dir) / ("seed_" + std::to_string(s)));
        if (res.infeasible) {
            std::cerr << json{{"error", "infeasible run"},
                              {"seed", s},
                              {"reason", res.infeasible_reason}}
                             .dump()
                      << "\n";
            return 2;
        }
    }
    std::cout << json{{"status", "ok"},
                      {"seeds", json::array({range.lo, range.hi})},
                      {"out", out_dir}}
                     .dump()
              << "\n";
    return 0;
}

int cmd_aggregate(const std::string& out_dir) {
    std::vector<fs::path> seed_dirs;
    for (const auto& e : fs::directory_iterator(out_dir))
        if (e.is_directory() && e.path().filename().string().rfind("seed_", 0) == 0)
            seed_dirs.push_back(e.path());
    std::sort(seed_dirs.begin(), seed_dirs.end());
    if (seed_dirs.empty()) throw std::runtime_error("no seed_* directories under " + out_dir);

    std::vector<std::vector<sonmab::CurvePoint>> channel, power;
    for (const auto& d : seed_dirs) {
        const auto file = sonmab::read_regret_csv(d / "regret.csv");
        if (!file.channel.empty()) channel.push_back(file.channel);
        if (!file.power.empty()) power.push_back(file.power);
    }
    std::string csv = "stage,t,mean,stddev\n";
    const auto emit = [&](const char* stage,
                          const std::vector<std::vector<sonmab::CurvePoint>>& runs) {
        if (runs.empty()) return;
        const sonmab::AggregateCurve a = sonmab::aggregate(runs);
        for (std::size_t i = 0; i < a.t.size(); ++i)
            csv += std::string(stage) + "," + sonmab::fmt(a.t[i]) + "," + sonmab::fmt(a.mean[i]) +
                   "," + sonmab::fmt(a.stddev[i]) + "\n";
    };
    emit("channel", channel);
    emit("power", power);
    sonmab::write_text(fs::path(out_dir) / "aggregate_regret.csv", csv);
    std::cout << json{{"status", "ok"},
                      {"runs", seed_dirs.size()},
                      {"out", (fs::path(out_dir) / "aggregate_regret.csv").string()}}
                     .dump()
              << "\n";
    return 0;
}

int cmd_fit(const std::string& csv_path, const std::string& stage, double tail_start) {
    std::vector<sonmab::CurvePoint> curve;
    if (fs::path(csv_path).filename() == "aggregate_regret.csv") {
        std::ifstream in(csv_path);
        if (!in) throw std::runtime_error("cannot open " + csv_path);
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) {
            if (line.rfind(stage + ",", 0) != 0) continue;
            const auto c1 = line.find(','), c2 = line.find(',', c1 + 1),
                       c3 = line.find(',', c2 + 1);
            curve.push_back({std::stod(line.substr(c1 + 1, c2 - c1 - 1)),
                             std::stod(line.substr(c2 + 1, c3 - c2 - 1))});
        }
    } else {
        const auto file = sonmab::read_regret_csv(csv_path);
        curve = stage == "power" ? file.power : file.channel;
    }
    const sonmab::LogSquareFit f = sonmab::fit_log_square(curve, tail_start);
    std::cout << json{{"stage", stage},
                      {"coefficient", f.coefficient},
                      {"r_squared", f.r_squared},
                      {"model", "coefficient * log(t)^2"}}
                     .dump(2)
              << "\n";
    return 0;
}

int cmd_oracle(const std::string& config_path, std::uint64_t seed) {
    const sonmab::RunConfig cfg = sonmab::load_run_config(config_path);
    const sonmab::NetworkScenario sc =
        sonmab::generate_scenario(cfg.scenario, cfg.scenario_seed.value_or(seed));
    const auto table = sonmab::build_channel_rewards(sc);
    std::vector<int> plays;
    for (int k = 0; k < sc.K(); ++k) plays.push_back(sc.n_k(k));
    const auto ch = sonmab::solve_channel(table, sc.K(), sc.M(), plays);

    // Power oracles on the optimal channel assignment, with true gains.
    const auto pw_table = sonmab::build_power_rewards(sc, sc.gains);
    std::vector<std::vector<int>> players(static_cast<std::size_t>(sc.M()));
    for (int k = 0; k < sc.K(); ++k)
        for (const int m : ch.best_channels[static_cast<std::size_t>(k)])
            players[static_cast<std::size_t>(m)].push_back(k);
    json pw = json::array();
    for (int m = 0; m < sc.M(); ++m) {
        if (players[static_cast<std::size_t>(m)].empty()) continue;
        const auto sol = sonmab::solve_power(pw_table, m, players[static_cast<std::size_t>(m)],
                                             sc.L());
        pw.push_back({{"channel", m},
                      {"players", players[static_cast<std::size_t>(m)]},
                      {"levels", sol.best_levels},
                      {"j1", sol.j1},
                      {"j2", sol.j2},
                      {"delta_p", sol.delta},
                      {"degenerate", sol.degenerate}});
    }
    std::cout << json{{"channel", channel_oracle_json(ch)}, {"power", pw}}.dump(2) << "\n";
    return 0;
}

int cmd_bounds(const std::string& config_path, std::uint64_t seed) {
    const sonmab::RunConfig cfg = sonmab::load_run_config(config_path);
    const sonmab::NetworkScenario sc =
        sonmab::generate_scenario(cfg.scenario, cfg.scenario_seed.value_or(seed));
    const auto table = sonmab::build_channel_rewards(sc);
    std::vector<int> plays;
    int total_plays = 0;
    for (int k = 0; k < sc.K(); ++k) {
        plays.push_back(sc.n_k(k));
        total_plays += sc.n_k(k);
    }
    const auto ch = sonmab::solve_channel(table, sc.K(), sc.M(), plays);
    if (ch.degenerate || !(ch.delta > 0.0))
        throw std::runtime_error("degenerate channel gap; bounds undefined");

    const auto pw_table = sonmab::build_power_rewards(sc, sc.gains);
    std::vector<std::vector<int>> players(static_cast<std::size_t>(sc.M()));
    for (int k = 0; k < sc.K(); ++k)
        for (const int m : ch.best_channels[static_cast<std::size_t>(k)])
            players[static_cast<std::size_t>(m)].push_back(k);
    double delta_p = 0.0;
    for (int m = 0; m < sc.M(); ++m) {
        if (players[static_cast<std::size_t>(m)].empty()) continue;
        const auto sol = sonmab::solve_power(pw_table, m, players[static_cast<std::size_t>(m)],
                                             sc.L());
        if (sol.degenerate || !(sol.delta > 0.0))
            throw std::runtime_error("degenerate power gap; bounds undefined");
        delta_p = delta_p == 0.0 ? sol.delta : std::min(delta_p, sol.delta);
    }

    const auto b = sonmab::phase_length_bounds(sc.K(), sc.M(), sc.beta(), sc.L(), ch.delta,
                                               delta_p > 0.0 ? delta_p : 1.0, cfg.eta);
    // The bounds scale with the total number of plays sum_k N_k; fold it into
    // the K*N product.
    sonmab::RegretBoundParams rp;
    rp.K = 1;
    rp.N = total_plays;
    rp.t_c0 = b.t_c0;
    rp.t_p0 = b.t_p0;
    rp.c1 = cfg.c1;
    rp.c2 = static_cast<double>(cfg.c2);
    rp.delta = cfg.delta;
    const auto rb = sonmab::regret_bound_curves(rp, static_cast<double>(cfg.t_c),
                                                static_cast<double>(cfg.t_p));
    std::cout << json{{"delta_m", ch.delta},
                      {"delta_p", delta_p},
                      {"t_mu_hat", b.t_mu_hat},
                      {"t_k_hat", b.t_k_hat},
                      {"t_c0", b.t_c0},
                      {"t_p0", b.t_p0},
                      {"regret_bounds",
                       {{"r_c1", rb.r_c1},
                        {"r_c2", rb.r_c2},
                        {"r_c3", rb.r_c3},
                        {"r_p1", rb.r_p1},
                        {"r_p2", rb.r_p2},
                        {"r_p3", rb.r_p3}}}}
                     .dump(2)
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decentralized NOMA channel/power allocation simulator"};
    app.require_subcommand(1);

    std::string config_path, method, explore_mode, seeds, out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::uint64_t oracle_seed = 0;
    std::string fit_csv, fit_stage = "channel";
    double tail_start = 0.0;

    auto* run = app.add_subcommand("run", "simulate one or more seeds");
    run->add_option("--config", config_path, "run configuration JSON")->required();
    run->add_option("--seed", seed, "single seed");
    run->add_option("--seeds", seeds, "inclusive seed range A..B");
    run->add_option("--method", method, "proposed|ucb (overrides config)")
        ->check(CLI::IsMember({"proposed", "ucb"}));
    run->add_option("--explore-mode", explore_mode, "constant|decreasing (overrides config)")
        ->check(CLI::IsMember({"constant", "decreasing"}));
    run->add_option("--out", out_dir, "output directory");

    auto* agg = app.add_subcommand("aggregate", "aggregate regret curves across seed_* dirs");
    agg->add_option("--out", out_dir, "directory containing seed_* run outputs")->required();

    auto* fit = app.add_subcommand("fit", "fit c*log(t)^2 to a regret-curve tail");
    fit->add_option("csv", fit_csv, "regret.csv or aggregate_regret.csv")->required();
    fit->add_option("--stage", fit_stage, "channel|power")
        ->check(CLI::IsMember({"channel", "power"}));
    fit->add_option("--tail-start", tail_start, "fit only points with t > this");

    auto* oracle = app.add_subcommand("oracle", "print brute-force optimal allocations");
    oracle->add_option("--config", config_path, "run configuration JSON")->required();
    oracle->add_option("--seed", oracle_seed, "scenario seed");

    auto* bounds = app.add_subcommand("bounds", "print theoretical phase lengths and bounds");
    bounds->add_option("--config", config_path, "run configuration JSON")->required();
    bounds->add_option("--seed", oracle_seed, "scenario seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, method, explore_mode, seed, seeds, out_dir);
        if (agg->parsed()) return cmd_aggregate(out_dir);
        if (fit->parsed()) return cmd_fit(fit_csv, fit_stage, tail_start);
        if (oracle->parsed()) return cmd_oracle(config_path, oracle_seed);
        if (bounds->parsed()) return cmd_bounds(config_path, oracle_seed);
    } catch (const std::exception& e) {
        std::cerr << json{{"error", e.what()}}.dump() << "\n";
        return 1;
    }
    return 0;
}
