#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "omrr/cli.hpp"
#include "omrr/io.hpp"

namespace {

void add_grid_flags(CLI::App* cmd, omrr::data::GridSpec& grid) {
    cmd->add_option("--origin-lat", grid.origin_lat, "grid origin latitude (degrees)");
    cmd->add_option("--origin-lon", grid.origin_lon, "grid origin longitude (degrees)");
    cmd->add_option("--cell-size", grid.cell_size, "cell size in degrees");
    cmd->add_option("--extent-lat", grid.extent_lat, "grid height in cells");
    cmd->add_option("--extent-lon", grid.extent_lon, "grid width in cells");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "online matching with reusable resources: benchmark solving, "
        "policy simulation, hardness sweeps, and taxi-trip training"};
    app.require_subcommand(1);

    omrr::cli::TrainArgs train;
    train.grid = {40.5, -74.25, 0.15, 12, 12};
    auto* cmd_train = app.add_subcommand("train", "estimate arrival rates, occupation "
                                                  "distributions, and docking cells "
                                                  "from trip records");
    cmd_train->add_option("--trips", train.trips_path, "trip records CSV")->required();
    add_grid_flags(cmd_train, train.grid);
    cmd_train->add_option("--rounds", train.options.rounds_per_day, "rounds per day");
    cmd_train->add_option("--cars", train.options.cars, "number of cars to select");
    cmd_train->add_option("--car-seed", train.options.car_seed, "car selection seed");
    cmd_train->add_option("--model-out", train.model_out, "trained model document");
    cmd_train->add_option("--instance-out", train.instance_out,
                          "also build and write an instance document");
    std::string train_arrival_mode = "kad", train_otd = "normal";
    cmd_train->add_option("--arrival-mode", train_arrival_mode, "kad | kiid");
    cmd_train->add_option("--otd", train_otd, "normal | power-law");
    cmd_train->add_option("--weight-alpha", train.instance_options.weight_alpha,
                          "docking-distance penalty in edge weights");

    omrr::cli::SolveArgs solve;
    auto* cmd_solve = app.add_subcommand("solve", "build and solve the benchmark "
                                                  "program for an instance");
    cmd_solve->add_option("--instance", solve.instance_path, "instance document")
        ->required();
    cmd_solve->add_flag("--time-sensitive", solve.time_sensitive,
                        "use per-round occupation entries");
    cmd_solve->add_option("--out", solve.solution_out, "solution document");
    cmd_solve->add_option("--export-lp", solve.export_lp, "LP-format text export");
    cmd_solve->add_option("--solver", solve.backend, "auto | simplex | first-order");
    cmd_solve->add_option("--tolerance", solve.tolerance, "relative objective tolerance");

    omrr::cli::SimulateArgs simulate;
    auto* cmd_simulate = app.add_subcommand("simulate", "run episodes of one policy "
                                                        "and write per-episode weights");
    cmd_simulate->add_option("--instance", simulate.instance_path, "instance document")
        ->required();
    cmd_simulate->add_option("--solution", simulate.solution_path,
                             "solution document (LP-guided policies)");
    cmd_simulate->add_option("--policy", simulate.policy.name,
                             "adap | alg-lp | alg-sc-lp | greedy | ur | eps-greedy | nadap")
        ->required();
    cmd_simulate->add_option("--gamma", simulate.policy.gamma, "adap target ratio");
    cmd_simulate->add_option("--eps", simulate.policy.eps, "eps-greedy mixing weight");
    cmd_simulate->add_option("--nadap-alpha", simulate.policy.nadap_alpha,
                             "uniform per-edge allocation (0 = 1/resources)");
    cmd_simulate->add_option("--episodes", simulate.episodes, "episode count");
    cmd_simulate->add_option("--seed", simulate.seed, "experiment seed");
    cmd_simulate->add_option("--attenuation", simulate.attenuation_method,
                             "exact | monte-carlo");
    cmd_simulate->add_option("--attenuation-samples", simulate.attenuation_samples,
                             "simulations per round for monte-carlo tables");
    cmd_simulate->add_option("--out", simulate.episodes_out, "per-episode CSV")
        ->required();
    cmd_simulate->add_option("--beta-out", simulate.beta_out, "attenuation CSV");

    omrr::cli::EvaluateArgs evaluate;
    auto* cmd_evaluate =
        app.add_subcommand("evaluate", "run the policies of a config against one "
                                       "instance and write an evaluation CSV");
    cmd_evaluate->add_option("--config", evaluate.config_path, "config document")
        ->required();
    cmd_evaluate->add_option("--out", evaluate.out_csv, "evaluation CSV")->required();

    omrr::cli::HardnessArgs hardness;
    auto* cmd_hardness =
        app.add_subcommand("hardness", "analytic bound vs availability recursion vs "
                                       "simulated non-adaptive play");
    cmd_hardness->add_option("--k", hardness.k_values, "resource counts to sweep");
    cmd_hardness->add_option("--n", hardness.horizon, "horizon (types = n^2)");
    cmd_hardness->add_option("--episodes", hardness.episodes, "episodes per K");
    cmd_hardness->add_option("--seed", hardness.seed, "experiment seed");
    cmd_hardness->add_option("--out", hardness.out_csv, "summary CSV")->required();
    cmd_hardness->add_option("--gamma-out", hardness.gamma_out,
                             "availability recursion CSV");

    omrr::cli::SynthArgs synth;
    std::string synth_scenario_path;
    auto* cmd_synth = app.add_subcommand("synth", "generate synthetic trip records");
    cmd_synth->add_option("--scenario", synth_scenario_path,
                          "scenario JSON (defaults used otherwise)");
    cmd_synth->add_option("--seed", synth.scenario.seed, "generator seed");
    cmd_synth->add_option("--days", synth.scenario.days, "days to generate");
    cmd_synth->add_option("--out", synth.out_csv, "trip records CSV")->required();

    CLI11_PARSE(app, argc, argv);

    if (cmd_train->parsed()) {
        if (train_arrival_mode == "kiid")
            train.instance_options.arrival_mode = omrr::data::ArrivalMode::kiid;
        if (train_otd == "power-law" || train_otd == "powerlaw")
            train.instance_options.otd_family = omrr::data::OtdFamily::power_law;
        return omrr::cli::cmd_train(train, std::cout);
    }
    if (cmd_solve->parsed()) return omrr::cli::cmd_solve(solve, std::cout);
    if (cmd_simulate->parsed()) return omrr::cli::cmd_simulate(simulate, std::cout);
    if (cmd_evaluate->parsed()) return omrr::cli::cmd_evaluate(evaluate, std::cout);
    if (cmd_hardness->parsed()) return omrr::cli::cmd_hardness(hardness, std::cout);
    if (cmd_synth->parsed()) {
        try {
            if (!synth_scenario_path.empty()) {
                const auto doc = omrr::io::load_json(synth_scenario_path);
                omrr::cli::ExperimentConfig config;
                // reuse the config parser's scenario section
                nlohmann::json wrapped = {
                    {"format", omrr::cli::kConfigFormat},
                    {"instance", {{"source", "synthetic"}, {"scenario", doc}}},
                    {"policies", nlohmann::json::array({{{"name", "ur"}}})}};
                config = omrr::cli::config_from_json(wrapped);
                const auto seed = synth.scenario.seed;
                const auto days = synth.scenario.days;
                synth.scenario = *config.synthetic;
                if (cmd_synth->count("--seed")) synth.scenario.seed = seed;
                if (cmd_synth->count("--days")) synth.scenario.days = days;
            }
        } catch (const std::exception& ex) {
            std::cout << "error: " << ex.what() << "\n";
            return 1;
        }
        return omrr::cli::cmd_synth(synth, std::cout);
    }
    return 0;
}
