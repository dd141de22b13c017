#include "omrr/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include "omrr/attenuation.hpp"
#include "omrr/io.hpp"
#include "omrr/lp.hpp"
#include "omrr/sim.hpp"

namespace omrr::cli {

using nlohmann::json;

namespace {

std::string fmt_g(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

json grid_to_json(const data::GridSpec& g) {
    return {{"origin_lat", g.origin_lat},
            {"origin_lon", g.origin_lon},
            {"cell_size", g.cell_size},
            {"extent_lat", g.extent_lat},
            {"extent_lon", g.extent_lon}};
}

data::GridSpec grid_from_json(const json& j) {
    data::GridSpec g;
    g.origin_lat = j.value("origin_lat", g.origin_lat);
    g.origin_lon = j.value("origin_lon", g.origin_lon);
    g.cell_size = j.value("cell_size", g.cell_size);
    g.extent_lat = j.value("extent_lat", g.extent_lat);
    g.extent_lon = j.value("extent_lon", g.extent_lon);
    return g;
}

json scenario_to_json(const data::SyntheticScenario& sc) {
    json peaks = json::array();
    for (const auto& p : sc.peaks)
        peaks.push_back({{"center", p.center},
                         {"width", p.width},
                         {"added_rate", p.added_rate}});
    return {{"grid", grid_to_json(sc.grid)},
            {"cars", sc.cars},
            {"days", sc.days},
            {"rounds_per_day", sc.rounds_per_day},
            {"type_pairs", sc.type_pairs},
            {"popularity_skew", sc.popularity_skew},
            {"base_rate", sc.base_rate},
            {"peaks", peaks},
            {"otd_family", sc.otd_family == data::OtdFamily::normal ? "normal"
                                                                    : "power-law"},
            {"otd_mean", sc.otd_mean},
            {"otd_sigma", sc.otd_sigma},
            {"otd_exponent", sc.otd_exponent},
            {"seed", sc.seed}};
}

data::OtdFamily family_from_string(const std::string& name) {
    if (name == "normal") return data::OtdFamily::normal;
    if (name == "power-law" || name == "powerlaw" || name == "power_law")
        return data::OtdFamily::power_law;
    throw std::invalid_argument("unknown occupation family '" + name + "'");
}

data::SyntheticScenario scenario_from_json(const json& j) {
    data::SyntheticScenario sc;
    if (j.contains("grid")) sc.grid = grid_from_json(j.at("grid"));
    sc.cars = j.value("cars", sc.cars);
    sc.days = j.value("days", sc.days);
    sc.rounds_per_day = j.value("rounds_per_day", sc.rounds_per_day);
    sc.type_pairs = j.value("type_pairs", sc.type_pairs);
    sc.popularity_skew = j.value("popularity_skew", sc.popularity_skew);
    sc.base_rate = j.value("base_rate", sc.base_rate);
    if (j.contains("peaks")) {
        sc.peaks.clear();
        for (const auto& p : j.at("peaks"))
            sc.peaks.push_back({p.value("center", 100.0), p.value("width", 25.0),
                                p.value("added_rate", 0.5)});
    }
    if (j.contains("otd_family"))
        sc.otd_family = family_from_string(j.at("otd_family").get<std::string>());
    sc.otd_mean = j.value("otd_mean", sc.otd_mean);
    sc.otd_sigma = j.value("otd_sigma", sc.otd_sigma);
    sc.otd_exponent = j.value("otd_exponent", sc.otd_exponent);
    sc.seed = j.value("seed", sc.seed);
    return sc;
}

json instance_options_to_json(const data::InstanceOptions& o) {
    return {{"arrival_mode", o.arrival_mode == data::ArrivalMode::kad ? "kad" : "kiid"},
            {"otd_family",
             o.otd_family == data::OtdFamily::normal ? "normal" : "power-law"},
            {"match_power_law_mean", o.match_power_law_mean},
            {"weight_alpha", o.weight_alpha},
            {"metric", o.metric == data::DistanceMetric::euclidean ? "euclidean"
                                                                   : "manhattan"}};
}

data::InstanceOptions instance_options_from_json(const json& j) {
    data::InstanceOptions o;
    const std::string mode = j.value("arrival_mode", "kad");
    if (mode == "kad")
        o.arrival_mode = data::ArrivalMode::kad;
    else if (mode == "kiid")
        o.arrival_mode = data::ArrivalMode::kiid;
    else
        throw std::invalid_argument("unknown arrival mode '" + mode + "'");
    if (j.contains("otd_family"))
        o.otd_family = family_from_string(j.at("otd_family").get<std::string>());
    o.match_power_law_mean = j.value("match_power_law_mean", o.match_power_law_mean);
    o.weight_alpha = j.value("weight_alpha", o.weight_alpha);
    const std::string metric = j.value("metric", "euclidean");
    if (metric == "euclidean")
        o.metric = data::DistanceMetric::euclidean;
    else if (metric == "manhattan")
        o.metric = data::DistanceMetric::manhattan;
    else
        throw std::invalid_argument("unknown distance metric '" + metric + "'");
    return o;
}

json policy_to_json(const PolicySpec& p) {
    json j{{"name", p.name}};
    if (p.name == "adap") j["gamma"] = p.gamma;
    if (p.name == "eps-greedy") {
        j["eps"] = p.eps;
        j["eps_lp_branch_safe"] = p.eps_lp_branch_safe;
    }
    if (p.name == "nadap") j["nadap_alpha"] = p.nadap_alpha;
    return j;
}

PolicySpec policy_from_json(const json& j) {
    PolicySpec p;
    p.name = j.at("name").get<std::string>();
    p.gamma = j.value("gamma", p.gamma);
    p.eps = j.value("eps", p.eps);
    p.eps_lp_branch_safe = j.value("eps_lp_branch_safe", p.eps_lp_branch_safe);
    p.nadap_alpha = j.value("nadap_alpha", p.nadap_alpha);
    return p;
}

// Builds the instance named by the config; logs data-pipeline notes.
model::Instance resolve_instance(const ExperimentConfig& config, std::ostream& log) {
    int sources = 0;
    sources += !config.instance_path.empty();
    sources += config.synthetic.has_value();
    sources += config.hardness_params.has_value();
    if (sources != 1)
        throw std::invalid_argument(
            "config must name exactly one instance source (file, synthetic, hardness)");

    if (!config.instance_path.empty()) {
        auto spec = io::instance_from_json(io::load_json(config.instance_path));
        const auto report = model::validate_instance(spec);
        if (!report.ok())
            throw std::invalid_argument("instance failed validation:\n" +
                                        report.to_string());
        return model::Instance::build(std::move(spec));
    }
    if (config.synthetic) {
        auto parsed =
            data::assign_types(data::synth_trips(*config.synthetic), config.synthetic->grid);
        auto train_options = config.train;
        train_options.rounds_per_day = config.synthetic->rounds_per_day;
        const auto trained = data::train(parsed, config.synthetic->grid, train_options);
        log << "synthetic: " << parsed.records.size() << " trips, "
            << trained.types.size() << " types, " << trained.arrivals.days
            << " days, " << trained.cars.size() << " cars\n";
        return data::build_experiment_instance(trained, config.instance_options);
    }
    return hardness::hardness_instance(*config.hardness_params);
}

struct PreparedLp {
    std::unique_ptr<lp::LpSolution> solution;
    std::optional<double> lp_opt;
};

PreparedLp prepare_lp(const ExperimentConfig& config, const model::Instance& inst,
                      std::ostream& log) {
    PreparedLp out;
    bool needs_solution = false;
    for (const auto& spec : config.policies)
        needs_solution |= spec.name == "adap" || spec.name == "alg-lp" ||
                          spec.name == "alg-sc-lp" || spec.name == "eps-greedy";
    if (config.hardness_params && !needs_solution) {
        // The benchmark optimum has a closed aggregate form on this family.
        out.lp_opt = hardness::hardness_lp_objective(*config.hardness_params);
        return out;
    }
    const auto program = lp::build_benchmark_lp(inst, config.time_sensitive);
    auto sol = lp::solve_lp(
        program, make_solver_config(config.solver_backend, config.solver_tolerance));
    if (sol.status != solver::SolveStatus::optimal)
        throw std::runtime_error("benchmark solve did not reach optimality: " +
                                 sol.solver_info);
    log << "benchmark objective " << fmt_g(sol.objective) << " (" << sol.solver_info
        << ")\n";
    out.lp_opt = sol.objective;
    out.solution = std::make_unique<lp::LpSolution>(std::move(sol));
    return out;
}

std::string stderr_or_na(const std::optional<double>& v) {
    return v ? fmt_g(*v) : "na";
}

}  // namespace

ExperimentConfig config_from_json(const json& doc) {
    if (!doc.is_object() || doc.value("format", "") != kConfigFormat)
        throw std::invalid_argument(std::string("config document is not a ") +
                                    kConfigFormat);
    ExperimentConfig config;
    const auto& inst = doc.at("instance");
    const std::string source = inst.at("source").get<std::string>();
    if (source == "file") {
        config.instance_path = inst.at("path").get<std::string>();
    } else if (source == "synthetic") {
        config.synthetic = scenario_from_json(inst.value("scenario", json::object()));
        if (inst.contains("train")) {
            config.train.cars = inst.at("train").value("cars", config.train.cars);
            config.train.car_seed =
                inst.at("train").value("car_seed", config.train.car_seed);
        }
        if (inst.contains("instance_options"))
            config.instance_options =
                instance_options_from_json(inst.at("instance_options"));
    } else if (source == "hardness") {
        config.hardness_params = hardness::HardnessParams{
            inst.at("resources").get<std::uint32_t>(),
            inst.at("horizon").get<std::uint32_t>()};
    } else {
        throw std::invalid_argument("unknown instance source '" + source + "'");
    }
    for (const auto& p : doc.value("policies", json::array()))
        config.policies.push_back(policy_from_json(p));
    config.episodes = doc.value("episodes", config.episodes);
    config.seed = doc.value("seed", config.seed);
    if (doc.contains("attenuation")) {
        config.attenuation_method =
            doc.at("attenuation").value("method", config.attenuation_method);
        config.attenuation_samples =
            doc.at("attenuation").value("samples", config.attenuation_samples);
    }
    config.time_sensitive = doc.value("time_sensitive", config.time_sensitive);
    if (doc.contains("solver")) {
        config.solver_backend = doc.at("solver").value("backend", config.solver_backend);
        config.solver_tolerance =
            doc.at("solver").value("tolerance", config.solver_tolerance);
    }
    config.instance_id = doc.value("instance_id", config.instance_id);
    return config;
}

json config_to_json(const ExperimentConfig& config) {
    json inst;
    if (!config.instance_path.empty()) {
        inst = {{"source", "file"}, {"path", config.instance_path}};
    } else if (config.synthetic) {
        inst = {{"source", "synthetic"},
                {"scenario", scenario_to_json(*config.synthetic)},
                {"train",
                 {{"cars", config.train.cars}, {"car_seed", config.train.car_seed}}},
                {"instance_options", instance_options_to_json(config.instance_options)}};
    } else if (config.hardness_params) {
        inst = {{"source", "hardness"},
                {"resources", config.hardness_params->resources},
                {"horizon", config.hardness_params->horizon}};
    }
    json policies = json::array();
    for (const auto& p : config.policies) policies.push_back(policy_to_json(p));
    return {{"format", kConfigFormat},
            {"instance", inst},
            {"policies", policies},
            {"episodes", config.episodes},
            {"seed", config.seed},
            {"attenuation",
             {{"method", config.attenuation_method},
              {"samples", config.attenuation_samples}}},
            {"time_sensitive", config.time_sensitive},
            {"solver",
             {{"backend", config.solver_backend},
              {"tolerance", config.solver_tolerance}}},
            {"instance_id", config.instance_id}};
}

policies::Policy make_policy(const PolicySpec& spec, const model::Instance& inst) {
    if (spec.name == "adap") return policies::make_adap(spec.gamma);
    if (spec.name == "alg-lp") return policies::make_alg_lp();
    if (spec.name == "alg-sc-lp") return policies::make_alg_sc_lp();
    if (spec.name == "greedy") return policies::make_greedy();
    if (spec.name == "ur") return policies::make_ur();
    if (spec.name == "eps-greedy")
        return policies::make_eps_greedy(spec.eps, spec.eps_lp_branch_safe);
    if (spec.name == "nadap") {
        const double alpha = spec.nadap_alpha > 0.0
                                 ? spec.nadap_alpha
                                 : 1.0 / static_cast<double>(inst.num_resources());
        return policies::make_nadap(inst,
                                    std::vector<double>(inst.num_edges(), alpha));
    }
    throw std::invalid_argument("unknown policy '" + spec.name + "'");
}

solver::SolverConfig make_solver_config(const std::string& backend, double tolerance) {
    solver::SolverConfig cfg;
    cfg.tolerance = tolerance;
    if (backend == "auto")
        cfg.backend = solver::SolverConfig::Backend::automatic;
    else if (backend == "simplex")
        cfg.backend = solver::SolverConfig::Backend::simplex;
    else if (backend == "first-order")
        cfg.backend = solver::SolverConfig::Backend::first_order;
    else
        throw std::invalid_argument("unknown solver backend '" + backend + "'");
    return cfg;
}

int cmd_train(const TrainArgs& args, std::ostream& log) {
    try {
        std::ifstream in(args.trips_path);
        if (!in) throw std::runtime_error("cannot open " + args.trips_path);
        const auto parsed = data::parse_trips(in, args.grid);
        if (parsed.records.size() == 0)
            throw std::runtime_error("no usable trip records in " + args.trips_path);
        const auto model = data::train(parsed, args.grid, args.options);
        log << "trips " << parsed.records.size() << " (malformed " << parsed.malformed
            << ", outside grid " << parsed.out_of_box << ")\n"
            << "types " << model.types.size() << ", days " << model.arrivals.days
            << ", cars " << model.cars.size() << "\n"
            << "rescaled rounds " << model.arrivals.rescaled_rounds
            << ", truncated trips " << model.arrivals.truncated_trips << "\n"
            << "occupation normal mean " << fmt_g(model.normal_fit.mean) << " sigma "
            << fmt_g(model.normal_fit.sigma) << "; power-law exponent "
            << fmt_g(model.power_law_fit.exponent) << "\n";
        if (!args.model_out.empty()) {
            io::save_json(args.model_out, io::model_to_json(model));
            log << "model written to " << args.model_out << "\n";
        }
        if (!args.instance_out.empty()) {
            const auto inst =
                data::build_experiment_instance(model, args.instance_options);
            io::save_json(args.instance_out, io::instance_to_json(inst.spec()));
            log << "instance written to " << args.instance_out << " ("
                << inst.num_edges() << " edges)\n";
        }
        return 0;
    } catch (const std::exception& ex) {
        log << "error: " << ex.what() << "\n";
        return 1;
    }
}

int cmd_solve(const SolveArgs& args, std::ostream& log) {
    try {
        auto spec = io::instance_from_json(io::load_json(args.instance_path));
        const auto report = model::validate_instance(spec);
        if (!report.ok()) {
            log << "instance failed validation:\n" << report.to_string();
            return 1;
        }
        const auto inst = model::Instance::build(std::move(spec));
        const auto program = lp::build_benchmark_lp(inst, args.time_sensitive);
        const auto sol =
            lp::solve_lp(program, make_solver_config(args.backend, args.tolerance));
        log << "status " << solver::to_string(sol.status) << "\n";
        log << "objective " << fmt_g(sol.objective) << "\n";
        if (sol.certified_gap > 0) log << "certified gap " << fmt_g(sol.certified_gap) << "\n";
        const auto residuals = lp::check_solution(inst, sol);
        log << "residuals: " << residuals.to_string() << "\n";
        if (!args.solution_out.empty()) {
            io::save_json(args.solution_out, io::solution_to_json(sol));
            log << "solution written to " << args.solution_out << "\n";
        }
        if (!args.export_lp.empty()) {
            std::ofstream out(args.export_lp);
            if (!out) throw std::runtime_error("cannot write " + args.export_lp);
            program.write_lp_text(out);
            log << "program written to " << args.export_lp << "\n";
        }
        return sol.status == solver::SolveStatus::optimal ? 0 : 1;
    } catch (const std::exception& ex) {
        log << "error: " << ex.what() << "\n";
        return 1;
    }
}

int cmd_simulate(const SimulateArgs& args, std::ostream& log) {
    try {
        auto spec = io::instance_from_json(io::load_json(args.instance_path));
        const auto report = model::validate_instance(spec);
        if (!report.ok()) {
            log << "instance failed validation:\n" << report.to_string();
            return 1;
        }
        const auto inst = model::Instance::build(std::move(spec));
        const auto policy = make_policy(args.policy, inst);

        std::unique_ptr<lp::LpSolution> sol;
        if (!args.solution_path.empty())
            sol = std::make_unique<lp::LpSolution>(
                io::solution_from_json(io::load_json(args.solution_path)));
        std::unique_ptr<attenuation::AttenuationTable> beta;
        if (policy.needs_beta) {
            if (!sol) throw std::invalid_argument("policy needs --solution");
            beta = std::make_unique<attenuation::AttenuationTable>(
                args.attenuation_method == "monte-carlo"
                    ? attenuation::beta_monte_carlo(inst, *sol, args.policy.gamma,
                                                    args.attenuation_samples,
                                                    rng::derive(args.seed, 0xBE7A))
                    : attenuation::beta_exact(inst, *sol, args.policy.gamma));
            if (!beta->valid()) {
                log << "attenuation validity breaches at " << beta->breaches.size()
                    << " entries; first at resource "
                    << inst.resource_name(beta->breaches.front().resource) << " round "
                    << beta->breaches.front().round << "\n";
                return 1;
            }
            if (!args.beta_out.empty()) {
                std::ofstream out(args.beta_out);
                if (!out) throw std::runtime_error("cannot write " + args.beta_out);
                attenuation::write_csv(out, *beta, inst);
            }
        }

        std::ofstream out(args.episodes_out);
        if (!out) throw std::runtime_error("cannot write " + args.episodes_out);
        out << "# format = omrr-episodes/1\n";
        out << "# policy = " << policy_to_json(args.policy).dump() << "\n";
        out << "# episodes = " << args.episodes << ", seed = " << args.seed << "\n";
        out << "policy,instance,episode,weight\n";
        double total = 0.0;
        for (std::uint64_t ep = 0; ep < args.episodes; ++ep) {
            const auto episode = sim::run_episode(
                inst, policy, sol.get(), beta.get(), rng::derive(args.seed, 0xE1150DE, ep));
            total += episode.total_weight;
            out << policy.name << "," << args.instance_path << "," << ep << ","
                << fmt_g(episode.total_weight) << "\n";
        }
        log << "mean weight "
            << fmt_g(args.episodes ? total / static_cast<double>(args.episodes) : 0.0)
            << " over " << args.episodes << " episodes\n";
        return 0;
    } catch (const std::exception& ex) {
        log << "error: " << ex.what() << "\n";
        return 1;
    }
}

int cmd_evaluate(const ExperimentConfig& config, const std::string& out_csv,
                 std::ostream& log) {
    try {
        if (config.policies.empty())
            throw std::invalid_argument("config names no policies");
        const auto inst = resolve_instance(config, log);
        const auto prepared = prepare_lp(config, inst, log);

        // One attenuation table per distinct adap gamma.
        std::map<double, std::unique_ptr<attenuation::AttenuationTable>> tables;
        for (const auto& spec : config.policies) {
            if (spec.name != "adap" || tables.count(spec.gamma)) continue;
            if (!prepared.solution)
                throw std::invalid_argument("adap needs a solved benchmark");
            auto table = std::make_unique<attenuation::AttenuationTable>(
                config.attenuation_method == "monte-carlo"
                    ? attenuation::beta_monte_carlo(inst, *prepared.solution, spec.gamma,
                                                    config.attenuation_samples,
                                                    rng::derive(config.seed, 0xBE7A))
                    : attenuation::beta_exact(inst, *prepared.solution, spec.gamma));
            if (!table->valid())
                throw std::runtime_error(
                    "attenuation validity breach at resource " +
                    inst.resource_name(table->breaches.front().resource) + " round " +
                    std::to_string(table->breaches.front().round));
            tables.emplace(spec.gamma, std::move(table));
        }

        std::ofstream out(out_csv);
        if (!out) throw std::runtime_error("cannot write " + out_csv);
        out << "# format = omrr-evaluate/1\n";
        out << "# config = " << config_to_json(config).dump() << "\n";
        out << "policy,instance,episodes,mean_weight,stderr,lp_opt,ratio\n";
        for (const auto& spec : config.policies) {
            const auto policy = make_policy(spec, inst);
            const attenuation::AttenuationTable* beta =
                spec.name == "adap" ? tables.at(spec.gamma).get() : nullptr;
            const auto reportrow =
                sim::evaluate(inst, policy, prepared.solution.get(), beta,
                              config.episodes, config.seed, prepared.lp_opt);
            out << policy.name << "," << config.instance_id << "," << config.episodes
                << "," << fmt_g(reportrow.mean_weight) << ","
                << stderr_or_na(reportrow.stderr_mean) << ","
                << stderr_or_na(reportrow.lp_opt) << ","
                << stderr_or_na(reportrow.ratio) << "\n";
            log << policy.name << ": mean " << fmt_g(reportrow.mean_weight);
            if (reportrow.ratio) log << " ratio " << fmt_g(*reportrow.ratio);
            log << "\n";
        }
        return 0;
    } catch (const std::exception& ex) {
        log << "error: " << ex.what() << "\n";
        return 1;
    }
}

int cmd_evaluate(const EvaluateArgs& args, std::ostream& log) {
    try {
        const auto config = config_from_json(io::load_json(args.config_path));
        return cmd_evaluate(config, args.out_csv, log);
    } catch (const std::exception& ex) {
        log << "error: " << ex.what() << "\n";
        return 1;
    }
}

int cmd_hardness(const HardnessArgs& args, std::ostream& log) {
    try {
        std::ofstream out(args.out_csv);
        if (!out) throw std::runtime_error("cannot write " + args.out_csv);
        out << "# format = omrr-hardness/1\n";
        out << "# n = " << args.horizon << ", episodes = " << args.episodes
            << ", seed = " << args.seed << "\n";
        out << "k,n,bound,recursion_objective,lp_objective,nadap_mean,nadap_stderr,"
               "nadap_ratio\n";
        std::ofstream gamma_out;
        if (!args.gamma_out.empty()) {
            gamma_out.open(args.gamma_out);
            if (!gamma_out) throw std::runtime_error("cannot write " + args.gamma_out);
            gamma_out << "k,resource,round,gamma\n";
        }
        for (const std::uint32_t k : args.k_values) {
            const hardness::HardnessParams params{k, args.horizon};
            const double bound = hardness::hardness_bound(k);
            const std::vector<double> beta(k, 1.0 / static_cast<double>(k));
            const auto recursion = hardness::recursion_evaluate(params, beta);
            const double lp_objective = hardness::hardness_lp_objective(params);
            const auto inst = hardness::hardness_instance(params);
            const auto policy =
                policies::make_nadap(inst, hardness::uniform_nadap_alpha(inst, k));
            const auto report = sim::evaluate(inst, policy, nullptr, nullptr,
                                              args.episodes, args.seed, lp_objective);
            char bound_buf[32];
            std::snprintf(bound_buf, sizeof(bound_buf), "%.4f", bound);
            out << k << "," << args.horizon << "," << bound_buf << ","
                << fmt_g(recursion.objective) << "," << fmt_g(lp_objective) << ","
                << fmt_g(report.mean_weight) << ","
                << stderr_or_na(report.stderr_mean) << ","
                << stderr_or_na(report.ratio) << "\n";
            log << "K=" << k << " bound " << bound_buf << " recursion "
                << fmt_g(recursion.objective) << " simulated ratio "
                << (report.ratio ? fmt_g(*report.ratio) : "na") << "\n";
            if (gamma_out.is_open())
                for (std::uint32_t u = 0; u < k; ++u)
                    for (model::Round t = 1; t <= args.horizon; ++t)
                        gamma_out << k << "," << u << "," << t << ","
                                  << fmt_g(recursion.at(u, t)) << "\n";
        }
        return 0;
    } catch (const std::exception& ex) {
        log << "error: " << ex.what() << "\n";
        return 1;
    }
}

int cmd_synth(const SynthArgs& args, std::ostream& log) {
    try {
        const auto records = data::synth_trips(args.scenario);
        std::ofstream out(args.out_csv);
        if (!out) throw std::runtime_error("cannot write " + args.out_csv);
        data::write_trips_csv(out, records);
        log << records.size() << " trips written to " << args.out_csv << "\n";
        return 0;
    } catch (const std::exception& ex) {
        log << "error: " << ex.what() << "\n";
        return 1;
    }
}

}  // namespace omrr::cli
