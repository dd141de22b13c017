// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Run with --criterion N for a single criterion, no arguments for
// all seven. Every tolerance is pinned here, in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "omrr/attenuation.hpp"
#include "omrr/cli.hpp"
#include "omrr/data.hpp"
#include "omrr/hardness.hpp"
#include "omrr/io.hpp"
#include "omrr/lp.hpp"
#include "omrr/oracle.hpp"
#include "omrr/policies.hpp"
#include "omrr/sim.hpp"
#include "../support/test_instances.hpp"

namespace {

using namespace omrr;
using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kFamilySeed = 20250901;
constexpr int kFamilySize = 50;

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        pass = false;
        if (!detail.empty()) detail += "; ";
        detail += why;
    }
    void note(const std::string& what) {
        if (detail.empty()) detail = what;
    }
};

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

model::Instance family_instance(int index) {
    return testsupport::random_small_instance(kFamilySeed + index);
}

// 1. The benchmark program upper-bounds the exact offline optimum on every
//    instance of the randomized small family.
Outcome criterion1() {
    Outcome out;
    double worst_slack = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kFamilySize; ++i) {
        const auto inst = family_instance(i);
        const double offline = oracle::offline_optimal(inst);
        const double benchmark = lp::solve_lp(lp::build_benchmark_lp(inst)).objective;
        worst_slack = std::min(worst_slack, benchmark - offline);
        if (offline > benchmark + 1e-6)
            out.fail("instance " + std::to_string(i) + ": offline " + fmt(offline) +
                     " exceeds benchmark " + fmt(benchmark));
    }
    out.note("50 instances, smallest benchmark-offline slack " + fmt(worst_slack));
    return out;
}

// 2. Exact attenuation stays at or above one half at gamma = 1/2, and the
//    Monte-Carlo estimate agrees with it within four standard errors.
Outcome criterion2() {
    Outcome out;
    const std::uint64_t samples = 10000;
    double worst_beta = 1.0, worst_dev = 0.0;
    for (int i = 0; i < kFamilySize; ++i) {
        const auto inst = family_instance(i);
        const auto sol = lp::solve_lp(lp::build_benchmark_lp(inst));
        const auto exact = attenuation::beta_exact(inst, sol, 0.5);
        if (!exact.valid())
            out.fail("instance " + std::to_string(i) + ": validity breach at gamma 1/2");
        const auto mc = attenuation::beta_monte_carlo(inst, sol, 0.5, samples,
                                                      kFamilySeed + 7 * i);
        for (model::ResourceId u = 0; u < inst.num_resources(); ++u)
            for (model::Round t = 1; t <= inst.horizon(); ++t) {
                worst_beta = std::min(worst_beta, exact.at(u, t));
                if (exact.at(u, t) < 0.5 - 1e-12)
                    out.fail("instance " + std::to_string(i) + ": beta(" +
                             std::to_string(u) + "," + std::to_string(t) + ") = " +
                             fmt(exact.at(u, t)) + " below 1/2");
                const double truth = exact.at(u, t);
                const double se = std::max(
                    mc.se(u, t),
                    std::sqrt(truth * (1.0 - truth) / static_cast<double>(samples)));
                const double dev = std::abs(mc.at(u, t) - truth);
                worst_dev = std::max(worst_dev, se > 0 ? dev / se : 0.0);
                // The 4/samples additive guard covers the binomial tails that
                // the normal approximation misses next to beta = 1.
                if (dev > 4.0 * se + 4.0 / static_cast<double>(samples))
                    out.fail("instance " + std::to_string(i) + ": estimate at (" +
                             std::to_string(u) + "," + std::to_string(t) +
                             ") off by " + fmt(dev) + " (se " + fmt(se) + ")");
            }
    }
    out.note("min beta " + fmt(worst_beta) + ", max deviation " + fmt(worst_dev) +
             " se units over 50 instances");
    return out;
}

// 3. Attenuated play matches every (edge, round) at one half of its
//    benchmark allocation, measured over 200000 episodes of the fixture.
Outcome criterion3() {
    Outcome out;
    const auto inst = testsupport::one_resource_t3();
    const auto sol = lp::solve_lp(lp::build_benchmark_lp(inst));
    const auto beta = attenuation::beta_exact(inst, sol, 0.5);
    if (!beta.valid()) {
        out.fail("attenuation table breached at gamma 1/2");
        return out;
    }
    const std::uint64_t episodes = 200000;
    std::vector<std::uint64_t> hits(inst.num_edges() * inst.horizon(), 0);
    const auto policy = policies::make_adap(0.5);
    for (std::uint64_t ep = 0; ep < episodes; ++ep) {
        const auto episode =
            sim::run_episode(inst, policy, &sol, &beta, rng::derive(kFamilySeed, 3, ep));
        for (const auto& m : episode.matches)
            ++hits[m.edge * inst.horizon() + (m.round - 1)];
    }
    double worst = 0.0;
    for (model::EdgeId e = 0; e < inst.num_edges(); ++e)
        for (model::Round t = 1; t <= inst.horizon(); ++t) {
            const double target = 0.5 * sol.at(e, t);
            const double got =
                static_cast<double>(hits[e * inst.horizon() + (t - 1)]) / episodes;
            const double sigma =
                std::sqrt(target * (1.0 - target) / static_cast<double>(episodes));
            if (sigma == 0.0) {
                if (got != 0.0)
                    out.fail("edge " + std::to_string(e) + " round " + std::to_string(t) +
                             " matched despite zero allocation");
                continue;
            }
            const double dev = std::abs(got - target) / sigma;
            worst = std::max(worst, dev);
            if (dev > 4.0)
                out.fail("edge " + std::to_string(e) + " round " + std::to_string(t) +
                         ": frequency " + fmt(got) + " vs " + fmt(target) + " (" +
                         fmt(dev) + " sigma)");
        }
    out.note("max deviation " + fmt(worst) + " sigma across " +
             std::to_string(inst.num_edges() * inst.horizon()) + " cells");
    return out;
}

// 4. Attenuated play at gamma 1/2 collects at least (0.5 - 0.02) of the
//    benchmark on every family instance, averaged over 10000 episodes.
Outcome criterion4() {
    Outcome out;
    double worst_ratio = 1.0;
    for (int i = 0; i < kFamilySize; ++i) {
        const auto inst = family_instance(i);
        const auto sol = lp::solve_lp(lp::build_benchmark_lp(inst));
        if (sol.objective <= 0.0) {
            out.fail("instance " + std::to_string(i) + " has a zero benchmark");
            continue;
        }
        const auto beta = attenuation::beta_exact(inst, sol, 0.5);
        if (!beta.valid()) {
            out.fail("instance " + std::to_string(i) + ": attenuation breach");
            continue;
        }
        const auto report = sim::evaluate(inst, policies::make_adap(0.5), &sol, &beta,
                                          10000, kFamilySeed + 19 * i, sol.objective);
        const double ratio = report.mean_weight / sol.objective;
        worst_ratio = std::min(worst_ratio, ratio);
        if (ratio < 0.5 - 0.02)
            out.fail("instance " + std::to_string(i) + ": ratio " + fmt(ratio) +
                     " below 0.48");
    }
    out.note("worst ratio " + fmt(worst_ratio) + " over 50 instances");
    return out;
}

// 5. The adversarial family: recursion near its analytic ceiling, simulated
//    non-adaptive play near the recursion, and a benchmark optimum of
//    exactly n (aggregate route at n = 400, full program at n = 8).
Outcome criterion5() {
    Outcome out;
    const std::uint32_t n = 400;
    for (const std::uint32_t k : {2u, 3u, 5u, 8u}) {
        const hardness::HardnessParams params{k, n};
        const auto recursion = hardness::recursion_evaluate(
            params, std::vector<double>(k, 1.0 / static_cast<double>(k)));
        const double ceiling = hardness::hardness_bound(k);
        const double slack = (static_cast<double>(k) + 1.0) / n;
        if (std::abs(recursion.objective - ceiling) > slack)
            out.fail("K=" + std::to_string(k) + ": recursion " +
                     fmt(recursion.objective) + " not within " + fmt(slack) + " of " +
                     fmt(ceiling));

        const double lp_objective = hardness::hardness_lp_objective(params);
        if (std::abs(lp_objective - static_cast<double>(n)) > 1e-6)
            out.fail("K=" + std::to_string(k) + ": benchmark optimum " +
                     fmt(lp_objective) + " differs from n");

        const auto inst = hardness::hardness_instance(params);
        const auto policy =
            policies::make_nadap(inst, hardness::uniform_nadap_alpha(inst, k));
        const auto report = sim::evaluate(inst, policy, nullptr, nullptr, 10000,
                                          kFamilySeed + k, lp_objective);
        const double sim_ratio = report.mean_weight / lp_objective;
        if (std::abs(sim_ratio - recursion.objective) >
            0.05 * recursion.objective)
            out.fail("K=" + std::to_string(k) + ": simulated ratio " + fmt(sim_ratio) +
                     " not within 5% of recursion " + fmt(recursion.objective));

        const hardness::HardnessParams small{k, 8};
        const auto small_sol =
            lp::solve_lp(lp::build_benchmark_lp(hardness::hardness_instance(small)));
        if (std::abs(small_sol.objective - 8.0) > 1e-6)
            out.fail("K=" + std::to_string(k) +
                     ": full benchmark at n=8 gives " + fmt(small_sol.objective));
    }
    out.note("K in {2,3,5,8}: recursion, simulation, and benchmark optimum agree");
    return out;
}

// 6. Synthetic peak/off-peak scenarios at the trained scale: the benchmark-
//    guided rules beat uniform-random at three sigma, their ratios stay in a
//    sane band, and swapping the occupation family at matched mean moves the
//    guided rule by less than ten percent.
Outcome criterion6() {
    Outcome out;
    data::SyntheticScenario scenario;  // 6x6 grid, 30 cars, 12 days, 288 rounds
    scenario.seed = 20130101;
    const auto parsed =
        data::assign_types(data::synth_trips(scenario), scenario.grid);
    data::TrainOptions train_options;
    const auto trained = data::train(parsed, scenario.grid, train_options);
    if (trained.types.size() < 200)
        out.fail("only " + std::to_string(trained.types.size()) + " observed types");
    if (trained.cars.size() != 30)
        out.fail("expected 30 cars, trained " + std::to_string(trained.cars.size()));

    solver::SolverConfig cfg;
    cfg.backend = solver::SolverConfig::Backend::first_order;
    cfg.tolerance = 1e-5;

    struct VariantResult {
        double lp_upper = 0.0;
        double alg_lp = 0.0, alg_lp_se = 0.0;
        double alg_sc = 0.0, alg_sc_se = 0.0;
        double ur = 0.0, ur_se = 0.0;
    };
    const std::uint64_t episodes = 2000;
    auto run_variant = [&](bool power) {
        data::InstanceOptions options;
        if (power) {
            options.otd_family = data::OtdFamily::power_law;
            options.match_power_law_mean = true;
        }
        const auto inst = data::build_experiment_instance(trained, options);
        if (inst.horizon() != 288) out.fail("horizon is not 288");
        const auto sol = lp::solve_lp(lp::build_benchmark_lp(inst), cfg);
        VariantResult r;
        r.lp_upper = sol.objective * (1.0 + sol.certified_gap) + 1e-9;
        const auto eval = [&](const policies::Policy& p, double& mean, double& se) {
            const auto rep =
                sim::evaluate(inst, p, &sol, nullptr, episodes, 20130131);
            mean = rep.mean_weight;
            se = rep.stderr_mean.value_or(0.0);
        };
        eval(policies::make_alg_lp(), r.alg_lp, r.alg_lp_se);
        eval(policies::make_alg_sc_lp(), r.alg_sc, r.alg_sc_se);
        eval(policies::make_ur(), r.ur, r.ur_se);
        return r;
    };
    const auto normal = run_variant(false);
    const auto power = run_variant(true);

    for (const auto* v : {&normal, &power}) {
        const char* tag = v == &normal ? "normal" : "power-law";
        const double gap_lp = v->alg_lp - v->ur;
        const double se_lp = std::sqrt(v->alg_lp_se * v->alg_lp_se + v->ur_se * v->ur_se);
        if (gap_lp < 3.0 * se_lp)
            out.fail(std::string(tag) + ": guided rule not 3 sigma above uniform (" +
                     fmt(gap_lp) + " vs " + fmt(3.0 * se_lp) + ")");
        const double gap_sc = v->alg_sc - v->ur;
        const double se_sc = std::sqrt(v->alg_sc_se * v->alg_sc_se + v->ur_se * v->ur_se);
        if (gap_sc < 3.0 * se_sc)
            out.fail(std::string(tag) +
                     ": safe-conditioned rule not 3 sigma above uniform");
        if (v->alg_lp / v->lp_upper < 0.45)
            out.fail(std::string(tag) + ": guided ratio " +
                     fmt(v->alg_lp / v->lp_upper) + " below 0.45");
        if (v->alg_sc / v->lp_upper < 0.45)
            out.fail(std::string(tag) + ": safe-conditioned ratio below 0.45");
    }
    const double swing = std::abs(normal.alg_lp - power.alg_lp) / normal.alg_lp;
    if (swing >= 0.10)
        out.fail("occupation family swap moves the guided rule by " + fmt(swing));
    out.note("ratios alg-lp " + fmt(normal.alg_lp / normal.lp_upper) + "/" +
             fmt(power.alg_lp / power.lp_upper) + ", ur " +
             fmt(normal.ur / normal.lp_upper) + ", family swing " + fmt(swing));
    return out;
}

// 7. Identical configs and seeds reproduce byte-identical CSV outputs across
//    the command layer.
Outcome criterion7() {
    Outcome out;
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "omrr_acceptance_c7";
    fs::create_directories(dir);
    const auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    };
    std::ostringstream sink;

    cli::ExperimentConfig config;
    config.hardness_params = hardness::HardnessParams{2, 40};
    config.policies = {{.name = "nadap"}, {.name = "ur"}, {.name = "greedy"}};
    config.episodes = 300;
    config.seed = 99;
    const auto eval_a = (dir / "eval_a.csv").string();
    const auto eval_b = (dir / "eval_b.csv").string();
    if (cli::cmd_evaluate(config, eval_a, sink) != 0 ||
        cli::cmd_evaluate(config, eval_b, sink) != 0)
        out.fail("evaluate command failed");
    else if (slurp(eval_a) != slurp(eval_b))
        out.fail("evaluate outputs differ between identical runs");

    cli::HardnessArgs hargs;
    hargs.k_values = {2, 3};
    hargs.horizon = 60;
    hargs.episodes = 400;
    hargs.seed = 7;
    hargs.out_csv = (dir / "hard_a.csv").string();
    cli::HardnessArgs hargs2 = hargs;
    hargs2.out_csv = (dir / "hard_b.csv").string();
    if (cli::cmd_hardness(hargs, sink) != 0 || cli::cmd_hardness(hargs2, sink) != 0)
        out.fail("hardness command failed");
    else if (slurp(hargs.out_csv) != slurp(hargs2.out_csv))
        out.fail("hardness outputs differ between identical runs");

    cli::SynthArgs sargs;
    sargs.scenario.days = 2;
    sargs.scenario.seed = 5;
    sargs.out_csv = (dir / "trips_a.csv").string();
    cli::SynthArgs sargs2 = sargs;
    sargs2.out_csv = (dir / "trips_b.csv").string();
    if (cli::cmd_synth(sargs, sink) != 0 || cli::cmd_synth(sargs2, sink) != 0)
        out.fail("synth command failed");
    else if (slurp(sargs.out_csv) != slurp(sargs2.out_csv))
        out.fail("synth outputs differ between identical runs");

    // One file-driven chain: instance + solution documents, then episodes.
    const auto inst_path = (dir / "fixture.json").string();
    io::save_json(inst_path,
                  io::instance_to_json(testsupport::one_resource_t3().spec()));
    cli::SolveArgs solve;
    solve.instance_path = inst_path;
    solve.solution_out = (dir / "fixture_sol.json").string();
    if (cli::cmd_solve(solve, sink) != 0) out.fail("solve command failed");
    cli::SimulateArgs sim_args;
    sim_args.instance_path = inst_path;
    sim_args.solution_path = solve.solution_out;
    sim_args.policy.name = "adap";
    sim_args.episodes = 200;
    sim_args.seed = 3;
    sim_args.episodes_out = (dir / "episodes_a.csv").string();
    cli::SimulateArgs sim_args2 = sim_args;
    sim_args2.episodes_out = (dir / "episodes_b.csv").string();
    if (cli::cmd_simulate(sim_args, sink) != 0 ||
        cli::cmd_simulate(sim_args2, sink) != 0)
        out.fail("simulate command failed");
    else if (slurp(sim_args.episodes_out) != slurp(sim_args2.episodes_out))
        out.fail("simulate outputs differ between identical runs");

    out.note("evaluate, hardness, synth, and simulate all byte-stable");
    return out;
}

struct Criterion {
    int id;
    const char* name;
    double time_limit_seconds;  // 0 = uncapped
    std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all = {
        {1, "benchmark upper-bounds the exact offline optimum", 120, criterion1},
        {2, "attenuation validity and simulated-table agreement", 300, criterion2},
        {3, "unconditional match rate of attenuated play", 0, criterion3},
        {4, "attenuated play collects half the benchmark", 0, criterion4},
        {5, "adversarial family: recursion, simulation, optimum", 600, criterion5},
        {6, "synthetic experiment shape and occupation robustness", 0, criterion6},
        {7, "byte-identical reruns across the command layer", 0, criterion7},
    };
    return all;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
            only = std::atoi(argv[++i]);
    }
    bool all_pass = true;
    for (const auto& criterion : criteria()) {
        if (only != 0 && criterion.id != only) continue;
        const auto start = Clock::now();
        Outcome outcome;
        try {
            outcome = criterion.run();
        } catch (const std::exception& ex) {
            outcome.fail(std::string("exception: ") + ex.what());
        }
        const double seconds =
            std::chrono::duration<double>(Clock::now() - start).count();
        if (criterion.time_limit_seconds > 0 && seconds > criterion.time_limit_seconds)
            outcome.fail("runtime " + fmt(seconds) + "s exceeds " +
                         fmt(criterion.time_limit_seconds) + "s");
        all_pass &= outcome.pass;
        std::printf("%s criterion %d: %s [%s] (%.1fs)\n",
                    outcome.pass ? "PASS" : "FAIL", criterion.id, criterion.name,
                    outcome.detail.c_str(), seconds);
        std::fflush(stdout);
    }
    return all_pass ? 0 : 1;
}
