#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "omrr/data.hpp"
#include "omrr/hardness.hpp"
#include "omrr/policies.hpp"
#include "omrr/solver.hpp"

namespace omrr::cli {

inline constexpr const char* kConfigFormat = "omrr-config/1";

struct PolicySpec {
    std::string name;  // adap | alg-lp | alg-sc-lp | greedy | ur | eps-greedy | nadap
    double gamma = 0.5;               // adap
    double eps = 0.1;                 // eps-greedy mixing weight
    bool eps_lp_branch_safe = false;  // eps-greedy: use the safe-conditioned LP rule
    double nadap_alpha = 0.0;         // uniform per-edge allocation; 0 = 1/|resources|
};

// The evaluate command's configuration document; exactly one instance source
// is set. Defaults are filled on load and echoed into every output header.
struct ExperimentConfig {
    std::string instance_path;
    std::optional<data::SyntheticScenario> synthetic;
    data::TrainOptions train;
    data::InstanceOptions instance_options;
    std::optional<hardness::HardnessParams> hardness_params;

    std::vector<PolicySpec> policies;
    std::uint64_t episodes = 1000;
    std::uint64_t seed = 1;
    std::string attenuation_method = "exact";  // exact | monte-carlo
    std::uint64_t attenuation_samples = 10000;
    bool time_sensitive = false;
    std::string solver_backend = "auto";  // auto | simplex | first-order
    double solver_tolerance = 1e-6;
    std::string instance_id = "instance";
};

ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ExperimentConfig& config);

policies::Policy make_policy(const PolicySpec& spec, const model::Instance& inst);
solver::SolverConfig make_solver_config(const std::string& backend, double tolerance);

struct TrainArgs {
    std::string trips_path;
    data::GridSpec grid;
    data::TrainOptions options;
    data::InstanceOptions instance_options;
    std::string model_out;
    std::string instance_out;  // optional
};
int cmd_train(const TrainArgs& args, std::ostream& log);

struct SolveArgs {
    std::string instance_path;
    bool time_sensitive = false;
    std::string solution_out;  // optional
    std::string export_lp;     // optional LP-format text export
    std::string backend = "auto";
    double tolerance = 1e-6;
};
int cmd_solve(const SolveArgs& args, std::ostream& log);

struct SimulateArgs {
    std::string instance_path;
    std::string solution_path;  // required by LP-guided policies
    PolicySpec policy;
    std::uint64_t episodes = 1;
    std::uint64_t seed = 1;
    std::string attenuation_method = "exact";
    std::uint64_t attenuation_samples = 10000;
    std::string episodes_out;  // per-episode CSV
    std::string beta_out;      // optional attenuation CSV
};
int cmd_simulate(const SimulateArgs& args, std::ostream& log);

struct EvaluateArgs {
    std::string config_path;
    std::string out_csv;
};
int cmd_evaluate(const EvaluateArgs& args, std::ostream& log);
int cmd_evaluate(const ExperimentConfig& config, const std::string& out_csv,
                 std::ostream& log);

struct HardnessArgs {
    std::vector<std::uint32_t> k_values = {2, 3, 5, 8};
    std::uint32_t horizon = 400;
    std::uint64_t episodes = 10000;
    std::uint64_t seed = 1;
    std::string out_csv;
    std::string gamma_out;  // optional availability-table CSV
};
int cmd_hardness(const HardnessArgs& args, std::ostream& log);

struct SynthArgs {
    data::SyntheticScenario scenario;
    std::string out_csv;
};
int cmd_synth(const SynthArgs& args, std::ostream& log);

}  // namespace omrr::cli
