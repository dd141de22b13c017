#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "omrr/model.hpp"
#include "omrr/policies.hpp"

namespace omrr::sim {

using model::EdgeId;
using model::Round;

struct Match {
    Round round;
    EdgeId edge;
    std::uint32_t occupation;  // realized draw
};

struct EpisodeResult {
    double total_weight = 0.0;
    std::vector<Match> matches;
    std::uint64_t rejects = 0;      // arrivals the policy rejected (incl. forced)
    std::uint64_t no_arrivals = 0;  // rounds with no arrival
    std::uint64_t seed = 0;
};

struct EvaluationReport {
    double mean_weight = 0.0;
    // Absent when a standard error is not estimable (fewer than 2 episodes).
    std::optional<double> stderr_mean;
    std::uint64_t episodes = 0;
    std::optional<double> lp_opt;
    std::optional<double> ratio;  // mean_weight / lp_opt
    std::uint64_t seed = 0;
};

// Plays one episode: per round, one arrival draw against the cumulative
// rates, safe-set construction, policy decision, and on a match one
// occupation draw that blocks the resource until its return round. The seed
// splits into independent arrival / occupation / policy substreams, so
// different policies run against identical arrival sequences for the same
// seed. Policy validity errors propagate annotated with the round.
EpisodeResult run_episode(const model::Instance& inst, const policies::Policy& policy,
                          const lp::LpSolution* lp,
                          const attenuation::AttenuationTable* beta,
                          std::uint64_t seed);

// Runs rounds 1..prefix_rounds only and returns each resource's next free
// round; resource u is available at round t iff next_free[u] <= t.
std::vector<Round> run_prefix(const model::Instance& inst, const policies::Policy& policy,
                              const lp::LpSolution* lp,
                              const attenuation::AttenuationTable* beta,
                              Round prefix_rounds, std::uint64_t seed);

// Independent episodes with per-episode derived seeds, merged in episode
// order (parallel execution would merge identically).
EvaluationReport evaluate(const model::Instance& inst, const policies::Policy& policy,
                          const lp::LpSolution* lp,
                          const attenuation::AttenuationTable* beta,
                          std::uint64_t episodes, std::uint64_t seed,
                          std::optional<double> lp_opt = std::nullopt);

// Replays a finished episode against the availability rule and the instance
// structure; returns false (with a message) on any inconsistency. Used by
// tests as an independent soundness check of the engine.
bool replay_consistent(const model::Instance& inst, const EpisodeResult& episode,
                       std::string* why = nullptr);

}  // namespace omrr::sim
