#include "omrr/sim.hpp"

#include <cmath>
#include <stdexcept>

#include "omrr/rng.hpp"

namespace omrr::sim {

namespace {

// Substream labels: one experiment seed fans out into independent arrival,
// occupation and policy streams so policies can be compared on identical
// arrival sequences.
constexpr std::uint64_t kArrivalStream = 0xA551;
constexpr std::uint64_t kOccupationStream = 0x0CC1;
constexpr std::uint64_t kPolicyStream = 0x70C1;
constexpr std::uint64_t kEpisodeLabel = 0xE1150DE;

struct Engine {
    const model::Instance& inst;
    const policies::Policy& policy;
    policies::PolicyContext ctx;
    rng::Stream arrivals;
    rng::Stream occupations;
    rng::Stream policy_rng;
    std::vector<Round> next_free;
    std::vector<model::EdgeId> safe_scratch;

    Engine(const model::Instance& instance, const policies::Policy& pol,
           const lp::LpSolution* lp, const attenuation::AttenuationTable* beta,
           std::uint64_t seed)
        : inst(instance),
          policy(pol),
          arrivals(rng::derive(seed, kArrivalStream)),
          occupations(rng::derive(seed, kOccupationStream)),
          policy_rng(rng::derive(seed, kPolicyStream)) {
        if (pol.needs_lp && lp == nullptr)
            throw std::invalid_argument("policy '" + pol.name + "' needs an LP solution");
        if (pol.needs_beta && beta == nullptr)
            throw std::invalid_argument("policy '" + pol.name +
                                        "' needs an attenuation table");
        ctx.inst = &inst;
        ctx.lp = lp;
        ctx.beta = beta;
        ctx.rng_stream = &policy_rng;
        next_free.assign(inst.num_resources(), 1);
    }

    void play(Round rounds, EpisodeResult* out) {
        for (Round t = 1; t <= rounds; ++t) {
            const double u01 = arrivals.uniform01();
            const auto arrival = inst.arrivals().sample(t, u01);
            if (!arrival) {
                if (out) ++out->no_arrivals;
                continue;
            }
            safe_scratch.clear();
            for (model::EdgeId e : inst.edges_of_type(*arrival))
                if (next_free[inst.edge(e).resource] <= t) safe_scratch.push_back(e);
            ctx.round = t;
            ctx.arrival = *arrival;
            ctx.safe_edges = safe_scratch;
            policies::Decision dec;
            try {
                dec = policy.decide(ctx);
            } catch (const policies::ValidityError&) {
                throw;  // already carries (resource, round) context
            } catch (const std::exception& ex) {
                throw std::runtime_error("policy '" + policy.name + "' failed at round " +
                                         std::to_string(t) + ": " + ex.what());
            }
            if (!dec) {
                if (out) ++out->rejects;
                continue;
            }
            const model::EdgeId e = *dec;
            const auto c = inst.occupation().at(e, t).sample(occupations.uniform01());
            next_free[inst.edge(e).resource] = model::next_available_round(t, c);
            if (out) {
                out->total_weight += inst.edge(e).weight;
                out->matches.push_back({t, e, c});
            }
        }
    }
};

}  // namespace

EpisodeResult run_episode(const model::Instance& inst, const policies::Policy& policy,
                          const lp::LpSolution* lp,
                          const attenuation::AttenuationTable* beta,
                          std::uint64_t seed) {
    EpisodeResult result;
    result.seed = seed;
    Engine engine(inst, policy, lp, beta, seed);
    engine.play(inst.horizon(), &result);
    return result;
}

std::vector<Round> run_prefix(const model::Instance& inst, const policies::Policy& policy,
                              const lp::LpSolution* lp,
                              const attenuation::AttenuationTable* beta,
                              Round prefix_rounds, std::uint64_t seed) {
    Engine engine(inst, policy, lp, beta, seed);
    engine.play(prefix_rounds, nullptr);
    return engine.next_free;
}

EvaluationReport evaluate(const model::Instance& inst, const policies::Policy& policy,
                          const lp::LpSolution* lp,
                          const attenuation::AttenuationTable* beta,
                          std::uint64_t episodes, std::uint64_t seed,
                          std::optional<double> lp_opt) {
    EvaluationReport report;
    report.episodes = episodes;
    report.seed = seed;
    report.lp_opt = lp_opt;
    if (episodes == 0) return report;

    double sum = 0.0, sumsq = 0.0;
    for (std::uint64_t ep = 0; ep < episodes; ++ep) {
        const auto episode =
            run_episode(inst, policy, lp, beta, rng::derive(seed, kEpisodeLabel, ep));
        sum += episode.total_weight;
        sumsq += episode.total_weight * episode.total_weight;
    }
    const double n = static_cast<double>(episodes);
    report.mean_weight = sum / n;
    if (episodes >= 2) {
        const double var =
            std::max(0.0, (sumsq - sum * sum / n) / (n - 1.0));
        report.stderr_mean = std::sqrt(var / n);
    }
    if (lp_opt && *lp_opt > 0.0) report.ratio = report.mean_weight / *lp_opt;
    return report;
}

bool replay_consistent(const model::Instance& inst, const EpisodeResult& episode,
                       std::string* why) {
    std::vector<Round> next_free(inst.num_resources(), 1);
    Round prev_round = 0;
    for (const Match& m : episode.matches) {
        if (m.round < prev_round) {
            if (why) *why = "matches out of round order";
            return false;
        }
        prev_round = m.round;
        if (m.edge >= inst.num_edges() || m.round < 1 || m.round > inst.horizon()) {
            if (why) *why = "match outside instance bounds";
            return false;
        }
        const auto u = inst.edge(m.edge).resource;
        if (next_free[u] > m.round) {
            if (why)
                *why = "resource " + inst.resource_name(u) + " matched at round " +
                       std::to_string(m.round) + " while unavailable until " +
                       std::to_string(next_free[u]);
            return false;
        }
        next_free[u] = model::next_available_round(m.round, m.occupation);
    }
    double weight = 0.0;
    for (const Match& m : episode.matches) weight += inst.edge(m.edge).weight;
    if (std::abs(weight - episode.total_weight) > 1e-9 * (1.0 + std::abs(weight))) {
        if (why) *why = "total weight does not match the match list";
        return false;
    }
    return true;
}

}  // namespace omrr::sim
