#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "omrr/lp.hpp"
#include "omrr/model.hpp"

namespace omrr::attenuation {

using model::ResourceId;
using model::Round;

// Safety probabilities beta_{u,t} = Pr[resource u is available at round t]
// under the attenuated policy. Safety depends on the resource alone, so the
// table is resource-indexed.
struct AttenuationTable {
    enum class Method { exact, monte_carlo };

    std::size_t num_resources = 0;
    Round horizon = 0;
    Method method = Method::exact;
    double gamma = 0.5;
    std::uint64_t samples = 0;  // 0 for exact

    std::vector<double> beta;          // u * horizon + (t - 1); beta_{u,1} = 1
    std::vector<double> standard_error;  // same indexing, all 0 for exact

    struct Breach {
        ResourceId resource;
        Round round;
        double beta;
    };
    // (u, t) entries whose beta falls below gamma: the attenuated policy's
    // sampling ratio gamma/beta would exceed 1 there. Recorded, never
    // clamped. For Monte-Carlo tables only statistically significant dips
    // (beta + 4*stderr < gamma) are listed.
    std::vector<Breach> breaches;

    double at(ResourceId u, Round t) const {
        return beta[static_cast<std::size_t>(u) * horizon + (t - 1)];
    }
    double se(ResourceId u, Round t) const {
        return standard_error[static_cast<std::size_t>(u) * horizon + (t - 1)];
    }
    bool valid() const { return breaches.empty(); }
};

// Closed-form table: beta_{u,t} = 1 - gamma * sum_{t'<t} sum_{e in d(u)}
// x_{e,t'} Pr[C > t - t']. Exact for the attenuated policy as long as no
// earlier entry breaches gamma; breaches are flagged in the table.
// Requires gamma in (0, 1] and a solution matching the instance shape.
AttenuationTable beta_exact(const model::Instance& inst, const lp::LpSolution& sol,
                            double gamma);

// Simulation estimate, built round by round: for round t it runs `samples`
// fresh episodes of the attenuated policy over rounds 1..t-1 (driven by the
// table rows already estimated) and takes the availability frequency of each
// resource at t from that one pool of runs. Binomial standard errors are
// recorded. Deterministic given the seed. A validity breach inside the
// simulated policy (total sampling mass above 1) aborts construction with a
// diagnostic; estimates are never clamped to hide it.
AttenuationTable beta_monte_carlo(const model::Instance& inst, const lp::LpSolution& sol,
                                  double gamma, std::uint64_t samples,
                                  std::uint64_t seed);

// CSV columns: resource,round,beta,stderr.
void write_csv(std::ostream& os, const AttenuationTable& table,
               const model::Instance& inst);

}  // namespace omrr::attenuation
