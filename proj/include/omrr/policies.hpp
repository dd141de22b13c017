#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "omrr/attenuation.hpp"
#include "omrr/lp.hpp"
#include "omrr/model.hpp"
#include "omrr/rng.hpp"

namespace omrr::policies {

using model::EdgeId;
using model::ResourceId;
using model::Round;
using model::TypeId;

// Everything a decision rule may look at for one arrival. safe_edges holds
// the incident edges whose resource is available, ascending by edge id.
struct PolicyContext {
    const model::Instance* inst = nullptr;
    Round round = 0;
    TypeId arrival = 0;
    std::span<const EdgeId> safe_edges;
    const lp::LpSolution* lp = nullptr;
    const attenuation::AttenuationTable* beta = nullptr;
    rng::Stream* rng_stream = nullptr;
};

// nullopt rejects the arrival; otherwise the chosen edge, always from the
// safe set.
using Decision = std::optional<EdgeId>;

// Thrown when the attenuated policy's sampling probabilities would sum past 1
// at some (resource, round) with beta below gamma.
class ValidityError : public std::runtime_error {
public:
    ValidityError(ResourceId u, Round t, double beta, double gamma, double mass);
    ResourceId resource;
    Round round;
    double beta;
    double gamma;
    double total_mass;
};

// Attenuated sampling: safe edge e = (u, v) is chosen with probability
// (x_{e,t} / p_{v,t}) * (gamma / beta_{u,t}); leftover mass rejects. The
// unconditional match rate of e is then gamma * x_{e,t}.
Decision adap_decide(const PolicyContext& ctx, double gamma);

// Samples over ALL incident edges with probability x_{e,t} / p_{v,t}; a draw
// landing on an unavailable resource rejects (no resampling, which would be a
// different rule).
Decision alg_lp_decide(const PolicyContext& ctx);

// Safe-conditioned variant: picks a safe edge with probability
// x_{e,t} / (sum of x over safe edges); rejects when that sum is zero.
Decision alg_sc_lp_decide(const PolicyContext& ctx);

// Highest weight among safe edges; ties go to the smallest resource index.
Decision greedy_decide(const PolicyContext& ctx);

// Uniform over the safe set.
Decision ur_decide(const PolicyContext& ctx);

// With probability eps the greedy choice, otherwise the LP choice
// (alg_lp_decide by default, alg_sc_lp_decide when lp_branch_safe).
Decision eps_greedy_decide(const PolicyContext& ctx, double eps,
                           bool lp_branch_safe = false);

// Non-adaptive rule: samples an incident edge with its fixed probability
// alpha_by_edge[e] (sum over a type's edges at most 1) and matches only if
// the sampled resource is available.
Decision nadap_decide(const PolicyContext& ctx, std::span<const double> alpha_by_edge);

// A named decision rule plus the context pieces it requires. Decision
// functions hold no mutable state; concurrent use only needs distinct
// rng streams.
struct Policy {
    std::string name;
    bool needs_lp = false;
    bool needs_beta = false;
    std::function<Decision(const PolicyContext&)> decide;
};

Policy make_adap(double gamma = 0.5);
Policy make_alg_lp();
Policy make_alg_sc_lp();
Policy make_greedy();
Policy make_ur();
Policy make_eps_greedy(double eps = 0.1, bool lp_branch_safe = false);
// Validates sum_{e in d(v)} alpha[e] <= 1 for every type.
Policy make_nadap(const model::Instance& inst, std::vector<double> alpha_by_edge);

}  // namespace omrr::policies
