#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "omrr/model.hpp"
#include "omrr/solver.hpp"

namespace omrr::hardness {

using model::Round;

// The adversarial family: K resources, n^2 request types on a complete
// bipartite graph, horizon n, uniform arrival rate 1/n^2, constant occupation
// K, unit weights.
struct HardnessParams {
    std::uint32_t resources = 2;  // K
    std::uint32_t horizon = 100;  // n (and sqrt of the type count)
};

model::Instance hardness_instance(const HardnessParams& params);

// Availability recursion of a non-adaptive rule with per-round match rate
// beta_u on a safe resource: gamma_{u,1} = 1 and for t > 1
//   gamma_{u,t} = 1 - beta_u * sum_{max(1, t-K+1) <= t' < t} gamma_{u,t'}.
struct RecursionTable {
    std::uint32_t resources = 0;
    Round horizon = 0;
    std::vector<double> gamma;       // u * horizon + (t - 1)
    std::vector<double> match_rate;  // beta_u per resource
    // (sum_u sum_t beta_u * gamma_{u,t}) / n
    double objective = 0.0;

    double at(std::uint32_t u, Round t) const {
        return gamma[static_cast<std::size_t>(u) * horizon + (t - 1)];
    }
};

// Requires beta_u >= 0 and sum_u beta_u <= 1.
RecursionTable recursion_evaluate(const HardnessParams& params,
                                  std::span<const double> beta);

// Ceiling on the objective of any feasible match-rate vector as the horizon
// grows: 1 / (2 - 1/K).
double hardness_bound(std::uint32_t K);

// g(x) = x / (1 + x (K - 1)), the per-resource limit throughput; concave for
// K >= 2, so the uniform split beta_u = 1/K is the maximizer.
double hardness_g(std::uint32_t K, double x);

// Finite-horizon intermediate bound: sum_t gamma_{u,t} <= n/(1 + b(K-1)) + 1/b.
double availability_sum_bound(const HardnessParams& params, double beta_u);

// Per-edge allocation alpha = 1/K for the non-adaptive rule, which yields
// beta_u = 1/K on the hardness instance.
std::vector<double> uniform_nadap_alpha(const model::Instance& inst, std::uint32_t K);

// Explicit reduced program over one variable per (edge, round):
//   max sum x  s.t.  type rows <= 1/n^2, window rows (width K) <= 1, x in [0,1].
// Only for small n; the variable count grows as K n^3.
solver::LinearProgram build_reduced_lp(const HardnessParams& params);

// Optimal value of the benchmark program on the hardness instance at any n,
// via an exact round-aggregated formulation: summing the type rows of a round
// gives z_t <= 1 and summing a window row over resources gives a window sum
// <= K, and the uniform solution x = z_t/(n^2 K) turns any feasible aggregate
// back into a feasible full solution with equal objective, so the optima
// coincide. The aggregate (n variables) is solved by simplex.
double hardness_lp_objective(const HardnessParams& params);

}  // namespace omrr::hardness
