#include "omrr/hardness.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace omrr::hardness {

namespace {

void require_params(const HardnessParams& params) {
    if (params.resources < 1) throw std::invalid_argument("need at least one resource");
    if (params.horizon < params.resources)
        throw std::invalid_argument("horizon must be at least the resource count");
}

}  // namespace

model::Instance hardness_instance(const HardnessParams& params) {
    require_params(params);
    const std::uint32_t K = params.resources;
    const std::uint64_t n = params.horizon;
    const std::uint64_t types = n * n;

    model::InstanceSpec spec;
    spec.horizon = params.horizon;
    spec.resources.reserve(K);
    for (std::uint32_t u = 0; u < K; ++u)
        spec.resources.push_back("u" + std::to_string(u));
    spec.request_types.reserve(types);
    for (std::uint64_t v = 0; v < types; ++v)
        spec.request_types.push_back("v" + std::to_string(v));

    spec.edges.reserve(static_cast<std::size_t>(K) * types);
    for (std::uint64_t v = 0; v < types; ++v)
        for (std::uint32_t u = 0; u < K; ++u)
            spec.edges.push_back({u, static_cast<model::TypeId>(v), 1.0});

    spec.arrivals = model::ArrivalProcess::uniform(
        static_cast<model::TypeId>(types), params.horizon,
        1.0 / static_cast<double>(types));
    spec.occupation = model::OccupationMap::shared(
        model::OccupationDistribution::point_mass(K), spec.edges.size());
    return model::Instance::build(std::move(spec));
}

RecursionTable recursion_evaluate(const HardnessParams& params,
                                  std::span<const double> beta) {
    require_params(params);
    if (beta.size() != params.resources)
        throw std::invalid_argument("need one match rate per resource");
    double total_rate = 0.0;
    for (double b : beta) {
        if (b < 0.0) throw std::invalid_argument("match rates must be nonnegative");
        total_rate += b;
    }
    if (total_rate > 1.0 + model::kProbabilityTolerance)
        throw std::invalid_argument("match rates must sum to at most 1");

    const std::uint32_t K = params.resources;
    const Round n = params.horizon;
    RecursionTable table;
    table.resources = K;
    table.horizon = n;
    table.match_rate.assign(beta.begin(), beta.end());
    table.gamma.assign(static_cast<std::size_t>(K) * n, 0.0);

    double grand = 0.0;
    for (std::uint32_t u = 0; u < K; ++u) {
        double* row = table.gamma.data() + static_cast<std::size_t>(u) * n;
        const double b = beta[u];
        double window = 0.0;  // sum of gamma over the last K-1 rounds
        for (Round t = 1; t <= n; ++t) {
            const double g = t == 1 ? 1.0 : 1.0 - b * window;
            row[t - 1] = g;
            window += g;
            if (t >= K && K >= 1) window -= row[t - K];  // slide: keep t-K+2..t
            grand += b * g;
        }
    }
    table.objective = grand / static_cast<double>(n);
    return table;
}

double hardness_bound(std::uint32_t K) {
    if (K < 1) throw std::invalid_argument("K must be positive");
    return 1.0 / (2.0 - 1.0 / static_cast<double>(K));
}

double hardness_g(std::uint32_t K, double x) {
    return x / (1.0 + x * (static_cast<double>(K) - 1.0));
}

double availability_sum_bound(const HardnessParams& params, double beta_u) {
    if (beta_u <= 0.0) return std::numeric_limits<double>::infinity();
    const double n = params.horizon;
    const double K = params.resources;
    return n / (1.0 + beta_u * (K - 1.0)) + 1.0 / beta_u;
}

std::vector<double> uniform_nadap_alpha(const model::Instance& inst, std::uint32_t K) {
    return std::vector<double>(inst.num_edges(), 1.0 / static_cast<double>(K));
}

solver::LinearProgram build_reduced_lp(const HardnessParams& params) {
    require_params(params);
    const std::uint64_t K = params.resources;
    const std::uint64_t n = params.horizon;
    const std::uint64_t types = n * n;
    const std::uint64_t vars = K * types * n;
    if (vars > 5'000'000)
        throw std::invalid_argument("reduced program too large to materialize");

    solver::LinearProgram lp;
    // variable (u, v, t) -> ((v * K) + u) * n + (t - 1), edge-major like the
    // benchmark builder's (edge = v * K + u) ordering
    for (std::uint64_t j = 0; j < vars; ++j) lp.add_variable(0.0, 1.0, 1.0);
    auto var = [&](std::uint64_t u, std::uint64_t v, std::uint64_t t) {
        return (v * K + u) * n + (t - 1);
    };

    std::vector<std::pair<std::size_t, double>> row;
    for (std::uint64_t v = 0; v < types; ++v)
        for (std::uint64_t t = 1; t <= n; ++t) {
            row.clear();
            for (std::uint64_t u = 0; u < K; ++u) row.emplace_back(var(u, v, t), 1.0);
            lp.add_row(row, 1.0 / static_cast<double>(types));
        }
    for (std::uint64_t u = 0; u < K; ++u)
        for (std::uint64_t l = 1; l + K - 1 <= n; ++l) {
            row.clear();
            for (std::uint64_t t = l; t <= l + K - 1; ++t)
                for (std::uint64_t v = 0; v < types; ++v)
                    row.emplace_back(var(u, v, t), 1.0);
            lp.add_row(row, 1.0);
        }
    return lp;
}

double hardness_lp_objective(const HardnessParams& params) {
    require_params(params);
    const std::uint32_t K = params.resources;
    const Round n = params.horizon;

    solver::LinearProgram aggregate;
    for (Round t = 0; t < n; ++t) aggregate.add_variable(0.0, 1.0, 1.0);
    std::vector<std::pair<std::size_t, double>> row;
    for (Round l = 0; l + K <= n; ++l) {
        row.clear();
        for (Round t = l; t < l + K; ++t) row.emplace_back(t, 1.0);
        aggregate.add_row(row, static_cast<double>(K));
    }
    const auto res = solver::solve_simplex(aggregate);
    if (res.status != solver::SolveStatus::optimal)
        throw std::runtime_error("aggregate hardness program failed to solve: " +
                                 res.message);
    return res.objective;
}

}  // namespace omrr::hardness
