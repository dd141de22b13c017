#include "omrr/attenuation.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "omrr/policies.hpp"
#include "omrr/rng.hpp"
#include "omrr/sim.hpp"

namespace omrr::attenuation {

namespace {

void require_shapes(const model::Instance& inst, const lp::LpSolution& sol,
                    double gamma) {
    if (!(gamma > 0.0 && gamma <= 1.0))
        throw std::invalid_argument("gamma must lie in (0, 1]");
    if (sol.horizon != inst.horizon() || sol.num_edges != inst.num_edges())
        throw std::invalid_argument("solution shape does not match instance");
    if (sol.time_sensitive != inst.occupation().time_indexed())
        throw std::invalid_argument(
            "solution constraint form does not match instance occupation mode");
}

AttenuationTable blank_table(const model::Instance& inst, double gamma) {
    AttenuationTable table;
    table.num_resources = inst.num_resources();
    table.horizon = inst.horizon();
    table.gamma = gamma;
    table.beta.assign(table.num_resources * static_cast<std::size_t>(table.horizon), 1.0);
    table.standard_error.assign(table.beta.size(), 0.0);
    return table;
}

}  // namespace

AttenuationTable beta_exact(const model::Instance& inst, const lp::LpSolution& sol,
                            double gamma) {
    require_shapes(inst, sol, gamma);
    AttenuationTable table = blank_table(inst, gamma);
    table.method = AttenuationTable::Method::exact;

    const Round T = inst.horizon();
    std::vector<double> blocked(T);  // probability mass occupying u at round t
    for (ResourceId u = 0; u < inst.num_resources(); ++u) {
        std::fill(blocked.begin(), blocked.end(), 0.0);
        for (model::EdgeId e : inst.edges_of_resource(u))
            for (Round tp = 1; tp <= T; ++tp) {
                const double x = sol.at(e, tp);
                if (x == 0.0) continue;
                const auto& otd = inst.occupation().at(e, tp);
                for (Round t = tp + 1; t <= T; ++t) {
                    const double tail = otd.tail(t - tp);
                    if (tail == 0.0) break;
                    blocked[t - 1] += x * tail;
                }
            }
        double* row = table.beta.data() + static_cast<std::size_t>(u) * T;
        for (Round t = 1; t <= T; ++t) {
            row[t - 1] = 1.0 - gamma * blocked[t - 1];
            if (row[t - 1] < gamma - 1e-12)
                table.breaches.push_back({u, t, row[t - 1]});
        }
    }
    return table;
}

AttenuationTable beta_monte_carlo(const model::Instance& inst, const lp::LpSolution& sol,
                                  double gamma, std::uint64_t samples,
                                  std::uint64_t seed) {
    require_shapes(inst, sol, gamma);
    if (samples == 0) throw std::invalid_argument("samples must be at least 1");
    AttenuationTable table = blank_table(inst, gamma);
    table.method = AttenuationTable::Method::monte_carlo;
    table.samples = samples;

    const Round T = inst.horizon();
    const std::size_t U = inst.num_resources();
    const policies::Policy policy = policies::make_adap(gamma);
    std::vector<std::uint64_t> available(U);

    for (Round t = 2; t <= T; ++t) {
        std::fill(available.begin(), available.end(), 0);
        for (std::uint64_t s = 0; s < samples; ++s) {
            std::vector<Round> next_free;
            try {
                next_free = sim::run_prefix(inst, policy, &sol, &table, t - 1,
                                            rng::derive(seed, t, s));
            } catch (const policies::ValidityError& err) {
                throw std::runtime_error(
                    std::string("attenuation table construction aborted: ") +
                    err.what());
            }
            for (std::size_t u = 0; u < U; ++u)
                if (next_free[u] <= t) ++available[u];
        }
        for (std::size_t u = 0; u < U; ++u) {
            const double b = static_cast<double>(available[u]) /
                             static_cast<double>(samples);
            const double se =
                std::sqrt(b * (1.0 - b) / static_cast<double>(samples));
            table.beta[u * T + (t - 1)] = b;
            table.standard_error[u * T + (t - 1)] = se;
            if (b + 4.0 * se < gamma)
                table.breaches.push_back({static_cast<ResourceId>(u), t, b});
        }
    }
    return table;
}

void write_csv(std::ostream& os, const AttenuationTable& table,
               const model::Instance& inst) {
    os << "resource,round,beta,stderr\n";
    char buf[128];
    for (ResourceId u = 0; u < table.num_resources; ++u)
        for (Round t = 1; t <= table.horizon; ++t) {
            std::snprintf(buf, sizeof(buf), "%s,%u,%.12g,%.12g\n",
                          inst.resource_name(u).c_str(), t, table.at(u, t),
                          table.se(u, t));
            os << buf;
        }
}

}  // namespace omrr::attenuation
