#include "omrr/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace omrr::oracle {

namespace {

using model::EdgeId;
using model::Round;
using model::TypeId;

// Joint remaining-unavailability state, mixed-radix encoded: counter c_u is
// the number of further rounds resource u stays blocked (0 = available now).
struct StateSpace {
    std::vector<std::uint32_t> radix;   // per resource: counter upper bound + 1
    std::vector<std::size_t> stride;
    std::size_t size = 1;

    explicit StateSpace(const model::Instance& inst) {
        const Round T = inst.horizon();
        radix.resize(inst.num_resources());
        stride.resize(inst.num_resources());
        for (std::size_t u = 0; u < inst.num_resources(); ++u) {
            std::uint32_t max_occ = 1;
            for (EdgeId e : inst.edges_of_resource(u))
                for (Round t = 1; t <= T; ++t)
                    max_occ = std::max(max_occ,
                                       std::max(1u, inst.occupation().at(e, t).support_max()));
            // counter after a match is at most max_occ - 1
            radix[u] = max_occ;
            stride[u] = size;
            size *= radix[u];
        }
    }

    std::uint32_t counter(std::size_t state, std::size_t u) const {
        return static_cast<std::uint32_t>(state / stride[u] % radix[u]);
    }
};

class ExactOracle {
public:
    ExactOracle(const model::Instance& inst) : inst_(inst), space_(inst) {
        T_ = inst.horizon();
        V_ = inst.num_types();
        // Precompute the all-decrement transition.
        decrement_.resize(space_.size);
        for (std::size_t s = 0; s < space_.size; ++s) {
            std::size_t d = 0;
            for (std::size_t u = 0; u < space_.radix.size(); ++u) {
                const std::uint32_t c = space_.counter(s, u);
                d += static_cast<std::size_t>(c > 0 ? c - 1 : 0) * space_.stride[u];
            }
            decrement_[s] = d;
        }
        tables_.assign(T_ + 2, std::vector<double>(space_.size, 0.0));
    }

    // Walks every arrival suffix from the last round backwards; two sequences
    // sharing a suffix share the value tables for that suffix.
    double expectation() {
        return descend(T_, 1.0);
    }

private:
    double descend(Round t, double prob) {
        if (t == 0) return prob * tables_[1][0];
        double total = 0.0;
        const double mass = std::min(inst_.arrivals().round_mass(t), 1.0);
        const double no_arrival = std::max(0.0, 1.0 - mass);
        if (no_arrival > 0.0) {
            fill_table(t, std::nullopt);
            total += descend(t - 1, prob * no_arrival);
        }
        for (TypeId v = 0; v < V_; ++v) {
            const double p = inst_.arrivals().rate(v, t);
            if (p <= 0.0) continue;
            fill_table(t, v);
            total += descend(t - 1, prob * p);
        }
        return total;
    }

    // tables_[t][s] = optimal continuation value from round t in state s given
    // the arrival choice at t and the already-filled tables_[t+1].
    void fill_table(Round t, std::optional<TypeId> arrival) {
        const auto& next = tables_[t + 1];
        auto& cur = tables_[t];
        for (std::size_t s = 0; s < space_.size; ++s) {
            double best = next[decrement_[s]];  // reject / nothing arrived
            if (arrival) {
                for (EdgeId e : inst_.edges_of_type(*arrival)) {
                    const auto u = inst_.edge(e).resource;
                    if (space_.counter(s, u) != 0) continue;
                    const auto& otd = inst_.occupation().at(e, t);
                    // expectation over the realized occupation
                    double val = 0.0;
                    const std::size_t base = decrement_[s];
                    for (std::uint32_t c = 0; c <= otd.support_max(); ++c) {
                        const double pr = otd.pmf(c);
                        if (pr == 0.0) continue;
                        const std::uint32_t counter = std::max(c, 1u) - 1;
                        val += pr * next[base + counter * space_.stride[u]];
                    }
                    val += inst_.edge(e).weight;
                    best = std::max(best, val);
                }
            }
            cur[s] = best;
        }
    }

    const model::Instance& inst_;
    StateSpace space_;
    Round T_ = 0;
    TypeId V_ = 0;
    std::vector<std::size_t> decrement_;
    std::vector<std::vector<double>> tables_;  // per round, indexed 1..T+1
};

}  // namespace

bool SmallInstanceBound::admits(const model::Instance& inst) const {
    if (inst.num_resources() > max_resources || inst.num_types() > max_types ||
        inst.horizon() > horizon_cap)
        return false;
    double states = 1.0;
    for (std::size_t u = 0; u < inst.num_resources(); ++u) {
        std::uint32_t support = 0;
        for (EdgeId e : inst.edges_of_resource(u))
            for (Round t = 1; t <= inst.horizon(); ++t)
                support = std::max(support, inst.occupation().at(e, t).support_max());
        if (support > occupation_support_cap) return false;
        states *= static_cast<double>(support) + 1.0;
    }
    const double sequences =
        std::pow(static_cast<double>(inst.num_types()) + 1.0,
                 static_cast<double>(inst.horizon()));
    return states * static_cast<double>(inst.horizon()) * sequences <= budget;
}

double offline_optimal(const model::Instance& inst, const SmallInstanceBound& bound) {
    if (!bound.admits(inst))
        throw std::invalid_argument(
            "instance exceeds the exact-expectation budget (shrink the horizon, "
            "type count, or occupation support)");
    ExactOracle oracle(inst);
    return oracle.expectation();
}

}  // namespace omrr::oracle
