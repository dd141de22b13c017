#pragma once

#include <cstdint>

#include "omrr/model.hpp"

namespace omrr::oracle {

// Tractability limits for the exact expectation: the full computation walks
// every arrival sequence (types + 1 choices per round) against the joint
// availability state, so the admitted size is
//   (product over resources of (occupation support + 1)) * horizon
//     * (types + 1)^horizon <= budget.
struct SmallInstanceBound {
    std::size_t max_resources = 4;
    std::size_t max_types = 6;
    model::Round horizon_cap = 8;
    std::uint32_t occupation_support_cap = 8;
    double budget = 5e7;

    bool admits(const model::Instance& inst) const;
};

// Exact expected value of the offline optimum: decisions may depend on the
// entire arrival sequence (revealed up front), while occupation realizations
// unfold stochastically as matches happen, so the inner problem is a
// backward induction over the joint remaining-unavailability state. Suffixes
// shared between arrival sequences share their value tables. Deterministic;
// repeated calls agree bit-exactly. Throws when the instance exceeds the
// bound's budget.
double offline_optimal(const model::Instance& inst, const SmallInstanceBound& bound = {});

}  // namespace omrr::oracle
