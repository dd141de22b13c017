#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace omrr::model {

using ResourceId = std::uint32_t;
using TypeId = std::uint32_t;
using EdgeId = std::uint32_t;
// Rounds are 1-based in every public interface: t in {1, ..., T}.
using Round = std::uint32_t;

inline constexpr double kProbabilityTolerance = 1e-9;

struct Edge {
    ResourceId resource;
    TypeId type;
    double weight;
};

// First round at which a resource matched at `match_round` with realized
// occupation `occupation` is available again. Occupations 0 and 1 behave the
// same (free next round): with a single arrival per round a within-round
// return is unobservable.
constexpr Round next_available_round(Round match_round, std::uint32_t occupation) {
    return match_round + std::max<std::uint32_t>(occupation, 1u);
}

// A resource matched at `match_round` with occupation c is unavailable at
// round t > match_round exactly when t - match_round < c, mirroring the
// benchmark-LP tail coefficient Pr[C > t - t'].
constexpr bool unavailable_at(Round t, Round match_round, std::uint32_t occupation) {
    return t > match_round && (t - match_round) < occupation;
}

// Integral occupation-time distribution on {0, ..., support_max}.
class OccupationDistribution {
public:
    OccupationDistribution() : pmf_(1, 1.0), tail_(2, 0.0) { tail_[0] = 0.0; }
    explicit OccupationDistribution(std::vector<double> pmf);

    static OccupationDistribution point_mass(std::uint32_t duration);

    double pmf(std::uint32_t d) const {
        return d < pmf_.size() ? pmf_[d] : 0.0;
    }
    // Pr[C > d]; monotone nonincreasing, zero for d >= support_max.
    double tail(std::uint32_t d) const {
        return d < tail_.size() ? tail_[d] : 0.0;
    }
    double mass() const { return mass_; }
    std::uint32_t support_max() const {
        return static_cast<std::uint32_t>(pmf_.size()) - 1;
    }
    double mean() const;

    // Inverse-CDF draw from one uniform in [0,1).
    std::uint32_t sample(double u01) const;

    // Rescaled copy with mass exactly renormalized to 1. Never applied
    // implicitly; inputs are taken as given unless the caller asks.
    OccupationDistribution normalized() const;

    const std::vector<double>& probabilities() const { return pmf_; }

private:
    std::vector<double> pmf_;   // index = duration d
    std::vector<double> tail_;  // tail_[d] = sum_{d' > d} pmf_[d']
    double mass_ = 1.0;
};

// Per-round arrival rates {p_{v,t}}. Two representations share one interface:
// per-round rate vectors (rounds may share storage, as under stationary
// arrivals) and a uniform rate across all (type, round) pairs, which keeps
// instances with very many types compact.
class ArrivalProcess {
public:
    enum class Mode { dense, stationary, uniform };

    ArrivalProcess() = default;

    // rates[t-1][v] = p_{v,t}; every round vector must have num_types entries.
    static ArrivalProcess dense(std::vector<std::vector<double>> per_round_rates);
    // One shared rate vector for all rounds (identical distributions mode).
    static ArrivalProcess stationary(std::vector<double> rates, Round horizon);
    // p_{v,t} = rate for every type and round.
    static ArrivalProcess uniform(TypeId num_types, Round horizon, double rate);

    Mode mode() const { return mode_; }

    Round horizon() const { return horizon_; }
    TypeId num_types() const { return num_types_; }

    double rate(TypeId v, Round t) const;
    // Total arrival mass of round t; 1 - mass is the no-arrival probability.
    double round_mass(Round t) const;

    // One uniform draw against the cumulative rates in fixed type order;
    // nullopt = no arrival.
    std::optional<TypeId> sample(Round t, double u01) const;

    bool is_uniform() const { return uniform_rate_.has_value(); }
    double uniform_rate() const { return *uniform_rate_; }

private:
    struct RoundRates {
        std::vector<double> rate;
        std::vector<double> cum;  // inclusive prefix sums
        double total = 0.0;
    };
    static std::shared_ptr<const RoundRates> make_round(std::vector<double> rates);

    const RoundRates& round(Round t) const { return *per_round_[t - 1]; }

    Round horizon_ = 0;
    TypeId num_types_ = 0;
    Mode mode_ = Mode::dense;
    std::vector<std::shared_ptr<const RoundRates>> per_round_;  // empty if uniform
    std::optional<double> uniform_rate_;
};

// Occupation-time distributions per edge, backed by a shared pool so that
// instances where many edges follow one distribution stay small. In
// time-indexed mode the distribution may additionally depend on the round of
// the match.
class OccupationMap {
public:
    OccupationMap() = default;

    static OccupationMap shared(OccupationDistribution otd, std::size_t num_edges);
    static OccupationMap per_edge(std::vector<OccupationDistribution> pool,
                                  std::vector<std::uint32_t> edge_otd);
    static OccupationMap time_indexed(std::vector<OccupationDistribution> pool,
                                      std::vector<std::uint32_t> edge_round_otd,
                                      Round horizon);

    bool time_indexed() const { return time_indexed_; }
    Round horizon() const { return horizon_; }
    std::size_t num_edges() const {
        return time_indexed_ ? (horizon_ ? edge_round_otd_.size() / horizon_ : 0)
                             : edge_otd_.size();
    }

    std::uint32_t pool_index(EdgeId e, Round t) const {
        return time_indexed_ ? edge_round_otd_[static_cast<std::size_t>(e) * horizon_ + (t - 1)]
                             : edge_otd_[e];
    }
    const OccupationDistribution& at(EdgeId e, Round t) const {
        return pool_[pool_index(e, t)];
    }

    const std::vector<OccupationDistribution>& pool() const { return pool_; }
    const std::vector<std::uint32_t>& edge_otd() const { return edge_otd_; }
    const std::vector<std::uint32_t>& edge_round_otd() const { return edge_round_otd_; }

private:
    std::vector<OccupationDistribution> pool_;
    std::vector<std::uint32_t> edge_otd_;        // size |E| unless time-indexed
    std::vector<std::uint32_t> edge_round_otd_;  // size |E|*T if time-indexed
    bool time_indexed_ = false;
    Round horizon_ = 0;
};

// Plain aggregate mirroring the on-disk instance document; validated before an
// Instance is built from it.
struct InstanceSpec {
    std::vector<std::string> resources;
    std::vector<std::string> request_types;
    std::vector<Edge> edges;
    Round horizon = 0;
    ArrivalProcess arrivals;
    OccupationMap occupation;
};

struct Violation {
    std::string field;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

// Checks every structural and value invariant of an instance description:
// edge endpoints in range, finite nonnegative weights, per-round arrival mass
// at most 1, occupation pmfs summing to 1 with support within the horizon,
// and full occupation coverage of the edge set. Violations are data, not
// failures.
ValidationReport validate_instance(const InstanceSpec& spec);

// Immutable problem instance. Construction requires a clean validation
// report; afterwards the object is safe to share across concurrent readers.
class Instance {
public:
    static Instance build(InstanceSpec spec);

    std::size_t num_resources() const { return spec_.resources.size(); }
    std::size_t num_types() const { return spec_.request_types.size(); }
    std::size_t num_edges() const { return spec_.edges.size(); }
    Round horizon() const { return spec_.horizon; }

    const Edge& edge(EdgeId e) const { return spec_.edges[e]; }
    const std::vector<Edge>& edges() const { return spec_.edges; }
    const std::string& resource_name(ResourceId u) const { return spec_.resources[u]; }
    const std::string& type_name(TypeId v) const { return spec_.request_types[v]; }

    std::span<const EdgeId> edges_of_type(TypeId v) const {
        return {by_type_.data() + type_offset_[v],
                type_offset_[v + 1] - type_offset_[v]};
    }
    std::span<const EdgeId> edges_of_resource(ResourceId u) const {
        return {by_resource_.data() + resource_offset_[u],
                resource_offset_[u + 1] - resource_offset_[u]};
    }

    const ArrivalProcess& arrivals() const { return spec_.arrivals; }
    const OccupationMap& occupation() const { return spec_.occupation; }

    const InstanceSpec& spec() const { return spec_; }

private:
    explicit Instance(InstanceSpec spec);

    InstanceSpec spec_;
    std::vector<EdgeId> by_type_, by_resource_;
    std::vector<std::size_t> type_offset_, resource_offset_;
};

}  // namespace omrr::model
