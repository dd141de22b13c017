#include "omrr/model.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace omrr::model {

namespace {

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

}  // namespace

OccupationDistribution::OccupationDistribution(std::vector<double> pmf)
    : pmf_(std::move(pmf)) {
    if (pmf_.empty()) pmf_.assign(1, 1.0);
    tail_.assign(pmf_.size() + 1, 0.0);
    double suffix = 0.0;
    for (std::size_t d = pmf_.size(); d-- > 0;) {
        tail_[d] = suffix;
        suffix += pmf_[d];
    }
    mass_ = suffix;
}

OccupationDistribution OccupationDistribution::point_mass(std::uint32_t duration) {
    std::vector<double> pmf(duration + 1, 0.0);
    pmf[duration] = 1.0;
    return OccupationDistribution(std::move(pmf));
}

double OccupationDistribution::mean() const {
    double m = 0.0;
    for (std::size_t d = 1; d < pmf_.size(); ++d) m += static_cast<double>(d) * pmf_[d];
    return m;
}

std::uint32_t OccupationDistribution::sample(double u01) const {
    double acc = 0.0;
    for (std::size_t d = 0; d < pmf_.size(); ++d) {
        acc += pmf_[d];
        if (u01 < acc) return static_cast<std::uint32_t>(d);
    }
    return support_max();
}

OccupationDistribution OccupationDistribution::normalized() const {
    if (mass_ <= 0.0)
        throw std::invalid_argument("occupation pmf has no mass to normalize");
    std::vector<double> pmf = pmf_;
    for (double& p : pmf) p /= mass_;
    return OccupationDistribution(std::move(pmf));
}

std::shared_ptr<const ArrivalProcess::RoundRates> ArrivalProcess::make_round(
    std::vector<double> rates) {
    auto rr = std::make_shared<RoundRates>();
    rr->rate = std::move(rates);
    rr->cum.resize(rr->rate.size());
    double acc = 0.0;
    for (std::size_t v = 0; v < rr->rate.size(); ++v) {
        acc += rr->rate[v];
        rr->cum[v] = acc;
    }
    rr->total = acc;
    return rr;
}

ArrivalProcess ArrivalProcess::dense(std::vector<std::vector<double>> per_round_rates) {
    ArrivalProcess ap;
    ap.mode_ = Mode::dense;
    ap.horizon_ = static_cast<Round>(per_round_rates.size());
    ap.num_types_ = per_round_rates.empty()
                        ? 0
                        : static_cast<TypeId>(per_round_rates.front().size());
    for (auto& r : per_round_rates) {
        if (r.size() != ap.num_types_)
            throw std::invalid_argument("arrival rate rows must have equal length");
        ap.per_round_.push_back(make_round(std::move(r)));
    }
    return ap;
}

ArrivalProcess ArrivalProcess::stationary(std::vector<double> rates, Round horizon) {
    ArrivalProcess ap;
    ap.mode_ = Mode::stationary;
    ap.horizon_ = horizon;
    ap.num_types_ = static_cast<TypeId>(rates.size());
    auto shared = make_round(std::move(rates));
    ap.per_round_.assign(horizon, shared);
    return ap;
}

ArrivalProcess ArrivalProcess::uniform(TypeId num_types, Round horizon, double rate) {
    ArrivalProcess ap;
    ap.mode_ = Mode::uniform;
    ap.horizon_ = horizon;
    ap.num_types_ = num_types;
    ap.uniform_rate_ = rate;
    return ap;
}

double ArrivalProcess::rate(TypeId v, Round t) const {
    if (uniform_rate_) return *uniform_rate_;
    return round(t).rate[v];
}

double ArrivalProcess::round_mass(Round t) const {
    if (uniform_rate_) return *uniform_rate_ * static_cast<double>(num_types_);
    return round(t).total;
}

std::optional<TypeId> ArrivalProcess::sample(Round t, double u01) const {
    if (uniform_rate_) {
        const double total = *uniform_rate_ * static_cast<double>(num_types_);
        if (u01 >= total || num_types_ == 0) return std::nullopt;
        auto v = static_cast<TypeId>(u01 / *uniform_rate_);
        return std::min<TypeId>(v, num_types_ - 1);
    }
    const RoundRates& rr = round(t);
    if (u01 >= rr.total) return std::nullopt;
    auto it = std::upper_bound(rr.cum.begin(), rr.cum.end(), u01);
    if (it == rr.cum.end()) return std::nullopt;
    return static_cast<TypeId>(it - rr.cum.begin());
}

OccupationMap OccupationMap::shared(OccupationDistribution otd, std::size_t num_edges) {
    OccupationMap m;
    m.pool_.push_back(std::move(otd));
    m.edge_otd_.assign(num_edges, 0u);
    return m;
}

OccupationMap OccupationMap::per_edge(std::vector<OccupationDistribution> pool,
                                      std::vector<std::uint32_t> edge_otd) {
    OccupationMap m;
    m.pool_ = std::move(pool);
    m.edge_otd_ = std::move(edge_otd);
    return m;
}

OccupationMap OccupationMap::time_indexed(std::vector<OccupationDistribution> pool,
                                          std::vector<std::uint32_t> edge_round_otd,
                                          Round horizon) {
    OccupationMap m;
    m.pool_ = std::move(pool);
    m.edge_round_otd_ = std::move(edge_round_otd);
    m.time_indexed_ = true;
    m.horizon_ = horizon;
    return m;
}

std::string ValidationReport::to_string() const {
    std::string out;
    for (const auto& v : violations) {
        out += v.field;
        out += ": ";
        out += v.message;
        out += '\n';
    }
    return out;
}

ValidationReport validate_instance(const InstanceSpec& spec) {
    ValidationReport report;
    auto add = [&](std::string field, std::string message) {
        report.violations.push_back({std::move(field), std::move(message)});
    };

    if (spec.horizon == 0) add("horizon", "must be a positive number of rounds");

    const auto num_resources = spec.resources.size();
    const auto num_types = spec.request_types.size();

    for (std::size_t i = 0; i < spec.edges.size(); ++i) {
        const Edge& e = spec.edges[i];
        const std::string field = "edges[" + std::to_string(i) + "]";
        if (e.resource >= num_resources)
            add(field + ".resource", "index " + std::to_string(e.resource) +
                                         " not in resources (size " +
                                         std::to_string(num_resources) + ")");
        if (e.type >= num_types)
            add(field + ".type", "index " + std::to_string(e.type) +
                                     " not in request_types (size " +
                                     std::to_string(num_types) + ")");
        if (!std::isfinite(e.weight) || e.weight < 0.0)
            add(field + ".weight",
                "must be finite and >= 0, got " + format_double(e.weight));
    }

    // Arrival process: dimensions and per-round mass.
    if (spec.arrivals.horizon() != spec.horizon)
        add("arrivals", "covers " + std::to_string(spec.arrivals.horizon()) +
                            " rounds, horizon is " + std::to_string(spec.horizon));
    if (spec.arrivals.num_types() != num_types)
        add("arrivals", "covers " + std::to_string(spec.arrivals.num_types()) +
                            " types, instance has " + std::to_string(num_types));
    const Round checkable_rounds =
        std::min<Round>(spec.horizon, spec.arrivals.horizon());
    for (Round t = 1; t <= checkable_rounds; ++t) {
        const double mass = spec.arrivals.round_mass(t);
        if (mass > 1.0 + kProbabilityTolerance)
            add("arrivals.rates[t=" + std::to_string(t) + "]",
                "total arrival mass " + format_double(mass) + " exceeds 1");
        if (spec.arrivals.num_types() == num_types) {
            for (TypeId v = 0; v < num_types; ++v) {
                const double p = spec.arrivals.rate(v, t);
                if (!(p >= 0.0) || p > 1.0 + kProbabilityTolerance) {
                    add("arrivals.rates[v=" + std::to_string(v) +
                            ",t=" + std::to_string(t) + "]",
                        "rate " + format_double(p) + " outside [0,1]");
                }
                if (spec.arrivals.is_uniform()) break;  // one check suffices
            }
        }
        if (spec.arrivals.is_uniform()) break;  // all rounds identical
    }

    // Occupation map: pool validity and edge coverage.
    for (std::size_t i = 0; i < spec.occupation.pool().size(); ++i) {
        const auto& otd = spec.occupation.pool()[i];
        const std::string field = "occupation.pool[" + std::to_string(i) + "]";
        bool nonneg = true;
        for (double p : otd.probabilities())
            if (!(p >= 0.0)) nonneg = false;
        if (!nonneg) add(field, "pmf has negative entries");
        if (std::abs(otd.mass() - 1.0) > kProbabilityTolerance)
            add(field, "pmf mass " + format_double(otd.mass()) + " differs from 1");
        if (spec.horizon > 0 && otd.support_max() > spec.horizon)
            add(field, "support extends to " + std::to_string(otd.support_max()) +
                           " beyond horizon " + std::to_string(spec.horizon));
    }
    const std::size_t pool_size = spec.occupation.pool().size();
    if (spec.occupation.time_indexed()) {
        if (spec.occupation.horizon() != spec.horizon)
            add("occupation", "time-indexed over " +
                                  std::to_string(spec.occupation.horizon()) +
                                  " rounds, horizon is " + std::to_string(spec.horizon));
        if (spec.occupation.edge_round_otd().size() !=
            spec.edges.size() * static_cast<std::size_t>(spec.occupation.horizon()))
            add("occupation", "time-indexed map does not cover every (edge, round)");
        for (std::size_t i = 0; i < spec.occupation.edge_round_otd().size(); ++i)
            if (spec.occupation.edge_round_otd()[i] >= pool_size) {
                add("occupation.edge_round_otd[" + std::to_string(i) + "]",
                    "pool index out of range");
                break;
            }
    } else {
        if (spec.occupation.edge_otd().size() != spec.edges.size())
            add("occupation",
                "covers " + std::to_string(spec.occupation.edge_otd().size()) +
                    " edges, instance has " + std::to_string(spec.edges.size()));
        for (std::size_t i = 0; i < spec.occupation.edge_otd().size(); ++i)
            if (spec.occupation.edge_otd()[i] >= pool_size) {
                add("occupation.edge_otd[" + std::to_string(i) + "]",
                    "pool index out of range");
                break;
            }
    }

    return report;
}

Instance Instance::build(InstanceSpec spec) {
    ValidationReport report = validate_instance(spec);
    if (!report.ok())
        throw std::invalid_argument("invalid instance:\n" + report.to_string());
    return Instance(std::move(spec));
}

Instance::Instance(InstanceSpec spec) : spec_(std::move(spec)) {
    // CSR adjacency by type and by resource, edge ids in ascending order.
    const auto& edges = spec_.edges;
    type_offset_.assign(spec_.request_types.size() + 1, 0);
    resource_offset_.assign(spec_.resources.size() + 1, 0);
    for (const Edge& e : edges) {
        ++type_offset_[e.type + 1];
        ++resource_offset_[e.resource + 1];
    }
    for (std::size_t i = 1; i < type_offset_.size(); ++i)
        type_offset_[i] += type_offset_[i - 1];
    for (std::size_t i = 1; i < resource_offset_.size(); ++i)
        resource_offset_[i] += resource_offset_[i - 1];
    by_type_.resize(edges.size());
    by_resource_.resize(edges.size());
    std::vector<std::size_t> tpos(type_offset_.begin(), type_offset_.end() - 1);
    std::vector<std::size_t> rpos(resource_offset_.begin(), resource_offset_.end() - 1);
    for (EdgeId e = 0; e < edges.size(); ++e) {
        by_type_[tpos[edges[e].type]++] = e;
        by_resource_[rpos[edges[e].resource]++] = e;
    }
}

}  // namespace omrr::model
