#include "omrr/policies.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace omrr::policies {

namespace {

constexpr double kMassTolerance = 1e-9;

std::string validity_message(ResourceId u, Round t, double beta, double gamma,
                             double mass) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "attenuation validity breach at resource %u round %u: "
                  "beta=%.9g < gamma=%.9g pushes total sampling mass to %.9g",
                  u, t, beta, gamma, mass);
    return buf;
}

}  // namespace

ValidityError::ValidityError(ResourceId u, Round t, double b, double g, double mass)
    : std::runtime_error(validity_message(u, t, b, g, mass)),
      resource(u),
      round(t),
      beta(b),
      gamma(g),
      total_mass(mass) {}

Decision adap_decide(const PolicyContext& ctx, double gamma) {
    if (ctx.safe_edges.empty()) return std::nullopt;
    const auto& inst = *ctx.inst;
    const double p = inst.arrivals().rate(ctx.arrival, ctx.round);
    if (p <= 0.0) return std::nullopt;

    double mass = 0.0;
    double min_beta = 1.0;
    ResourceId min_beta_u = 0;
    for (EdgeId e : ctx.safe_edges) {
        const double x = ctx.lp->at(e, ctx.round);
        if (x <= 0.0) continue;
        const ResourceId u = inst.edge(e).resource;
        const double beta = ctx.beta->at(u, ctx.round);
        mass += (x / p) * (gamma / beta);
        if (beta < min_beta) {
            min_beta = beta;
            min_beta_u = u;
        }
    }
    if (mass > 1.0 + kMassTolerance)
        throw ValidityError(min_beta_u, ctx.round, min_beta, gamma, mass);

    const double draw = ctx.rng_stream->uniform01();
    double cum = 0.0;
    for (EdgeId e : ctx.safe_edges) {
        const double x = ctx.lp->at(e, ctx.round);
        if (x <= 0.0) continue;
        const ResourceId u = inst.edge(e).resource;
        cum += (x / p) * (gamma / ctx.beta->at(u, ctx.round));
        if (draw < cum) return e;
    }
    return std::nullopt;
}

Decision alg_lp_decide(const PolicyContext& ctx) {
    const auto& inst = *ctx.inst;
    const double p = inst.arrivals().rate(ctx.arrival, ctx.round);
    if (p <= 0.0) return std::nullopt;
    const auto incident = inst.edges_of_type(ctx.arrival);
    const double draw = ctx.rng_stream->uniform01();
    double cum = 0.0;
    for (EdgeId e : incident) {
        cum += ctx.lp->at(e, ctx.round) / p;
        if (draw < cum) {
            // Sampled; matches only if the resource is free right now.
            const bool safe = std::binary_search(ctx.safe_edges.begin(),
                                                 ctx.safe_edges.end(), e);
            return safe ? Decision(e) : std::nullopt;
        }
    }
    return std::nullopt;
}

Decision alg_sc_lp_decide(const PolicyContext& ctx) {
    if (ctx.safe_edges.empty()) return std::nullopt;
    double total = 0.0;
    for (EdgeId e : ctx.safe_edges) total += std::max(ctx.lp->at(e, ctx.round), 0.0);
    if (total <= 0.0) return std::nullopt;
    const double draw = ctx.rng_stream->uniform01() * total;
    double cum = 0.0;
    for (EdgeId e : ctx.safe_edges) {
        cum += std::max(ctx.lp->at(e, ctx.round), 0.0);
        if (draw < cum) return e;
    }
    return ctx.safe_edges.back();  // guards against round-off at the top end
}

Decision greedy_decide(const PolicyContext& ctx) {
    if (ctx.safe_edges.empty()) return std::nullopt;
    const auto& inst = *ctx.inst;
    EdgeId best = ctx.safe_edges.front();
    double best_w = inst.edge(best).weight;
    ResourceId best_u = inst.edge(best).resource;
    for (std::size_t i = 1; i < ctx.safe_edges.size(); ++i) {
        const EdgeId e = ctx.safe_edges[i];
        const double w = inst.edge(e).weight;
        const ResourceId u = inst.edge(e).resource;
        if (w > best_w || (w == best_w && u < best_u)) {
            best = e;
            best_w = w;
            best_u = u;
        }
    }
    return best;
}

Decision ur_decide(const PolicyContext& ctx) {
    if (ctx.safe_edges.empty()) return std::nullopt;
    return ctx.safe_edges[ctx.rng_stream->below(ctx.safe_edges.size())];
}

Decision eps_greedy_decide(const PolicyContext& ctx, double eps, bool lp_branch_safe) {
    const bool greedy_branch = ctx.rng_stream->uniform01() < eps;
    if (greedy_branch) return greedy_decide(ctx);
    return lp_branch_safe ? alg_sc_lp_decide(ctx) : alg_lp_decide(ctx);
}

Decision nadap_decide(const PolicyContext& ctx, std::span<const double> alpha_by_edge) {
    const auto& inst = *ctx.inst;
    const auto incident = inst.edges_of_type(ctx.arrival);
    const double draw = ctx.rng_stream->uniform01();
    double cum = 0.0;
    for (EdgeId e : incident) {
        cum += alpha_by_edge[e];
        if (draw < cum) {
            const bool safe = std::binary_search(ctx.safe_edges.begin(),
                                                 ctx.safe_edges.end(), e);
            return safe ? Decision(e) : std::nullopt;
        }
    }
    return std::nullopt;
}

Policy make_adap(double gamma) {
    Policy p;
    p.name = "adap";
    p.needs_lp = true;
    p.needs_beta = true;
    p.decide = [gamma](const PolicyContext& ctx) { return adap_decide(ctx, gamma); };
    return p;
}

Policy make_alg_lp() {
    return {"alg-lp", true, false,
            [](const PolicyContext& ctx) { return alg_lp_decide(ctx); }};
}

Policy make_alg_sc_lp() {
    return {"alg-sc-lp", true, false,
            [](const PolicyContext& ctx) { return alg_sc_lp_decide(ctx); }};
}

Policy make_greedy() {
    return {"greedy", false, false,
            [](const PolicyContext& ctx) { return greedy_decide(ctx); }};
}

Policy make_ur() {
    return {"ur", false, false,
            [](const PolicyContext& ctx) { return ur_decide(ctx); }};
}

Policy make_eps_greedy(double eps, bool lp_branch_safe) {
    Policy p;
    p.name = "eps-greedy";
    p.needs_lp = true;
    p.decide = [eps, lp_branch_safe](const PolicyContext& ctx) {
        return eps_greedy_decide(ctx, eps, lp_branch_safe);
    };
    return p;
}

Policy make_nadap(const model::Instance& inst, std::vector<double> alpha_by_edge) {
    if (alpha_by_edge.size() != inst.num_edges())
        throw std::invalid_argument("nadap needs one allocation entry per edge");
    for (TypeId v = 0; v < inst.num_types(); ++v) {
        double total = 0.0;
        for (EdgeId e : inst.edges_of_type(v)) {
            if (alpha_by_edge[e] < 0.0)
                throw std::invalid_argument("nadap allocations must be nonnegative");
            total += alpha_by_edge[e];
        }
        if (total > 1.0 + model::kProbabilityTolerance)
            throw std::invalid_argument("nadap allocation mass for type " +
                                        inst.type_name(v) + " exceeds 1");
    }
    Policy p;
    p.name = "nadap";
    p.decide = [alpha = std::move(alpha_by_edge)](const PolicyContext& ctx) {
        return nadap_decide(ctx, alpha);
    };
    return p;
}

}  // namespace omrr::policies
