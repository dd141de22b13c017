#include "omrr/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace omrr::lp {

namespace {

constexpr std::size_t kMaxExplicitVars = 30'000'000;

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

LpSolution LpSolution::zero(const model::Instance& inst, bool time_sensitive) {
    LpSolution sol;
    sol.num_edges = inst.num_edges();
    sol.horizon = inst.horizon();
    sol.time_sensitive = time_sensitive;
    sol.x.assign(sol.num_edges * sol.horizon, 0.0);
    sol.objective = 0.0;
    sol.status = solver::SolveStatus::optimal;
    sol.solver_info = "all-zero";
    return sol;
}

BenchmarkLp::BenchmarkLp(const model::Instance& inst, bool time_sensitive,
                         double tail_cutoff)
    : inst_(&inst),
      time_sensitive_(time_sensitive),
      cutoff_(tail_cutoff),
      horizon_(inst.horizon()) {
    if (time_sensitive_ && !inst.occupation().time_indexed())
        throw std::invalid_argument(
            "time-sensitive benchmark requires per-(edge, round) occupation entries");
    if (!time_sensitive_ && inst.occupation().time_indexed())
        throw std::invalid_argument(
            "instance has time-indexed occupation; build with time_sensitive=true");

    const std::size_t num_vars = inst.num_edges() * static_cast<std::size_t>(horizon_);
    if (num_vars > kMaxExplicitVars)
        throw std::invalid_argument(
            "instance too large for the explicit benchmark program (" +
            std::to_string(num_vars) + " variables)");

    type_rows_ = inst.num_types() * static_cast<std::size_t>(horizon_);
    obj_.resize(num_vars);
    lo_.assign(num_vars, 0.0);
    hi_.assign(num_vars, 1.0);
    for (EdgeId e = 0; e < inst.num_edges(); ++e)
        std::fill_n(obj_.begin() + var_index(e, 1), horizon_, inst.edge(e).weight);

    rhs_.resize(type_rows_ + inst.num_resources() * static_cast<std::size_t>(horizon_));
    for (TypeId v = 0; v < inst.num_types(); ++v)
        for (Round t = 1; t <= horizon_; ++t)
            rhs_[type_row(v, t)] = inst.arrivals().rate(v, t);
    std::fill(rhs_.begin() + type_rows_, rhs_.end(), 1.0);

    pool_tail_.resize(inst.occupation().pool().size());
    pool_tail_prefix_.resize(pool_tail_.size());
    for (std::size_t g = 0; g < pool_tail_.size(); ++g) {
        const auto& otd = inst.occupation().pool()[g];
        Round max_d = 0;
        for (Round d = 1; d <= horizon_; ++d)
            if (otd.tail(d) >= cutoff_) max_d = d;
        auto& tails = pool_tail_[g];
        tails.resize(max_d);
        auto& prefix = pool_tail_prefix_[g];
        prefix.resize(max_d + 1, 0.0);
        for (Round d = 1; d <= max_d; ++d) {
            tails[d - 1] = otd.tail(d);
            prefix[d] = prefix[d - 1] + tails[d - 1];
        }
    }
}

void BenchmarkLp::apply(const double* x, double* out) const {
    const auto& inst = *inst_;
    const std::size_t T = horizon_;
    std::fill(out, out + num_rows(), 0.0);

    // Type rows: coefficient 1 on every incident (edge, round) variable.
    for (EdgeId e = 0; e < inst.num_edges(); ++e) {
        double* dst = out + type_row(inst.edge(e).type, 1);
        const double* src = x + var_index(e, 1);
        for (std::size_t r = 0; r < T; ++r) dst[r] += src[r];
    }

    // Resource rows: current-round mass plus tail-weighted history, grouped
    // by occupation pool entry so the history term is one convolution per
    // (resource, distinct distribution).
    std::vector<double> group_mass;
    std::vector<std::uint32_t> groups;
    for (ResourceId u = 0; u < inst.num_resources(); ++u) {
        groups.clear();
        auto local = [&](std::uint32_t g) -> std::size_t {
            for (std::size_t i = 0; i < groups.size(); ++i)
                if (groups[i] == g) return i;
            groups.push_back(g);
            return groups.size() - 1;
        };
        const auto edges = inst.edges_of_resource(u);
        // group_mass[i * T + r] = sum of x over edges of group i at round r.
        group_mass.assign(T, 0.0);
        for (EdgeId e : edges) {
            const double* src = x + var_index(e, 1);
            if (!inst.occupation().time_indexed()) {
                const std::size_t i = local(group_at(e, 0));
                if ((i + 1) * T > group_mass.size()) group_mass.resize((i + 1) * T, 0.0);
                double* dst = group_mass.data() + i * T;
                for (std::size_t r = 0; r < T; ++r) dst[r] += src[r];
            } else {
                for (std::size_t r = 0; r < T; ++r) {
                    const std::size_t i = local(group_at(e, static_cast<Round>(r)));
                    if ((i + 1) * T > group_mass.size())
                        group_mass.resize((i + 1) * T, 0.0);
                    group_mass[i * T + r] += src[r];
                }
            }
        }
        double* dst = out + resource_row(u, 1);
        for (std::size_t i = 0; i < groups.size(); ++i) {
            const double* z = group_mass.data() + i * T;
            const auto& tails = pool_tail_[groups[i]];
            for (std::size_t r = 0; r < T; ++r) {
                double acc = z[r];
                const std::size_t dmax = std::min(r, tails.size());
                for (std::size_t d = 1; d <= dmax; ++d) acc += z[r - d] * tails[d - 1];
                dst[r] += acc;
            }
        }
    }
}

void BenchmarkLp::apply_transpose(const double* y, double* out) const {
    const auto& inst = *inst_;
    const std::size_t T = horizon_;
    std::fill(out, out + num_vars(), 0.0);

    for (EdgeId e = 0; e < inst.num_edges(); ++e) {
        double* dst = out + var_index(e, 1);
        const double* src = y + type_row(inst.edge(e).type, 1);
        for (std::size_t r = 0; r < T; ++r) dst[r] += src[r];
    }

    std::vector<double> corr;
    std::vector<std::uint32_t> groups;
    for (ResourceId u = 0; u < inst.num_resources(); ++u) {
        const double* lam = y + resource_row(u, 1);
        const auto edges = inst.edges_of_resource(u);
        groups.clear();
        for (EdgeId e : edges) {
            if (!inst.occupation().time_indexed()) {
                const std::uint32_t g = group_at(e, 0);
                if (std::find(groups.begin(), groups.end(), g) == groups.end())
                    groups.push_back(g);
            } else {
                for (std::size_t r = 0; r < T; ++r) {
                    const std::uint32_t g = group_at(e, static_cast<Round>(r));
                    if (std::find(groups.begin(), groups.end(), g) == groups.end())
                        groups.push_back(g);
                }
            }
        }
        corr.assign(groups.size() * T, 0.0);
        for (std::size_t i = 0; i < groups.size(); ++i) {
            const auto& tails = pool_tail_[groups[i]];
            double* w = corr.data() + i * T;
            for (std::size_t r = 0; r < T; ++r) {
                double acc = lam[r];
                const std::size_t dmax = std::min(T - 1 - r, tails.size());
                for (std::size_t d = 1; d <= dmax; ++d) acc += lam[r + d] * tails[d - 1];
                w[r] = acc;
            }
        }
        auto local = [&](std::uint32_t g) {
            return static_cast<std::size_t>(
                std::find(groups.begin(), groups.end(), g) - groups.begin());
        };
        for (EdgeId e : edges) {
            double* dst = out + var_index(e, 1);
            if (!inst.occupation().time_indexed()) {
                const double* w = corr.data() + local(group_at(e, 0)) * T;
                for (std::size_t r = 0; r < T; ++r) dst[r] += w[r];
            } else {
                for (std::size_t r = 0; r < T; ++r)
                    dst[r] += corr[local(group_at(e, static_cast<Round>(r))) * T + r];
            }
        }
    }
}

void BenchmarkLp::row_abs_sums(double* out) const {
    const auto& inst = *inst_;
    const std::size_t T = horizon_;
    std::fill(out, out + num_rows(), 0.0);
    for (EdgeId e = 0; e < inst.num_edges(); ++e) {
        double* dst = out + type_row(inst.edge(e).type, 1);
        for (std::size_t r = 0; r < T; ++r) dst[r] += 1.0;
    }
    for (ResourceId u = 0; u < inst.num_resources(); ++u) {
        double* dst = out + resource_row(u, 1);
        for (EdgeId e : inst.edges_of_resource(u)) {
            for (std::size_t r = 0; r < T; ++r) {
                dst[r] += 1.0;
                // history contributions of x_{e,r'} land in rows r = r' + d
                const std::uint32_t g = group_at(e, static_cast<Round>(r));
                const auto& tails = pool_tail_[g];
                const std::size_t dmax = std::min(T - 1 - r, tails.size());
                for (std::size_t d = 1; d <= dmax; ++d) out[resource_row(u, 1) + r + d] += tails[d - 1];
            }
        }
    }
}

void BenchmarkLp::col_abs_sums(double* out) const {
    const auto& inst = *inst_;
    const std::size_t T = horizon_;
    for (EdgeId e = 0; e < inst.num_edges(); ++e) {
        double* dst = out + var_index(e, 1);
        for (std::size_t r = 0; r < T; ++r) {
            const std::uint32_t g = group_at(e, static_cast<Round>(r));
            const auto& prefix = pool_tail_prefix_[g];
            const std::size_t dmax = std::min(T - 1 - r, prefix.size() - 1);
            dst[r] = 2.0 + prefix[dmax];
        }
    }
}

std::size_t BenchmarkLp::explicit_nonzeros() const {
    const auto& inst = *inst_;
    const std::size_t T = horizon_;
    std::size_t nnz = 0;
    for (EdgeId e = 0; e < inst.num_edges(); ++e)
        for (std::size_t r = 0; r < T; ++r) {
            const auto& tails = pool_tail_[group_at(e, static_cast<Round>(r))];
            nnz += 2 + std::min(T - 1 - r, tails.size());
        }
    return nnz;
}

solver::LinearProgram BenchmarkLp::materialize() const {
    const auto& inst = *inst_;
    const std::size_t T = horizon_;
    solver::LinearProgram lp;
    for (std::size_t j = 0; j < num_vars(); ++j) lp.add_variable(0.0, 1.0, obj_[j]);

    std::vector<std::pair<std::size_t, double>> row;
    for (TypeId v = 0; v < inst.num_types(); ++v)
        for (Round t = 1; t <= horizon_; ++t) {
            row.clear();
            for (EdgeId e : inst.edges_of_type(v)) row.emplace_back(var_index(e, t), 1.0);
            lp.add_row(row, inst.arrivals().rate(v, t));
        }
    for (ResourceId u = 0; u < inst.num_resources(); ++u)
        for (std::size_t r = 0; r < T; ++r) {
            row.clear();
            for (EdgeId e : inst.edges_of_resource(u)) {
                row.emplace_back(var_index(e, static_cast<Round>(r + 1)), 1.0);
                for (std::size_t rp = 0; rp < r; ++rp) {
                    const double tail = pool_tail(group_at(e, static_cast<Round>(rp)),
                                                  static_cast<Round>(r - rp));
                    if (tail > 0.0)
                        row.emplace_back(var_index(e, static_cast<Round>(rp + 1)), tail);
                }
            }
            lp.add_row(row, 1.0);
        }
    return lp;
}

void BenchmarkLp::write_lp_text(std::ostream& os) const {
    const auto& inst = *inst_;
    const std::size_t T = horizon_;
    auto var_name = [&](EdgeId e, Round t) {
        return "x_e" + std::to_string(e) + "_t" + std::to_string(t);
    };
    os << "\\ benchmark program: " << inst.num_edges() << " edges, " << T
       << " rounds" << (time_sensitive_ ? ", time-sensitive occupation" : "") << "\n";
    os << "Maximize\n obj:";
    bool first = true;
    for (EdgeId e = 0; e < inst.num_edges(); ++e) {
        const double w = inst.edge(e).weight;
        for (Round t = 1; t <= horizon_; ++t) {
            os << (first ? " " : " + ") << fmt(w) << " " << var_name(e, t);
            first = false;
        }
        os << "\n     ";
    }
    os << "\nSubject To\n";
    for (TypeId v = 0; v < inst.num_types(); ++v)
        for (Round t = 1; t <= horizon_; ++t) {
            os << " type_v" << v << "_t" << t << ":";
            bool f = true;
            for (EdgeId e : inst.edges_of_type(v)) {
                os << (f ? " " : " + ") << var_name(e, t);
                f = false;
            }
            if (f) os << " 0 " << var_name(0, t);
            os << " <= " << fmt(inst.arrivals().rate(v, t)) << "\n";
        }
    for (ResourceId u = 0; u < inst.num_resources(); ++u)
        for (std::size_t r = 0; r < T; ++r) {
            os << " res_u" << u << "_t" << (r + 1) << ":";
            bool f = true;
            for (EdgeId e : inst.edges_of_resource(u)) {
                os << (f ? " " : " + ") << var_name(e, static_cast<Round>(r + 1));
                f = false;
                for (std::size_t rp = 0; rp < r; ++rp) {
                    const double tail = pool_tail(group_at(e, static_cast<Round>(rp)),
                                                  static_cast<Round>(r - rp));
                    if (tail > 0.0)
                        os << " + " << fmt(tail) << " "
                           << var_name(e, static_cast<Round>(rp + 1));
                }
            }
            os << " <= 1\n";
        }
    os << "Bounds\n";
    for (EdgeId e = 0; e < inst.num_edges(); ++e)
        for (Round t = 1; t <= horizon_; ++t)
            os << " 0 <= " << var_name(e, t) << " <= 1\n";
    os << "End\n";
}

BenchmarkLp build_benchmark_lp(const model::Instance& inst, bool time_sensitive,
                               double tail_cutoff) {
    return BenchmarkLp(inst, time_sensitive, tail_cutoff);
}

namespace {

// Clamp to bounds, rescale each type row onto its rhs, then apply one global
// scale so every resource row holds. All rows are homogeneous in x, so the
// scaled point is feasible exactly (up to round-off guarded by the margin).
void repair_to_feasible(const BenchmarkLp& lp, std::vector<double>& x) {
    const auto& inst = lp.instance();
    const Round T = inst.horizon();
    for (double& v : x) v = std::clamp(v, 0.0, 1.0);

    for (TypeId v = 0; v < inst.num_types(); ++v) {
        const auto edges = inst.edges_of_type(v);
        for (Round t = 1; t <= T; ++t) {
            const double p = inst.arrivals().rate(v, t);
            double act = 0.0;
            for (EdgeId e : edges) act += x[lp.var_index(e, t)];
            if (act <= p) continue;
            const double s = p > 0.0 ? p / act * (1.0 - 1e-14) : 0.0;
            for (EdgeId e : edges) x[lp.var_index(e, t)] *= s;
        }
    }

    std::vector<double> act(lp.num_rows());
    lp.apply(x.data(), act.data());
    double worst = 1.0;
    for (ResourceId u = 0; u < inst.num_resources(); ++u)
        for (Round t = 1; t <= T; ++t)
            worst = std::max(worst, act[lp.resource_row(u, t)]);
    if (worst > 1.0) {
        const double s = (1.0 / worst) * (1.0 - 1e-14);
        for (double& v : x) v *= s;
    }
}

}  // namespace

LpSolution solve_lp(const BenchmarkLp& lp, solver::SolverConfig cfg) {
    LpSolution sol;
    sol.num_edges = lp.instance().num_edges();
    sol.horizon = lp.instance().horizon();
    sol.time_sensitive = lp.time_sensitive();

    bool use_simplex;
    switch (cfg.backend) {
        case solver::SolverConfig::Backend::simplex: use_simplex = true; break;
        case solver::SolverConfig::Backend::first_order: use_simplex = false; break;
        default:
            use_simplex = lp.num_rows() <= cfg.simplex_max_rows &&
                          lp.explicit_nonzeros() <= cfg.simplex_max_nonzeros;
    }

    if (use_simplex) {
        const solver::LinearProgram explicit_lp = lp.materialize();
        solver::SolveResult res = solver::solve_simplex(explicit_lp, cfg);
        sol.status = res.status;
        sol.x = std::move(res.x);
        sol.objective = res.objective;
        const double ub = std::max(res.objective_upper_bound, res.objective);
        sol.certified_gap = (ub - res.objective) / std::max(1.0, std::abs(ub));
        sol.solver_info = "simplex iterations=" + std::to_string(res.iterations) +
                          (res.message.empty() ? "" : " " + res.message);
        if (sol.x.empty()) sol.x.assign(lp.num_vars(), 0.0);
        return sol;
    }

    solver::SolveResult res = solver::solve_first_order(lp, cfg);
    sol.x = std::move(res.x);
    if (sol.x.size() != lp.num_vars()) sol.x.assign(lp.num_vars(), 0.0);
    repair_to_feasible(lp, sol.x);
    sol.objective = 0.0;
    for (std::size_t j = 0; j < sol.x.size(); ++j)
        sol.objective += lp.objective()[j] * sol.x[j];
    const double ub = std::max(res.objective_upper_bound, sol.objective);
    sol.certified_gap = (ub - sol.objective) / std::max(1.0, std::abs(ub));
    sol.status = res.status;
    sol.solver_info = "first-order iterations=" + std::to_string(res.iterations) +
                      " certified_gap=" + std::to_string(sol.certified_gap) +
                      (res.message.empty() ? "" : " " + res.message);
    return sol;
}

std::string ResidualReport::to_string() const {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "type residual %.3e (%s), resource residual %.3e (%s), "
                  "bounds [%.3e, %.3e], objective %.12g",
                  max_type_residual,
                  worst_type_row.empty() ? "-" : worst_type_row.c_str(),
                  max_resource_residual,
                  worst_resource_row.empty() ? "-" : worst_resource_row.c_str(),
                  max_lower_violation, max_upper_violation, objective);
    return buf;
}

ResidualReport check_solution(const model::Instance& inst, const LpSolution& sol,
                              double tol) {
    (void)tol;
    if (sol.horizon != inst.horizon() || sol.num_edges != inst.num_edges())
        throw std::invalid_argument("solution shape does not match instance");
    if (sol.time_sensitive != inst.occupation().time_indexed())
        throw std::invalid_argument(
            "solution constraint form does not match instance occupation mode");

    const Round T = inst.horizon();
    ResidualReport rep;
    auto xval = [&](EdgeId e, Round t) { return sol.at(e, t); };

    for (EdgeId e = 0; e < inst.num_edges(); ++e)
        for (Round t = 1; t <= T; ++t) {
            const double v = xval(e, t);
            rep.max_lower_violation = std::max(rep.max_lower_violation, -v);
            rep.max_upper_violation = std::max(rep.max_upper_violation, v - 1.0);
            rep.objective += inst.edge(e).weight * v;
        }

    for (TypeId v = 0; v < inst.num_types(); ++v)
        for (Round t = 1; t <= T; ++t) {
            double act = 0.0;
            for (EdgeId e : inst.edges_of_type(v)) act += xval(e, t);
            const double resid = act - inst.arrivals().rate(v, t);
            if (resid > rep.max_type_residual) {
                rep.max_type_residual = resid;
                rep.worst_type_row =
                    "type " + inst.type_name(v) + " round " + std::to_string(t);
            }
        }

    std::vector<double> acc(T);
    for (ResourceId u = 0; u < inst.num_resources(); ++u) {
        std::fill(acc.begin(), acc.end(), 0.0);
        for (EdgeId e : inst.edges_of_resource(u))
            for (Round tp = 1; tp <= T; ++tp) {
                const double v = xval(e, tp);
                if (v == 0.0) continue;
                const auto& otd = inst.occupation().at(e, tp);
                acc[tp - 1] += v;
                for (Round t = tp + 1; t <= T; ++t) {
                    const double tail = otd.tail(t - tp);
                    if (tail == 0.0) break;  // tails are nonincreasing
                    acc[t - 1] += v * tail;
                }
            }
        for (Round t = 1; t <= T; ++t) {
            const double resid = acc[t - 1] - 1.0;
            if (resid > rep.max_resource_residual) {
                rep.max_resource_residual = resid;
                rep.worst_resource_row =
                    "resource " + inst.resource_name(u) + " round " + std::to_string(t);
            }
        }
    }
    return rep;
}

}  // namespace omrr::lp
