#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "omrr/model.hpp"
#include "omrr/solver.hpp"

namespace omrr::lp {

using model::EdgeId;
using model::ResourceId;
using model::Round;
using model::TypeId;

// Fractional benchmark allocation x_{e,t}, stored edge-major.
struct LpSolution {
    std::size_t num_edges = 0;
    Round horizon = 0;
    bool time_sensitive = false;
    std::vector<double> x;  // index e * horizon + (t - 1)
    double objective = 0.0;
    solver::SolveStatus status = solver::SolveStatus::numerical_trouble;
    // Certified relative gap to the true optimum (0 for basic solutions).
    double certified_gap = 0.0;
    std::string solver_info;

    double at(EdgeId e, Round t) const {
        return x[static_cast<std::size_t>(e) * horizon + (t - 1)];
    }
    static LpSolution zero(const model::Instance& inst, bool time_sensitive = false);
};

// The benchmark program over one variable per (edge, round):
//   maximize   sum_t sum_e w_e x_{e,t}
//   subject to sum_{e in d(v)} x_{e,t} <= p_{v,t}              per (type, round)
//              sum_{t'<t} sum_{e in d(u)} x_{e,t'} Pr[C > t-t']
//                + sum_{e in d(u)} x_{e,t} <= 1                per (resource, round)
//              0 <= x_{e,t} <= 1
// where C is the edge's occupation time, taken per match round when the
// instance is time-indexed. Tail coefficients below `tail_cutoff` are
// dropped to sparsify; rows with p_{v,t} = 0 are still emitted so row
// indexing stays regular.
//
// Row order: type rows (v * T + t - 1), then resource rows offset by |V|*T.
class BenchmarkLp final : public solver::LpOperator {
public:
    BenchmarkLp(const model::Instance& inst, bool time_sensitive,
                double tail_cutoff = 1e-12);

    const model::Instance& instance() const { return *inst_; }
    bool time_sensitive() const { return time_sensitive_; }
    double tail_cutoff() const { return cutoff_; }

    std::size_t var_index(EdgeId e, Round t) const {
        return static_cast<std::size_t>(e) * horizon_ + (t - 1);
    }
    std::size_t type_row(TypeId v, Round t) const {
        return static_cast<std::size_t>(v) * horizon_ + (t - 1);
    }
    std::size_t resource_row(ResourceId u, Round t) const {
        return type_rows_ + static_cast<std::size_t>(u) * horizon_ + (t - 1);
    }

    std::size_t num_vars() const override { return obj_.size(); }
    std::size_t num_rows() const override { return rhs_.size(); }
    const std::vector<double>& objective() const override { return obj_; }
    const std::vector<double>& rhs() const override { return rhs_; }
    const std::vector<double>& lower_bounds() const override { return lo_; }
    const std::vector<double>& upper_bounds() const override { return hi_; }
    void apply(const double* x, double* out) const override;
    void apply_transpose(const double* y, double* out) const override;
    void row_abs_sums(double* out) const override;
    void col_abs_sums(double* out) const override;

    // Exact nonzero count of the explicit form under the tail cutoff.
    std::size_t explicit_nonzeros() const;
    solver::LinearProgram materialize() const;
    // CPLEX-style LP text, streamed row by row.
    void write_lp_text(std::ostream& os) const;

private:
    // Truncated tail vector of pool entry g: tail_[g][d-1] = Pr[C_g > d].
    double pool_tail(std::uint32_t g, Round d) const {
        const auto& t = pool_tail_[g];
        return d >= 1 && d <= t.size() ? t[d - 1] : 0.0;
    }
    std::uint32_t group_at(EdgeId e, Round r0) const {
        return inst_->occupation().pool_index(e, static_cast<Round>(r0 + 1));
    }

    const model::Instance* inst_;
    bool time_sensitive_;
    double cutoff_;
    Round horizon_;
    std::size_t type_rows_;
    std::vector<double> obj_, rhs_, lo_, hi_;
    std::vector<std::vector<double>> pool_tail_;
    std::vector<std::vector<double>> pool_tail_prefix_;  // prefix sums of tails
};

// Requires the time_sensitive flag to match the instance's occupation mode:
// a time-sensitive program needs per-(edge, round) occupation entries, and a
// time-uniform program needs a single distribution per edge.
BenchmarkLp build_benchmark_lp(const model::Instance& inst, bool time_sensitive = false,
                               double tail_cutoff = 1e-12);

// Solves the benchmark. The simplex backend is used whenever the explicit
// form fits; otherwise the matrix-free first-order backend runs and its
// iterate is repaired to exact feasibility (clamp to bounds, per-type-row
// rescale, then one global scale for the resource rows), so returned
// solutions always satisfy the constraints to round-off.
LpSolution solve_lp(const BenchmarkLp& lp, solver::SolverConfig cfg = {});

struct ResidualReport {
    double max_type_residual = 0.0;
    double max_resource_residual = 0.0;
    double max_lower_violation = 0.0;
    double max_upper_violation = 0.0;
    std::string worst_type_row;
    std::string worst_resource_row;
    double objective = 0.0;

    static constexpr double kBoundTolerance = 1e-7;
    bool passes(double tol) const {
        return max_type_residual <= tol && max_resource_residual <= tol &&
               max_lower_violation <= kBoundTolerance &&
               max_upper_violation <= kBoundTolerance;
    }
    std::string to_string() const;
};

// Re-evaluates every constraint of the benchmark by direct summation over
// the instance data (no shared code with the solver path) and recomputes the
// objective. Tail terms are not cutoff here.
ResidualReport check_solution(const model::Instance& inst, const LpSolution& sol,
                              double tol = 1e-6);

}  // namespace omrr::lp
