#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace omrr::solver {

enum class SolveStatus { optimal, infeasible, numerical_trouble };

const char* to_string(SolveStatus s);

// Operator view of   maximize c'x   s.t.  A x <= b,  lo <= x <= hi.
// Backends that never materialize A (the first-order method) work against
// this interface; explicit backends use LinearProgram below.
class LpOperator {
public:
    virtual ~LpOperator() = default;

    virtual std::size_t num_vars() const = 0;
    virtual std::size_t num_rows() const = 0;
    virtual const std::vector<double>& objective() const = 0;
    virtual const std::vector<double>& rhs() const = 0;
    virtual const std::vector<double>& lower_bounds() const = 0;
    virtual const std::vector<double>& upper_bounds() const = 0;

    // out = A x; out has num_rows entries and is overwritten.
    virtual void apply(const double* x, double* out) const = 0;
    // out = A' y; out has num_vars entries and is overwritten.
    virtual void apply_transpose(const double* y, double* out) const = 0;

    // Per-row and per-column sums of |a_ij|, for diagonal preconditioning.
    virtual void row_abs_sums(double* out) const = 0;
    virtual void col_abs_sums(double* out) const = 0;
};

// Explicit sparse LP with the narrow construction interface: add a variable
// with bounds and objective coefficient, add an inequality row, solve.
// Stored column-wise (the simplex backend prices by columns).
class LinearProgram : public LpOperator {
public:
    // Returns the new variable's index.
    std::size_t add_variable(double lo, double hi, double objective_coef);
    // coeffs are (variable index, coefficient); row reads a'x <= rhs.
    void add_row(std::vector<std::pair<std::size_t, double>> coeffs, double rhs);

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

    std::size_t num_nonzeros() const { return col_row_.size(); }

    // Column access (CSC), finalized lazily on first use after edits.
    void finalize() const;
    const std::vector<std::size_t>& col_start() const { finalize(); return col_start_; }
    const std::vector<std::uint32_t>& col_row() const { finalize(); return col_row_; }
    const std::vector<double>& col_val() const { finalize(); return col_val_; }

private:
    std::vector<double> obj_, rhs_, lo_, hi_;
    std::vector<std::vector<std::pair<std::size_t, double>>> rows_;

    mutable bool finalized_ = false;
    mutable std::vector<std::size_t> col_start_;
    mutable std::vector<std::uint32_t> col_row_;
    mutable std::vector<double> col_val_;
};

struct SolverConfig {
    enum class Backend { automatic, simplex, first_order };
    Backend backend = Backend::automatic;
    // Relative objective tolerance of the returned solution.
    double tolerance = 1e-6;
    // Relative feasibility target of the first-order backend (violations are
    // repaired exactly by the caller afterwards).
    double feasibility_tolerance = 1e-8;
    std::size_t max_iterations = 2'000'000;
    // automatic picks simplex when the explicit problem fits these limits.
    std::size_t simplex_max_rows = 2500;
    std::size_t simplex_max_nonzeros = 20'000'000;
};

struct SolveResult {
    SolveStatus status = SolveStatus::numerical_trouble;
    double objective = 0.0;
    std::vector<double> x;
    std::vector<double> dual;  // row multipliers (>= 0)
    // Certified upper bound on the optimum from the dual; equals objective
    // (up to round-off) for basic optimal solutions.
    double objective_upper_bound = 0.0;
    std::size_t iterations = 0;
    std::string message;
};

// Dense bounded-variable revised simplex. Requires the all-slack starting
// basis to be feasible (every rhs >= 0 when lower bounds are <= 0), which
// holds for every program this project builds.
SolveResult solve_simplex(const LinearProgram& lp, const SolverConfig& cfg = {});

// Matrix-free preconditioned primal-dual method with restarts; returns a
// solution with a certified dual bound. Suited to problems too large to
// materialize.
SolveResult solve_first_order(const LpOperator& op, const SolverConfig& cfg = {});

}  // namespace omrr::solver
