#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "omrr/solver.hpp"

namespace omrr::solver {

namespace {

// Restarted, diagonally preconditioned primal-dual hybrid gradient for
//   maximize c'x  s.t.  A x <= b,  lo <= x <= hi.
// Internally minimizes -c'x with dual multipliers lambda >= 0. The diagonal
// step sizes tau_j = eta/colsum_j, sigma_i = eta/rowsum_i keep the scaled
// operator norm below one, so the iteration converges without a norm
// estimate. Averages are tracked and the iterate is restarted from whichever
// of (current, average) scores better on a KKT measure.
class FirstOrderSolver {
public:
    FirstOrderSolver(const LpOperator& op, const SolverConfig& cfg)
        : op_(op), cfg_(cfg), n_(op.num_vars()), m_(op.num_rows()) {}

    SolveResult run() {
        const auto& c = op_.objective();
        const auto& b = op_.rhs();
        const auto& lo = op_.lower_bounds();
        const auto& hi = op_.upper_bounds();

        std::vector<double> tau(n_), sigma(m_);
        op_.col_abs_sums(tau.data());
        op_.row_abs_sums(sigma.data());
        const double eta = 0.9;
        for (double& t : tau) t = eta / std::max(t, 1e-12);
        for (double& s : sigma) s = eta / std::max(s, 1e-12);

        std::vector<double> x(n_), lam(m_, 0.0);
        for (std::size_t j = 0; j < n_; ++j) x[j] = lo[j];
        std::vector<double> x_new(n_), xt(n_), atl(n_), ax(m_);
        std::vector<double> x_avg(n_, 0.0), lam_avg(m_, 0.0);
        std::size_t avg_count = 0;

        SolveResult best;
        best.status = SolveStatus::numerical_trouble;
        double best_score = std::numeric_limits<double>::infinity();

        double b_scale = 1.0;
        for (std::size_t i = 0; i < m_; ++i) b_scale = std::max(b_scale, std::abs(b[i]));

        const std::size_t check_every = 100;
        const std::size_t restart_cap = 2000;
        std::size_t since_restart = 0;

        for (std::size_t iter = 1; iter <= cfg_.max_iterations; ++iter) {
            op_.apply_transpose(lam.data(), atl.data());
            for (std::size_t j = 0; j < n_; ++j) {
                const double v = x[j] + tau[j] * (c[j] - atl[j]);
                x_new[j] = std::clamp(v, lo[j], hi[j]);
                xt[j] = 2.0 * x_new[j] - x[j];
            }
            op_.apply(xt.data(), ax.data());
            for (std::size_t i = 0; i < m_; ++i)
                lam[i] = std::max(0.0, lam[i] + sigma[i] * (ax[i] - b[i]));
            x.swap(x_new);

            for (std::size_t j = 0; j < n_; ++j) x_avg[j] += x[j];
            for (std::size_t i = 0; i < m_; ++i) lam_avg[i] += lam[i];
            ++avg_count;
            ++since_restart;

            if (iter % check_every == 0 || iter == cfg_.max_iterations) {
                double cur_score, cur_gap, cur_feas;
                evaluate(x, lam, b_scale, cur_score, cur_gap, cur_feas);

                std::vector<double> xa(n_), la(m_);
                for (std::size_t j = 0; j < n_; ++j) xa[j] = x_avg[j] / avg_count;
                for (std::size_t i = 0; i < m_; ++i) la[i] = lam_avg[i] / avg_count;
                double avg_score, avg_gap, avg_feas;
                evaluate(xa, la, b_scale, avg_score, avg_gap, avg_feas);

                const bool avg_better = avg_score < cur_score;
                const double score = avg_better ? avg_score : cur_score;
                const double gap = avg_better ? avg_gap : cur_gap;
                const double feas = avg_better ? avg_feas : cur_feas;
                const auto& cx = avg_better ? xa : x;
                const auto& cl = avg_better ? la : lam;

                if (score < best_score) {
                    best_score = score;
                    best.x = cx;
                    best.dual = cl;
                    best.iterations = iter;
                }
                if (feas <= cfg_.feasibility_tolerance && gap <= 0.8 * cfg_.tolerance) {
                    best.x = cx;
                    best.dual = cl;
                    best.iterations = iter;
                    return finish(best, SolveStatus::optimal);
                }
                if (avg_better || since_restart >= restart_cap) {
                    if (avg_better) { x = xa; lam = la; }
                    std::fill(x_avg.begin(), x_avg.end(), 0.0);
                    std::fill(lam_avg.begin(), lam_avg.end(), 0.0);
                    avg_count = 0;
                    since_restart = 0;
                }
            }
        }
        best.message = "first-order iteration limit reached";
        return finish(best, SolveStatus::numerical_trouble);
    }

private:
    // score = relative primal infeasibility + relative duality gap.
    void evaluate(const std::vector<double>& x, const std::vector<double>& lam,
                  double b_scale, double& score, double& gap, double& feas) const {
        const auto& c = op_.objective();
        const auto& b = op_.rhs();
        const auto& lo = op_.lower_bounds();
        const auto& hi = op_.upper_bounds();
        std::vector<double> ax(m_), atl(n_);
        op_.apply(x.data(), ax.data());
        op_.apply_transpose(lam.data(), atl.data());
        double viol = 0.0;
        for (std::size_t i = 0; i < m_; ++i) viol = std::max(viol, ax[i] - b[i]);
        feas = std::max(viol, 0.0) / b_scale;
        double primal = 0.0;
        double dual = 0.0;
        for (std::size_t i = 0; i < m_; ++i) dual += lam[i] * b[i];
        for (std::size_t j = 0; j < n_; ++j) {
            primal += c[j] * x[j];
            const double g = c[j] - atl[j];
            dual += g > 0 ? g * hi[j] : g * lo[j];
        }
        gap = (dual - primal) / std::max({1.0, std::abs(dual), std::abs(primal)});
        score = feas + std::abs(gap);
    }

    SolveResult finish(SolveResult r, SolveStatus status) const {
        r.status = status;
        const auto& c = op_.objective();
        const auto& b = op_.rhs();
        const auto& lo = op_.lower_bounds();
        const auto& hi = op_.upper_bounds();
        r.objective = 0.0;
        for (std::size_t j = 0; j < n_; ++j) r.objective += c[j] * r.x[j];
        std::vector<double> atl(n_);
        op_.apply_transpose(r.dual.data(), atl.data());
        double bound = 0.0;
        for (std::size_t i = 0; i < m_; ++i) bound += r.dual[i] * b[i];
        for (std::size_t j = 0; j < n_; ++j) {
            const double g = c[j] - atl[j];
            bound += g > 0 ? g * hi[j] : g * lo[j];
        }
        r.objective_upper_bound = bound;
        return r;
    }

    const LpOperator& op_;
    const SolverConfig& cfg_;
    std::size_t n_, m_;
};

}  // namespace

SolveResult solve_first_order(const LpOperator& op, const SolverConfig& cfg) {
    FirstOrderSolver s(op, cfg);
    return s.run();
}

}  // namespace omrr::solver
