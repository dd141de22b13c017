#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "omrr/solver.hpp"

namespace omrr::solver {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kReducedCostTol = 1e-9;
constexpr double kPivotTol = 1e-10;
constexpr double kDegenerateStep = 1e-11;
constexpr int kRefactorInterval = 200;

enum class VarStatus : std::uint8_t { at_lower, at_upper, basic };

// Dense bounded-variable revised simplex over the column form of the
// program. Variables 0..n-1 are structural, n..n+m-1 the slacks of the
// inequality rows.
class Simplex {
public:
    Simplex(const LinearProgram& lp, const SolverConfig& cfg) : lp_(lp), cfg_(cfg) {
        n_ = lp.num_vars();
        m_ = lp.num_rows();
        lo_.assign(lp.lower_bounds().begin(), lp.lower_bounds().end());
        hi_.assign(lp.upper_bounds().begin(), lp.upper_bounds().end());
        obj_.assign(lp.objective().begin(), lp.objective().end());
        lo_.resize(n_ + m_, 0.0);
        hi_.resize(n_ + m_, kInf);
        obj_.resize(n_ + m_, 0.0);
    }

    SolveResult run() {
        SolveResult result;
        for (std::size_t j = 0; j < n_; ++j) {
            if (!std::isfinite(lo_[j])) {
                result.message = "variables must have finite lower bounds";
                return result;
            }
        }
        if (m_ == 0) return solve_unconstrained();

        status_.assign(n_ + m_, VarStatus::at_lower);
        basis_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            basis_[i] = n_ + i;
            status_[n_ + i] = VarStatus::basic;
        }
        binv_.assign(m_ * m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) binv_[i * m_ + i] = 1.0;
        recompute_basics();
        for (std::size_t i = 0; i < m_; ++i) {
            if (xb_[i] < lo_[basis_[i]] - 1e-9 || xb_[i] > hi_[basis_[i]] + 1e-9) {
                result.message =
                    "slack starting basis infeasible (negative rhs); not supported";
                return result;
            }
        }

        std::vector<double> y(m_), w(m_);
        std::size_t iter = 0;
        int since_refactor = 0;
        int degenerate_run = 0;
        bool bland = false;
        bool retried_after_refactor = false;

        while (iter < cfg_.max_iterations) {
            // Duals of the current basis: y = B^-T c_B.
            for (std::size_t i = 0; i < m_; ++i) {
                double acc = 0.0;
                for (std::size_t k = 0; k < m_; ++k)
                    acc += obj_[basis_[k]] * binv_[k * m_ + i];
                y[i] = acc;
            }

            // Pricing.
            std::size_t entering = kNone;
            int dir = 0;
            double best = kReducedCostTol;
            for (std::size_t j = 0; j < n_ + m_; ++j) {
                if (status_[j] == VarStatus::basic) continue;
                const double d = obj_[j] - dot_column(y, j);
                if (status_[j] == VarStatus::at_lower && d > kReducedCostTol) {
                    if (bland) { entering = j; dir = +1; break; }
                    if (d > best) { best = d; entering = j; dir = +1; }
                } else if (status_[j] == VarStatus::at_upper && d < -kReducedCostTol) {
                    if (bland) { entering = j; dir = -1; break; }
                    if (-d > best) { best = -d; entering = j; dir = -1; }
                }
            }

            if (entering == kNone) {
                // Guard against stale factors before declaring optimality.
                if (since_refactor > 0 && !retried_after_refactor) {
                    if (!refactor()) return factor_failure(iter);
                    since_refactor = 0;
                    retried_after_refactor = true;
                    continue;
                }
                return finish(y, SolveStatus::optimal, iter);
            }
            retried_after_refactor = false;

            // w = B^-1 A_entering.
            ftran(entering, w);

            // Ratio test; entering moves by theta in direction dir.
            double theta = hi_[entering] - lo_[entering];  // bound flip
            std::size_t leave_row = kNone;
            bool leave_at_upper = false;
            for (std::size_t i = 0; i < m_; ++i) {
                const double delta = -dir * w[i];
                if (delta < -kPivotTol) {
                    const double cand = (xb_[i] - lo_[basis_[i]]) / (-delta);
                    if (cand < theta - 1e-12 ||
                        (cand < theta + 1e-12 && better_leaver(i, leave_row, w, bland))) {
                        theta = cand;
                        leave_row = i;
                        leave_at_upper = false;
                    }
                } else if (delta > kPivotTol && std::isfinite(hi_[basis_[i]])) {
                    const double cand = (hi_[basis_[i]] - xb_[i]) / delta;
                    if (cand < theta - 1e-12 ||
                        (cand < theta + 1e-12 && better_leaver(i, leave_row, w, bland))) {
                        theta = cand;
                        leave_row = i;
                        leave_at_upper = true;
                    }
                }
            }
            if (!std::isfinite(theta)) {
                SolveResult r;
                r.status = SolveStatus::numerical_trouble;
                r.message = "unbounded direction encountered";
                return r;
            }
            theta = std::max(theta, 0.0);

            if (theta <= kDegenerateStep) {
                if (++degenerate_run > 40) bland = true;
            } else {
                degenerate_run = 0;
                bland = false;
            }

            if (leave_row == kNone) {
                // Bound flip of the entering variable.
                for (std::size_t i = 0; i < m_; ++i) xb_[i] += -dir * w[i] * theta;
                status_[entering] = dir > 0 ? VarStatus::at_upper : VarStatus::at_lower;
            } else {
                const double pivot = w[leave_row];
                if (std::abs(pivot) < kPivotTol) {
                    if (!refactor()) return factor_failure(iter);
                    since_refactor = 0;
                    continue;
                }
                for (std::size_t i = 0; i < m_; ++i)
                    if (i != leave_row) xb_[i] += -dir * w[i] * theta;
                const std::size_t leaving = basis_[leave_row];
                status_[leaving] = leave_at_upper ? VarStatus::at_upper : VarStatus::at_lower;
                status_[entering] = VarStatus::basic;
                basis_[leave_row] = entering;
                xb_[leave_row] =
                    dir > 0 ? lo_[entering] + theta : hi_[entering] - theta;

                // Elementary row update of B^-1.
                double* prow = &binv_[leave_row * m_];
                const double inv_pivot = 1.0 / pivot;
                for (std::size_t k = 0; k < m_; ++k) prow[k] *= inv_pivot;
                for (std::size_t i = 0; i < m_; ++i) {
                    if (i == leave_row) continue;
                    const double f = w[i];
                    if (f == 0.0) continue;
                    double* row = &binv_[i * m_];
                    for (std::size_t k = 0; k < m_; ++k) row[k] -= f * prow[k];
                }
                if (++since_refactor >= kRefactorInterval) {
                    if (!refactor()) return factor_failure(iter);
                    since_refactor = 0;
                }
            }
            ++iter;
        }

        SolveResult r;
        r.status = SolveStatus::numerical_trouble;
        r.message = "iteration limit reached";
        r.iterations = iter;
        return r;
    }

private:
    static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

    SolveResult solve_unconstrained() {
        SolveResult r;
        r.status = SolveStatus::optimal;
        r.x.resize(n_);
        for (std::size_t j = 0; j < n_; ++j) {
            r.x[j] = obj_[j] > 0 ? hi_[j] : lo_[j];
            if (!std::isfinite(r.x[j])) {
                r.status = SolveStatus::numerical_trouble;
                r.message = "unbounded variable";
                return r;
            }
            r.objective += obj_[j] * r.x[j];
        }
        r.objective_upper_bound = r.objective;
        return r;
    }

    // Prefers larger pivot magnitude, then smaller basic index, as leaver.
    bool better_leaver(std::size_t i, std::size_t current, const std::vector<double>& w,
                       bool bland) const {
        if (current == kNone) return true;
        if (bland) return basis_[i] < basis_[current];
        const double a = std::abs(w[i]), b = std::abs(w[current]);
        if (a != b) return a > b;
        return basis_[i] < basis_[current];
    }

    double dot_column(const std::vector<double>& y, std::size_t j) const {
        if (j >= n_) return y[j - n_];  // slack: unit column
        double acc = 0.0;
        const auto& cs = lp_.col_start();
        const auto& cr = lp_.col_row();
        const auto& cv = lp_.col_val();
        for (std::size_t k = cs[j]; k < cs[j + 1]; ++k) acc += cv[k] * y[cr[k]];
        return acc;
    }

    void ftran(std::size_t j, std::vector<double>& w) const {
        std::fill(w.begin(), w.end(), 0.0);
        if (j >= n_) {
            const std::size_t i = j - n_;
            for (std::size_t r = 0; r < m_; ++r) w[r] = binv_[r * m_ + i];
            return;
        }
        const auto& cs = lp_.col_start();
        const auto& cr = lp_.col_row();
        const auto& cv = lp_.col_val();
        for (std::size_t k = cs[j]; k < cs[j + 1]; ++k) {
            const double a = cv[k];
            const std::size_t row = cr[k];
            for (std::size_t r = 0; r < m_; ++r) w[r] += binv_[r * m_ + row] * a;
        }
    }

    void recompute_basics() {
        // rhs_eff = b - sum of nonbasic columns at their bound values.
        std::vector<double> rhs_eff(lp_.rhs().begin(), lp_.rhs().end());
        const auto& cs = lp_.col_start();
        const auto& cr = lp_.col_row();
        const auto& cv = lp_.col_val();
        for (std::size_t j = 0; j < n_ + m_; ++j) {
            if (status_[j] == VarStatus::basic) continue;
            const double xj = status_[j] == VarStatus::at_lower ? lo_[j] : hi_[j];
            if (xj == 0.0) continue;
            if (j >= n_) {
                rhs_eff[j - n_] -= xj;
            } else {
                for (std::size_t k = cs[j]; k < cs[j + 1]; ++k)
                    rhs_eff[cr[k]] -= cv[k] * xj;
            }
        }
        xb_.assign(m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            double acc = 0.0;
            for (std::size_t k = 0; k < m_; ++k) acc += binv_[i * m_ + k] * rhs_eff[k];
            xb_[i] = acc;
        }
    }

    static SolveResult factor_failure(std::size_t iter) {
        SolveResult r;
        r.status = SolveStatus::numerical_trouble;
        r.message = "basis factorization failed";
        r.iterations = iter;
        return r;
    }

    // Rebuilds B^-1 from the basis by Gauss-Jordan with partial pivoting;
    // false on a numerically singular basis.
    bool refactor() {
        std::vector<double> bmat(m_ * m_, 0.0);
        const auto& cs = lp_.col_start();
        const auto& cr = lp_.col_row();
        const auto& cv = lp_.col_val();
        for (std::size_t k = 0; k < m_; ++k) {
            const std::size_t j = basis_[k];
            if (j >= n_) {
                bmat[(j - n_) * m_ + k] = 1.0;
            } else {
                for (std::size_t p = cs[j]; p < cs[j + 1]; ++p)
                    bmat[cr[p] * m_ + k] = cv[p];
            }
        }
        std::vector<double> inv(m_ * m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) inv[i * m_ + i] = 1.0;
        for (std::size_t col = 0; col < m_; ++col) {
            std::size_t piv = col;
            double best = std::abs(bmat[col * m_ + col]);
            for (std::size_t r = col + 1; r < m_; ++r) {
                const double a = std::abs(bmat[r * m_ + col]);
                if (a > best) { best = a; piv = r; }
            }
            if (best < 1e-13) return false;
            if (piv != col) {
                for (std::size_t k = 0; k < m_; ++k) {
                    std::swap(bmat[piv * m_ + k], bmat[col * m_ + k]);
                    std::swap(inv[piv * m_ + k], inv[col * m_ + k]);
                }
            }
            const double pivot = bmat[col * m_ + col];
            const double ip = 1.0 / pivot;
            for (std::size_t k = 0; k < m_; ++k) {
                bmat[col * m_ + k] *= ip;
                inv[col * m_ + k] *= ip;
            }
            for (std::size_t r = 0; r < m_; ++r) {
                if (r == col) continue;
                const double f = bmat[r * m_ + col];
                if (f == 0.0) continue;
                for (std::size_t k = 0; k < m_; ++k) {
                    bmat[r * m_ + k] -= f * bmat[col * m_ + k];
                    inv[r * m_ + k] -= f * inv[col * m_ + k];
                }
            }
        }
        binv_ = std::move(inv);
        recompute_basics();
        return true;
    }

    SolveResult finish(const std::vector<double>& y, SolveStatus status, std::size_t iter) {
        SolveResult r;
        r.status = status;
        r.iterations = iter;
        r.x.assign(n_, 0.0);
        for (std::size_t j = 0; j < n_; ++j)
            r.x[j] = status_[j] == VarStatus::at_lower ? lo_[j] : hi_[j];
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] < n_) r.x[basis_[i]] = xb_[i];
        for (std::size_t j = 0; j < n_; ++j) {
            r.x[j] = std::clamp(r.x[j], lo_[j], hi_[j]);
            r.objective += obj_[j] * r.x[j];
        }
        r.dual.assign(m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) r.dual[i] = std::max(y[i], 0.0);
        // Certified bound from the (clamped) duals.
        double bound = 0.0;
        for (std::size_t i = 0; i < m_; ++i) bound += r.dual[i] * lp_.rhs()[i];
        std::vector<double> aty(n_);
        lp_.apply_transpose(r.dual.data(), aty.data());
        for (std::size_t j = 0; j < n_; ++j) {
            const double g = obj_[j] - aty[j];
            bound += g > 0 ? g * hi_[j] : g * lo_[j];
        }
        r.objective_upper_bound = bound;
        return r;
    }

    const LinearProgram& lp_;
    const SolverConfig& cfg_;
    std::size_t n_ = 0, m_ = 0;
    std::vector<double> lo_, hi_, obj_;
    std::vector<VarStatus> status_;
    std::vector<std::size_t> basis_;
    std::vector<double> binv_;  // row-major m x m
    std::vector<double> xb_;
};

}  // namespace

SolveResult solve_simplex(const LinearProgram& lp, const SolverConfig& cfg) {
    lp.finalize();
    Simplex s(lp, cfg);
    return s.run();
}

}  // namespace omrr::solver
