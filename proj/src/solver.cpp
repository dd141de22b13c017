#include "omrr/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace omrr::solver {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::numerical_trouble: return "numerical-trouble";
    }
    return "unknown";
}

std::size_t LinearProgram::add_variable(double lo, double hi, double objective_coef) {
    if (!(lo <= hi)) throw std::invalid_argument("variable bounds must satisfy lo <= hi");
    lo_.push_back(lo);
    hi_.push_back(hi);
    obj_.push_back(objective_coef);
    finalized_ = false;
    return obj_.size() - 1;
}

void LinearProgram::add_row(std::vector<std::pair<std::size_t, double>> coeffs, double rhs) {
    for (const auto& [j, a] : coeffs) {
        if (j >= obj_.size()) throw std::out_of_range("row references unknown variable");
        if (!std::isfinite(a)) throw std::invalid_argument("row coefficient must be finite");
    }
    rows_.push_back(std::move(coeffs));
    rhs_.push_back(rhs);
    finalized_ = false;
}

void LinearProgram::finalize() const {
    if (finalized_) return;
    const std::size_t n = obj_.size();
    std::vector<std::size_t> count(n + 1, 0);
    std::size_t nnz = 0;
    for (const auto& row : rows_)
        for (const auto& [j, a] : row) {
            ++count[j + 1];
            ++nnz;
        }
    col_start_.assign(n + 1, 0);
    for (std::size_t j = 0; j < n; ++j) col_start_[j + 1] = col_start_[j] + count[j + 1];
    col_row_.assign(nnz, 0);
    col_val_.assign(nnz, 0.0);
    std::vector<std::size_t> pos(col_start_.begin(), col_start_.end() - 1);
    for (std::size_t i = 0; i < rows_.size(); ++i)
        for (const auto& [j, a] : rows_[i]) {
            col_row_[pos[j]] = static_cast<std::uint32_t>(i);
            col_val_[pos[j]] = a;
            ++pos[j];
        }
    finalized_ = true;
}

void LinearProgram::apply(const double* x, double* out) const {
    finalize();
    std::fill(out, out + num_rows(), 0.0);
    for (std::size_t j = 0; j < num_vars(); ++j) {
        const double xj = x[j];
        if (xj == 0.0) continue;
        for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k)
            out[col_row_[k]] += col_val_[k] * xj;
    }
}

void LinearProgram::apply_transpose(const double* y, double* out) const {
    finalize();
    for (std::size_t j = 0; j < num_vars(); ++j) {
        double acc = 0.0;
        for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k)
            acc += col_val_[k] * y[col_row_[k]];
        out[j] = acc;
    }
}

void LinearProgram::row_abs_sums(double* out) const {
    finalize();
    std::fill(out, out + num_rows(), 0.0);
    for (std::size_t j = 0; j < num_vars(); ++j)
        for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k)
            out[col_row_[k]] += std::abs(col_val_[k]);
}

void LinearProgram::col_abs_sums(double* out) const {
    finalize();
    for (std::size_t j = 0; j < num_vars(); ++j) {
        double acc = 0.0;
        for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k)
            acc += std::abs(col_val_[k]);
        out[j] = acc;
    }
}

}  // namespace omrr::solver
