#include "cvn/lp.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace cvn {

namespace {

constexpr double kFeasTol = 1e-9;

}  // namespace

LpSolution DenseSimplexSolver::solve(const LpProblem& problem) const {
    const Index m = problem.constraint_matrix.rows();
    const Index n = problem.constraint_matrix.cols();
    if (problem.constraint_rhs.size() != m || problem.objective.size() != n) {
        throw SolverError("lp problem dimensions disagree");
    }

    // Columns: n structural vars, m slacks, then one artificial per negated
    // row, then the rhs.
    std::vector<Index> art_rows;
    for (Index i = 0; i < m; ++i) {
        if (problem.constraint_rhs[i] < 0.0) art_rows.push_back(i);
    }
    const Index na = static_cast<Index>(art_rows.size());
    const Index cols = n + m + na;

    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> tab(m + 1, cols + 1);
    tab.setZero();
    for (Index i = 0; i < m; ++i) {
        tab.block(i, 0, 1, n) = problem.constraint_matrix.row(i);
        tab(i, n + i) = 1.0;  // slack
        tab(i, cols) = problem.constraint_rhs[i];
    }
    std::vector<Index> basis(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;
    for (Index k = 0; k < na; ++k) {
        const Index i = art_rows[static_cast<std::size_t>(k)];
        tab.row(i).head(cols + 1) *= -1.0;
        tab(i, n + m + k) = 1.0;
        basis[static_cast<std::size_t>(i)] = n + m + k;
    }

    const Index obj = m;  // objective row index
    const auto pivot = [&](Index r, Index s) {
        tab.row(r) /= tab(r, s);
        for (Index i = 0; i <= m; ++i) {
            if (i == r) continue;
            const double f = tab(i, s);
            if (std::abs(f) > 0.0) tab.row(i) -= f * tab.row(r);
        }
        basis[static_cast<std::size_t>(r)] = s;
    };

    // Runs the simplex loop on the current objective row over columns [0, limit).
    const auto iterate = [&](Index limit) {
        const Index bland_after = 4 * (m + n) + 64;
        for (long iter = 0;; ++iter) {
            if (iter > 50000) throw SolverError("simplex iteration limit reached");
            Index enter = -1;
            if (iter < bland_after) {
                double best = -pivot_tol_;
                for (Index j = 0; j < limit; ++j) {
                    if (tab(obj, j) < best) {
                        best = tab(obj, j);
                        enter = j;
                    }
                }
            } else {
                for (Index j = 0; j < limit; ++j) {
                    if (tab(obj, j) < -pivot_tol_) {
                        enter = j;
                        break;
                    }
                }
            }
            if (enter < 0) return;
            Index leave = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (Index i = 0; i < m; ++i) {
                const double a = tab(i, enter);
                if (a <= pivot_tol_) continue;
                const double ratio = tab(i, cols) / a;
                if (ratio < best_ratio - 1e-12 ||
                    (ratio < best_ratio + 1e-12 && leave >= 0 &&
                     basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
                    best_ratio = ratio;
                    leave = i;
                }
            }
            if (leave < 0) throw SolverError("lp is unbounded");
            pivot(leave, enter);
        }
    };

    if (na > 0) {
        // phase 1: minimize the artificial sum; its reduced-cost row is the
        // negated sum of the artificial-basic rows
        tab.row(obj).setZero();
        for (Index i : art_rows) tab.row(obj) -= tab.row(i);
        iterate(n + m);  // artificials may not re-enter
        const double infeas = -tab(obj, cols);
        if (infeas > kFeasTol) {
            throw InfeasibleError("lp infeasible (phase-1 residual " + std::to_string(infeas) + ")");
        }
        // drive out any artificial still basic at zero
        for (Index i = 0; i < m; ++i) {
            if (basis[static_cast<std::size_t>(i)] < n + m) continue;
            Index enter = -1;
            for (Index j = 0; j < n + m; ++j) {
                if (std::abs(tab(i, j)) > pivot_tol_) {
                    enter = j;
                    break;
                }
            }
            if (enter >= 0) pivot(i, enter);
            // else: redundant row; the artificial stays basic at zero
        }
    }

    // phase 2
    tab.row(obj).setZero();
    tab.row(obj).head(n) = problem.objective;
    for (Index i = 0; i < m; ++i) {
        const Index b = basis[static_cast<std::size_t>(i)];
        if (b < n && problem.objective[b] != 0.0) {
            tab.row(obj) -= problem.objective[b] * tab.row(i);
        }
    }
    // artificial columns must not re-enter
    for (Index k = 0; k < na; ++k) tab(obj, n + m + k) = std::numeric_limits<double>::infinity();
    iterate(n + m);

    LpSolution sol;
    sol.x = Eigen::VectorXd::Zero(n);
    for (Index i = 0; i < m; ++i) {
        const Index b = basis[static_cast<std::size_t>(i)];
        if (b < n) sol.x[b] = tab(i, cols);
    }
    for (Index j = 0; j < n; ++j) {
        if (sol.x[j] < -kFeasTol) throw SolverError("simplex produced a negative coordinate");
        if (sol.x[j] < 0.0) sol.x[j] = 0.0;
    }
    const Eigen::VectorXd resid = problem.constraint_matrix * sol.x - problem.constraint_rhs;
    if (resid.maxCoeff() > kFeasTol) {
        throw SolverError("simplex solution violates a constraint by " + std::to_string(resid.maxCoeff()));
    }
    sol.value = problem.objective.dot(sol.x);
    return sol;
}

LpSolution solve_lp(const LpProblem& problem) {
    static const DenseSimplexSolver solver;
    return solver.solve(problem);
}

LpProblem interval_membership_lp(const IntervalValuation& k, const Eigen::VectorXd& objective) {
    const Index n = k.domain().cardinality();
    LpProblem p;
    p.constraint_matrix = Eigen::MatrixXd::Zero(2 * n + 2, n);
    p.constraint_rhs.resize(2 * n + 2);
    for (Index i = 0; i < n; ++i) {
        p.constraint_matrix(2 * i, i) = -1.0;
        p.constraint_rhs[2 * i] = -k.lower()[i];
        p.constraint_matrix(2 * i + 1, i) = 1.0;
        p.constraint_rhs[2 * i + 1] = k.upper()[i];
    }
    p.constraint_matrix.row(2 * n).setOnes();
    p.constraint_rhs[2 * n] = 1.0;
    p.constraint_matrix.row(2 * n + 1).setConstant(-1.0);
    p.constraint_rhs[2 * n + 1] = -1.0;
    p.objective = objective;
    return p;
}

LpProblem shifted_membership_lp(const IntervalValuation& k, const Eigen::VectorXd& objective) {
    const Index n = k.domain().cardinality();
    const double slack = 1.0 - k.lower().sum();
    LpProblem p;
    p.constraint_matrix = Eigen::MatrixXd::Zero(n + 2, n);
    p.constraint_matrix.topLeftCorner(n, n).setIdentity();
    p.constraint_matrix.row(n).setOnes();
    p.constraint_matrix.row(n + 1).setConstant(-1.0);
    p.constraint_rhs.resize(n + 2);
    p.constraint_rhs.head(n) = k.upper() - k.lower();
    p.constraint_rhs[n] = std::max(0.0, slack);
    p.constraint_rhs[n + 1] = -std::max(0.0, slack);
    p.objective = objective;
    return p;
}

}  // namespace cvn
