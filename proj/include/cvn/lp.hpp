#pragma once

#include <Eigen/Core>

#include "cvn/valuations.hpp"

namespace cvn {

/// min objective . x  subject to  constraint_matrix x <= constraint_rhs, x >= 0.
/// Feasible regions in this engine are boxes intersected with the probability
/// simplex, hence always bounded.
struct LpProblem {
    Eigen::MatrixXd constraint_matrix;
    Eigen::VectorXd constraint_rhs;
    Eigen::VectorXd objective;
};

struct LpSolution {
    Eigen::VectorXd x;
    double value = 0.0;
};

class LpSolver {
public:
    virtual ~LpSolver() = default;
    virtual LpSolution solve(const LpProblem& problem) const = 0;
};

/// Dense two-phase tableau simplex. Dantzig pivoting with a Bland fallback
/// against cycling. Sized for the engine's problems (<= ~100 variables).
class DenseSimplexSolver final : public LpSolver {
public:
    explicit DenseSimplexSolver(double pivot_tol = 1e-11) : pivot_tol_(pivot_tol) {}
    LpSolution solve(const LpProblem& problem) const override;

private:
    double pivot_tol_;
};

/// Solves with the module's shared DenseSimplexSolver.
LpSolution solve_lp(const LpProblem& problem);

/// Membership constraints of an interval credal set in explicit row form:
/// for every configuration i the rows -p_i <= -lower_i and p_i <= upper_i,
/// then sum p <= 1 and -sum p <= -1. (2n+2) x n.
LpProblem interval_membership_lp(const IntervalValuation& k, const Eigen::VectorXd& objective);

/// Same feasible set with the lower bounds substituted out (q = p - lower):
/// q <= upper - lower, sum q = 1 - sum lower, q >= 0. Smaller tableau; used on
/// the solver's hot path. Solutions translate back via p = lower + q.
LpProblem shifted_membership_lp(const IntervalValuation& k, const Eigen::VectorXd& objective);

}  // namespace cvn
