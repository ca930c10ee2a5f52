#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>

#include "cvn/lp.hpp"
#include "cvn/valuations.hpp"

namespace cvn {

enum class SolverMode { Auto, LpOnly, OracleOnly };

std::string to_string(SolverMode mode);
SolverMode solver_mode_from_string(const std::string& name);

struct SolverConfig {
    double bisection_tol = 1e-6;
    int bisection_max_iter = 60;
    int multistart_count = 16;
    std::uint64_t rng_seed = 0;
    Index vertex_threshold = 16;
    double conflict_floor = 1e-9;
    SolverMode mode = SolverMode::Auto;
    /// Auto mode folds the exact vertex-pair scan into the inner minimization
    /// only while |V1|*|V2| stays within this budget.
    std::size_t oracle_pair_budget = std::size_t{1} << 16;

    void validate() const;  // throws InvalidStateError
};

/// One inner minimization of the bisection scheme:
///   min over p1 in K1, p2 in K2 of sum_x objective[x] * p1[x] * p2[x].
struct BilinearProblem {
    BilinearProblem(IntervalValuation k1_, IntervalValuation k2_, Eigen::VectorXd objective_,
                    double conflict_floor_ = 1e-9)
        : k1(std::move(k1_)), k2(std::move(k2_)), objective(std::move(objective_)),
          conflict_floor(conflict_floor_) {}

    IntervalValuation k1;
    IntervalValuation k2;
    Eigen::VectorXd objective;
    double conflict_floor = 1e-9;
};

struct BilinearPoint {
    Eigen::VectorXd p1;
    Eigen::VectorXd p2;
    double value = 0.0;
};

/// Member of the set with every coordinate pushed to its lower bound, the
/// residual mass absorbed in ascending index order. A vertex.
Eigen::VectorXd lower_greedy_vertex(const IntervalValuation& k);
/// Mirror image starting from the upper bounds.
Eigen::VectorXd upper_greedy_vertex(const IntervalValuation& k);

/// Block-coordinate descent: fixes one mass function, solves the linear
/// program in the other, and alternates until the improvement drops below
/// 1e-10 (at most 100 rounds). The returned value never exceeds the start's.
BilinearPoint alternating_lp(const BilinearProblem& problem, Eigen::VectorXd start1,
                             Eigen::VectorXd start2, const LpSolver& lp);
BilinearPoint alternating_lp(const BilinearProblem& problem, Eigen::VectorXd start1,
                             Eigen::VectorXd start2);

/// Exact global minimum by exhaustive evaluation over all vertex pairs whose
/// overlap reaches the conflict floor. ThresholdExceededError when a set is
/// too large to enumerate; TotalConflictError when no pair qualifies.
BilinearPoint vertex_pair_oracle(const BilinearProblem& problem, Index vertex_threshold = 16);

/// Lower probability of configuration i under the combination of k1 and k2:
/// the largest nu whose inner minimum stays nonnegative, found by bisection
/// over [0,1].
double lower_combined(const IntervalValuation& k1, const IntervalValuation& k2, Index i,
                      const SolverConfig& cfg);
/// Upper probability of configuration i, via the complement transform.
double upper_combined(const IntervalValuation& k1, const IntervalValuation& k2, Index i,
                      const SolverConfig& cfg);

/// All 2n bounds of the combination, computed through the solver (no
/// algebraic shortcuts). Result is tightened and coherent.
IntervalValuation combine_credal_bounds(const IntervalValuation& k1, const IntervalValuation& k2,
                                        const SolverConfig& cfg);

}  // namespace cvn
