#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "cvn/domain.hpp"

namespace cvn {

/// Tolerance used by every coherence/reachability check.
inline constexpr double kCoherenceTol = 1e-9;

/// A precise probability mass function over a domain's configuration space.
class PmfValuation {
public:
    PmfValuation(Domain domain, Eigen::VectorXd probs);

    static PmfValuation uniform(const Domain& domain);

    const Domain& domain() const { return domain_; }
    const Eigen::VectorXd& probs() const { return probs_; }

private:
    Domain domain_;
    Eigen::VectorXd probs_;
};

struct CoherenceReport {
    bool cond1_ok = false;      // sum(lower) <= 1 <= sum(upper)
    bool reachable_ok = false;  // both reachability inequalities at every index
    std::vector<Index> violating_indices;
    bool ok() const { return cond1_ok && reachable_ok; }
};

/// Nonemptiness (cond1_ok) and reachability of raw interval bounds, at `tol`.
CoherenceReport check_coherence(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                                double tol = kCoherenceTol);

/// Exact reachability tightening: lower_i' = max(lower_i, 1 - sum_{j!=i} upper_j),
/// upper_i' = min(upper_i, 1 - sum_{j!=i} lower_j). Requires cond1, else
/// EmptyCredalSetError. The represented set of mass functions is unchanged.
std::pair<Eigen::VectorXd, Eigen::VectorXd> tighten_bounds(const Eigen::VectorXd& lower,
                                                           const Eigen::VectorXd& upper);

/// Lower/upper probability bounds on singleton configurations, kept coherent:
/// construction clamps eps-noise into [0,1], rejects empty sets, and routes
/// through tighten_bounds (skipped when lower == upper bitwise, which is
/// already reachable and must be preserved exactly).
class IntervalValuation {
public:
    IntervalValuation(Domain domain, Eigen::VectorXd lower, Eigen::VectorXd upper);

    static IntervalValuation vacuous(const Domain& domain);
    /// Zero-width intervals equal to the mass function; exact, no tightening.
    static IntervalValuation from_pmf(const PmfValuation& pmf);
    /// The combination-neutral element: zero-width uniform.
    static IntervalValuation identity(const Domain& domain);

    const Domain& domain() const { return domain_; }
    const Eigen::VectorXd& lower() const { return lower_; }
    const Eigen::VectorXd& upper() const { return upper_; }

    double max_width() const { return (upper_ - lower_).maxCoeff(); }
    bool is_precise() const { return lower_ == upper_; }
    bool is_vacuous() const;
    bool is_identity() const;

    /// Midpoint mass function; requires near-zero widths (InvalidStateError otherwise).
    PmfValuation to_pmf() const;

private:
    struct Raw {};
    IntervalValuation(Raw, Domain domain, Eigen::VectorXd lower, Eigen::VectorXd upper);

    Domain domain_;
    Eigen::VectorXd lower_;
    Eigen::VectorXd upper_;
};

CoherenceReport check_coherence(const IntervalValuation& v, double tol = kCoherenceTol);

IntervalValuation tighten_to_reachable(const Domain& domain, const Eigen::VectorXd& lower,
                                       const Eigen::VectorXd& upper);

/// All extreme points of {p : lower <= p <= upper, sum p = 1}, deduplicated to
/// 1e-12. Every vertex has at most one coordinate strictly between its bounds.
/// ThresholdExceededError when cardinality > max_cardinality.
std::vector<Eigen::VectorXd> enumerate_vertices(const IntervalValuation& v,
                                                Index max_cardinality = 16);

}  // namespace cvn
