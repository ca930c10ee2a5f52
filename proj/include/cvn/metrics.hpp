#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cvn/valuations.hpp"

namespace cvn {

/// Width clamp that keeps the accuracy metric finite for precise intervals.
inline constexpr double kWidthFloor = 1e-12;

/// Accuracy of an interval marginal against a ground-truth mass function:
///   D = [1 + exp(-(1/n) sum_i log(w_i / ind_i))]^{-1}
/// with w_i the clamped interval width and ind_i the containment indicator.
/// Any truth value outside its interval sends D to its limit of 1.
double distance_D(const PmfValuation& truth, const IntervalValuation& interval);

/// Per-configuration flags: truth inside [lower, upper] at tolerance 1e-9.
std::vector<bool> containment(const PmfValuation& truth, const IntervalValuation& interval);

/// One method's marginal on the shared target domain.
struct MarginalReport {
    std::string method;
    Domain domain;
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
    std::optional<Eigen::VectorXd> truth;   // the precise column carries itself here
    std::optional<double> distance;         // filled by compare() when truth is known
    std::vector<bool> contains_truth;

    bool precise() const { return lower == upper; }
};

/// Side-by-side comparison of interval marginals, optionally against a truth
/// column; deterministic column order (as given).
struct ComparisonTable {
    Domain domain;
    std::optional<Eigen::VectorXd> truth;
    std::vector<MarginalReport> columns;

    std::string to_text() const;
};

ComparisonTable compare(const std::vector<MarginalReport>& reports,
                        const std::optional<Eigen::VectorXd>& truth = std::nullopt);

}  // namespace cvn
