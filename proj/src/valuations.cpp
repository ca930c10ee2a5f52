#include "cvn/valuations.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cvn {

namespace {

void require_size(const Domain& domain, const Eigen::VectorXd& v, const char* what) {
    if (v.size() != domain.cardinality()) {
        throw InvalidStateError(std::string(what) + ": expected " + std::to_string(domain.cardinality()) +
                                " entries for domain " + to_string(domain) + ", got " +
                                std::to_string(v.size()));
    }
}

// Clamp values that are within tol outside [0,1]; reject anything further out.
void clamp_unit(Eigen::VectorXd& v, const char* what) {
    for (Index i = 0; i < v.size(); ++i) {
        double x = v[i];
        if (!std::isfinite(x) || x < -kCoherenceTol || x > 1.0 + kCoherenceTol) {
            throw InvalidStateError(std::string(what) + "[" + std::to_string(i) + "] = " +
                                    std::to_string(x) + " is outside [0,1]");
        }
        v[i] = std::min(1.0, std::max(0.0, x));
    }
}

}  // namespace

PmfValuation::PmfValuation(Domain domain, Eigen::VectorXd probs)
    : domain_(std::move(domain)), probs_(std::move(probs)) {
    require_size(domain_, probs_, "pmf");
    double sum = 0.0;
    for (Index i = 0; i < probs_.size(); ++i) {
        if (!std::isfinite(probs_[i]) || probs_[i] < -1e-15) {
            throw InvalidStateError("pmf[" + std::to_string(i) + "] = " + std::to_string(probs_[i]) +
                                    " is negative");
        }
        if (probs_[i] < 0.0) probs_[i] = 0.0;
        sum += probs_[i];
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw InvalidStateError("pmf entries sum to " + std::to_string(sum) + ", not 1");
    }
}

PmfValuation PmfValuation::uniform(const Domain& domain) {
    Index n = domain.cardinality();
    return PmfValuation(domain, Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
}

CoherenceReport check_coherence(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper, double tol) {
    CoherenceReport report;
    const double sum_lower = lower.sum();
    const double sum_upper = upper.sum();
    report.cond1_ok = sum_lower <= 1.0 + tol && sum_upper >= 1.0 - tol;
    report.reachable_ok = true;
    for (Index i = 0; i < lower.size(); ++i) {
        const bool up_reachable = (sum_lower - lower[i]) + upper[i] <= 1.0 + tol;
        const bool lo_reachable = (sum_upper - upper[i]) + lower[i] >= 1.0 - tol;
        if (!up_reachable || !lo_reachable) {
            report.reachable_ok = false;
            report.violating_indices.push_back(i);
        }
    }
    return report;
}

CoherenceReport check_coherence(const IntervalValuation& v, double tol) {
    return check_coherence(v.lower(), v.upper(), tol);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> tighten_bounds(const Eigen::VectorXd& lower,
                                                           const Eigen::VectorXd& upper) {
    const double sum_lower = lower.sum();
    const double sum_upper = upper.sum();
    if (sum_lower > 1.0 + kCoherenceTol || sum_upper < 1.0 - kCoherenceTol) {
        throw EmptyCredalSetError("interval bounds cut an empty set: sum(lower) = " +
                                  std::to_string(sum_lower) + ", sum(upper) = " + std::to_string(sum_upper));
    }
    Eigen::VectorXd lo(lower.size()), up(lower.size());
    for (Index i = 0; i < lower.size(); ++i) {
        lo[i] = std::max(lower[i], 1.0 - (sum_upper - upper[i]));
        up[i] = std::min(upper[i], 1.0 - (sum_lower - lower[i]));
        lo[i] = std::max(0.0, std::min(lo[i], 1.0));
        up[i] = std::max(0.0, std::min(up[i], 1.0));
        // mathematically lo <= up under cond1; repair fp noise only
        lo[i] = std::min(lo[i], up[i]);
    }
    return {std::move(lo), std::move(up)};
}

IntervalValuation::IntervalValuation(Raw, Domain domain, Eigen::VectorXd lower, Eigen::VectorXd upper)
    : domain_(std::move(domain)), lower_(std::move(lower)), upper_(std::move(upper)) {}

IntervalValuation::IntervalValuation(Domain domain, Eigen::VectorXd lower, Eigen::VectorXd upper)
    : domain_(std::move(domain)), lower_(std::move(lower)), upper_(std::move(upper)) {
    require_size(domain_, lower_, "lower");
    require_size(domain_, upper_, "upper");
    clamp_unit(lower_, "lower");
    clamp_unit(upper_, "upper");
    for (Index i = 0; i < lower_.size(); ++i) {
        if (lower_[i] > upper_[i] + kCoherenceTol) {
            throw InvalidStateError("lower[" + std::to_string(i) + "] = " + std::to_string(lower_[i]) +
                                    " exceeds upper = " + std::to_string(upper_[i]));
        }
        if (lower_[i] > upper_[i]) lower_[i] = upper_[i];
    }
    if (lower_ != upper_) {
        auto [lo, up] = tighten_bounds(lower_, upper_);
        lower_ = std::move(lo);
        upper_ = std::move(up);
    } else {
        // zero-width: already reachable; verify nonemptiness only
        const double sum = lower_.sum();
        if (std::abs(sum - 1.0) > kCoherenceTol) {
            throw EmptyCredalSetError("zero-width bounds sum to " + std::to_string(sum) + ", not 1");
        }
    }
}

IntervalValuation IntervalValuation::vacuous(const Domain& domain) {
    Index n = domain.cardinality();
    return IntervalValuation(Raw{}, domain, Eigen::VectorXd::Zero(n),
                             n == 1 ? Eigen::VectorXd::Ones(1) : Eigen::VectorXd::Ones(n));
}

IntervalValuation IntervalValuation::from_pmf(const PmfValuation& pmf) {
    return IntervalValuation(Raw{}, pmf.domain(), pmf.probs(), pmf.probs());
}

IntervalValuation IntervalValuation::identity(const Domain& domain) {
    return from_pmf(PmfValuation::uniform(domain));
}

bool IntervalValuation::is_vacuous() const {
    if (domain_.cardinality() == 1) return false;
    return lower_.isZero(0.0) && (upper_.array() == 1.0).all();
}

bool IntervalValuation::is_identity() const {
    if (!is_precise()) return false;
    const double u = 1.0 / static_cast<double>(domain_.cardinality());
    return (lower_.array() == u).all();
}

PmfValuation IntervalValuation::to_pmf() const {
    if (max_width() > 1e-12) {
        throw InvalidStateError("interval valuation with width " + std::to_string(max_width()) +
                                " is not a point mass function");
    }
    Eigen::VectorXd p = 0.5 * (lower_ + upper_);
    p /= p.sum();
    return PmfValuation(domain_, std::move(p));
}

IntervalValuation tighten_to_reachable(const Domain& domain, const Eigen::VectorXd& lower,
                                       const Eigen::VectorXd& upper) {
    return IntervalValuation(domain, lower, upper);
}

namespace {

void vertex_dfs(const Eigen::VectorXd& lo, const Eigen::VectorXd& up, Index free,
                const std::vector<Index>& others, std::size_t depth, double partial,
                const std::vector<double>& rest_lo, const std::vector<double>& rest_up,
                Eigen::VectorXd& point, std::vector<Eigen::VectorXd>& out) {
    constexpr double tol = 1e-12;
    if (depth == others.size()) {
        const double r = 1.0 - partial;
        if (r >= lo[free] - tol && r <= up[free] + tol) {
            point[free] = std::min(up[free], std::max(lo[free], r));
            out.push_back(point);
        }
        return;
    }
    // prune: the completed sum must be able to land 1 - p_free within bounds
    const double need_lo = 1.0 - up[free];
    const double need_up = 1.0 - lo[free];
    if (partial + rest_up[depth] < need_lo - tol) return;
    if (partial + rest_lo[depth] > need_up + tol) return;

    const Index j = others[depth];
    point[j] = lo[j];
    vertex_dfs(lo, up, free, others, depth + 1, partial + lo[j], rest_lo, rest_up, point, out);
    if (up[j] > lo[j]) {
        point[j] = up[j];
        vertex_dfs(lo, up, free, others, depth + 1, partial + up[j], rest_lo, rest_up, point, out);
    }
}

}  // namespace

std::vector<Eigen::VectorXd> enumerate_vertices(const IntervalValuation& v, Index max_cardinality) {
    const Index n = v.domain().cardinality();
    if (n > max_cardinality) {
        throw ThresholdExceededError("vertex enumeration over " + std::to_string(n) +
                                     " configurations exceeds the limit of " +
                                     std::to_string(max_cardinality));
    }
    const Eigen::VectorXd& lo = v.lower();
    const Eigen::VectorXd& up = v.upper();

    std::vector<Eigen::VectorXd> found;
    Eigen::VectorXd point(n);
    for (Index free = 0; free < n; ++free) {
        std::vector<Index> others;
        others.reserve(static_cast<std::size_t>(n - 1));
        for (Index j = 0; j < n; ++j) {
            if (j != free) others.push_back(j);
        }
        // suffix sums of the others' bounds, for pruning
        std::vector<double> rest_lo(others.size() + 1, 0.0), rest_up(others.size() + 1, 0.0);
        for (std::size_t k = others.size(); k-- > 0;) {
            rest_lo[k] = rest_lo[k + 1] + lo[others[k]];
            rest_up[k] = rest_up[k + 1] + up[others[k]];
        }
        vertex_dfs(lo, up, free, others, 0, 0.0, rest_lo, rest_up, point, found);
    }

    std::sort(found.begin(), found.end(), [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        for (Index i = 0; i < a.size(); ++i) {
            if (a[i] != b[i]) return a[i] < b[i];
        }
        return false;
    });
    std::vector<Eigen::VectorXd> unique;
    for (const auto& p : found) {
        if (unique.empty() || (unique.back() - p).cwiseAbs().maxCoeff() > 1e-12) {
            unique.push_back(p);
        }
    }
    return unique;
}

}  // namespace cvn
