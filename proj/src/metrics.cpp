#include "cvn/metrics.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace cvn {

double distance_D(const PmfValuation& truth, const IntervalValuation& interval) {
    if (!(truth.domain() == interval.domain())) {
        throw DomainError("distance: truth domain " + to_string(truth.domain()) +
                          " differs from interval domain " + to_string(interval.domain()));
    }
    const Index n = truth.domain().cardinality();
    const std::vector<bool> inside = containment(truth, interval);
    double log_sum = 0.0;
    for (Index i = 0; i < n; ++i) {
        if (!inside[static_cast<std::size_t>(i)]) return 1.0;
        const double width = std::max(interval.upper()[i] - interval.lower()[i], kWidthFloor);
        log_sum += std::log(width);
    }
    const double mean = log_sum / static_cast<double>(n);
    return 1.0 / (1.0 + std::exp(-mean));
}

std::vector<bool> containment(const PmfValuation& truth, const IntervalValuation& interval) {
    if (!(truth.domain() == interval.domain())) {
        throw DomainError("containment: truth domain " + to_string(truth.domain()) +
                          " differs from interval domain " + to_string(interval.domain()));
    }
    std::vector<bool> flags;
    for (Index i = 0; i < truth.domain().cardinality(); ++i) {
        const double p = truth.probs()[i];
        flags.push_back(p >= interval.lower()[i] - kCoherenceTol &&
                        p <= interval.upper()[i] + kCoherenceTol);
    }
    return flags;
}

ComparisonTable compare(const std::vector<MarginalReport>& reports,
                        const std::optional<Eigen::VectorXd>& truth) {
    if (reports.empty()) throw DomainError("compare: no reports given");
    ComparisonTable table;
    table.domain = reports.front().domain;
    table.truth = truth;
    for (const MarginalReport& r : reports) {
        if (!(r.domain == table.domain)) {
            throw DomainError("compare: report '" + r.method + "' is on " + to_string(r.domain) +
                              ", expected " + to_string(table.domain));
        }
        MarginalReport col = r;
        if (!table.truth && col.truth) table.truth = col.truth;
        table.columns.push_back(std::move(col));
    }
    if (table.truth) {
        const PmfValuation t(table.domain, *table.truth);
        for (MarginalReport& col : table.columns) {
            const IntervalValuation k(col.domain, col.lower, col.upper);
            col.distance = distance_D(t, k);
            col.contains_truth = containment(t, k);
        }
    }
    return table;
}

std::string ComparisonTable::to_text() const {
    std::ostringstream os;
    os << std::fixed << std::setprecision(3);
    os << std::setw(18) << std::left << "configuration";
    if (truth) os << std::setw(10) << "truth";
    for (const MarginalReport& col : columns) {
        os << std::setw(18) << (col.precise() ? col.method : "[" + col.method + "]");
    }
    os << "\n";
    for (Index i = 0; i < domain.cardinality(); ++i) {
        os << std::setw(18) << std::left << config_label(domain, i);
        if (truth) os << std::setw(10) << (*truth)[i];
        for (const MarginalReport& col : columns) {
            if (col.precise()) {
                std::ostringstream cell;
                cell << std::fixed << std::setprecision(3) << col.lower[i];
                os << std::setw(18) << cell.str();
            } else {
                std::ostringstream cell;
                cell << "[" << std::fixed << std::setprecision(3) << col.lower[i] << ", "
                     << col.upper[i] << "]";
                os << std::setw(18) << cell.str();
            }
        }
        os << "\n";
    }
    bool any_d = false;
    for (const MarginalReport& col : columns) any_d |= col.distance.has_value();
    if (any_d) {
        os << std::setw(18) << std::left << "distance";
        if (truth) os << std::setw(10) << "";
        for (const MarginalReport& col : columns) {
            std::ostringstream cell;
            if (col.distance) cell << std::fixed << std::setprecision(4) << *col.distance;
            os << std::setw(18) << cell.str();
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace cvn
