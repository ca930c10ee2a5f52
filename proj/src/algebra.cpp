#include "cvn/algebra.hpp"

#include <utility>

namespace cvn {

const Domain& label(const Valuation& v) {
    return std::visit([](const auto& x) -> const Domain& { return x.domain(); }, v);
}

bool is_interval_kind(const Valuation& v) {
    return std::holds_alternative<IntervalValuation>(v);
}

Valuation identity_valuation(const Domain& domain, bool interval_kind) {
    if (interval_kind) return IntervalValuation::identity(domain);
    return PmfValuation::uniform(domain);
}

Valuation vacuous_valuation(const Domain& domain) {
    return IntervalValuation::vacuous(domain);
}

PmfValuation combine_pmf(const PmfValuation& p1, const PmfValuation& p2) {
    if (!(p1.domain() == p2.domain())) {
        throw DomainError("combine_pmf requires equal domains: " + to_string(p1.domain()) + " vs " +
                          to_string(p2.domain()));
    }
    Eigen::VectorXd product = (p1.probs().array() * p2.probs().array()).matrix();
    const double norm = product.sum();
    if (norm <= 0.0) {
        throw TotalConflictError("mass functions have disjoint support on " + to_string(p1.domain()));
    }
    return PmfValuation(p1.domain(), product / norm);
}

PmfValuation marginalize_pmf(const PmfValuation& p, const Domain& target) {
    if (target == p.domain()) return p;
    const std::vector<Index> map = p.domain().projection_map(target);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(target.cardinality());
    for (Index y = 0; y < p.domain().cardinality(); ++y) {
        out[map[static_cast<std::size_t>(y)]] += p.probs()[y];
    }
    out /= out.sum();
    return PmfValuation(target, std::move(out));
}

PmfValuation extend_pmf(const PmfValuation& p, const Domain& target) {
    if (target == p.domain()) return p;
    if (!target.contains(p.domain())) {
        throw DomainError("extension target " + to_string(target) + " does not contain " +
                          to_string(p.domain()));
    }
    const std::vector<Index> map = target.projection_map(p.domain());
    const double scale =
        static_cast<double>(p.domain().cardinality()) / static_cast<double>(target.cardinality());
    Eigen::VectorXd out(target.cardinality());
    for (Index y = 0; y < target.cardinality(); ++y) {
        out[y] = p.probs()[map[static_cast<std::size_t>(y)]] * scale;
    }
    return PmfValuation(target, std::move(out));
}

IntervalValuation combine_credal_vacuous(const IntervalValuation& k) {
    return IntervalValuation::vacuous(k.domain());
}

IntervalValuation combine_credal(const IntervalValuation& k1, const IntervalValuation& k2,
                                 const SolverConfig& cfg) {
    if (!(k1.domain() == k2.domain())) {
        throw DomainError("combine_credal requires equal domains: " + to_string(k1.domain()) + " vs " +
                          to_string(k2.domain()));
    }
    if (k1.is_vacuous() || k2.is_vacuous()) return combine_credal_vacuous(k1);
    if (k1.is_precise() && k2.is_precise()) {
        return IntervalValuation::from_pmf(combine_pmf(k1.to_pmf(), k2.to_pmf()));
    }
    if (k1.is_identity()) return k2;
    if (k2.is_identity()) return k1;

    // canonical operand order, so combine(a,b) and combine(b,a) agree bitwise
    const auto before = [](const IntervalValuation& a, const IntervalValuation& b) {
        for (Index i = 0; i < a.lower().size(); ++i) {
            if (a.lower()[i] != b.lower()[i]) return a.lower()[i] < b.lower()[i];
            if (a.upper()[i] != b.upper()[i]) return a.upper()[i] < b.upper()[i];
        }
        return false;
    };
    if (before(k2, k1)) return combine_credal_bounds(k2, k1, cfg);
    return combine_credal_bounds(k1, k2, cfg);
}

IntervalValuation marginalize_credal(const IntervalValuation& k, const Domain& target) {
    if (target == k.domain()) return k;
    if (k.is_precise()) {
        // keep the zero-width representation exact
        return IntervalValuation::from_pmf(marginalize_pmf(k.to_pmf(), target));
    }
    const std::vector<Index> map = k.domain().projection_map(target);
    const Index m = target.cardinality();
    Eigen::VectorXd sum_lower = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd sum_upper = Eigen::VectorXd::Zero(m);
    for (Index y = 0; y < k.domain().cardinality(); ++y) {
        const Index x = map[static_cast<std::size_t>(y)];
        sum_lower[x] += k.lower()[y];
        sum_upper[x] += k.upper()[y];
    }
    const double total_lower = k.lower().sum();
    const double total_upper = k.upper().sum();
    Eigen::VectorXd lower(m), upper(m);
    for (Index x = 0; x < m; ++x) {
        lower[x] = std::max(sum_lower[x], 1.0 - (total_upper - sum_upper[x]));
        upper[x] = std::min(sum_upper[x], 1.0 - (total_lower - sum_lower[x]));
    }
    return IntervalValuation(target, std::move(lower), std::move(upper));
}

IntervalValuation extend_credal(const IntervalValuation& k, const Domain& target) {
    if (target == k.domain()) return k;
    if (!target.contains(k.domain())) {
        throw DomainError("extension target " + to_string(target) + " does not contain " +
                          to_string(k.domain()));
    }
    if (k.is_precise()) return IntervalValuation::from_pmf(extend_pmf(k.to_pmf(), target));
    const std::vector<Index> map = target.projection_map(k.domain());
    const double scale =
        static_cast<double>(k.domain().cardinality()) / static_cast<double>(target.cardinality());
    Eigen::VectorXd lower(target.cardinality()), upper(target.cardinality());
    for (Index y = 0; y < target.cardinality(); ++y) {
        const Index x = map[static_cast<std::size_t>(y)];
        lower[y] = k.lower()[x] * scale;
        upper[y] = k.upper()[x] * scale;
    }
    return IntervalValuation(target, std::move(lower), std::move(upper));
}

Valuation combine(const Valuation& v1, const Valuation& v2, const SolverConfig& cfg) {
    if (is_interval_kind(v1) != is_interval_kind(v2)) {
        throw InvalidStateError("cannot combine a precise valuation with an interval valuation");
    }
    const Domain joint = label(v1).unite(label(v2));
    if (std::holds_alternative<PmfValuation>(v1)) {
        return combine_pmf(extend_pmf(std::get<PmfValuation>(v1), joint),
                           extend_pmf(std::get<PmfValuation>(v2), joint));
    }
    return combine_credal(extend_credal(std::get<IntervalValuation>(v1), joint),
                          extend_credal(std::get<IntervalValuation>(v2), joint), cfg);
}

Valuation marginalize(const Valuation& v, const Domain& target) {
    if (std::holds_alternative<PmfValuation>(v)) {
        return marginalize_pmf(std::get<PmfValuation>(v), target);
    }
    return marginalize_credal(std::get<IntervalValuation>(v), target);
}

Valuation extend(const Valuation& v, const Domain& target) {
    if (std::holds_alternative<PmfValuation>(v)) {
        return extend_pmf(std::get<PmfValuation>(v), target);
    }
    return extend_credal(std::get<IntervalValuation>(v), target);
}

Valuation eliminate(const Valuation& v, std::string_view variable_name) {
    if (!label(v).contains(variable_name)) return v;
    return marginalize(v, label(v).erase(variable_name));
}

}  // namespace cvn
