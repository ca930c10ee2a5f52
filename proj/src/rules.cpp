#include "cvn/rules.hpp"

#include <charconv>
#include <sstream>
#include <cmath>

namespace cvn {

namespace {

long label_to_int(const std::string& label, const std::string& rule_name) {
    long value = 0;
    const char* first = label.data();
    const char* last = first + label.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw InvalidRuleError("rule '" + rule_name + "': frame label '" + label +
                               "' is not an integer, so it cannot enter a sum");
    }
    return value;
}

void check_reliability(const RuleSpec& rule) {
    const auto bad = [&](double x) { return !std::isfinite(x) || x < 0.0 || x > 1.0; };
    if (bad(rule.lower) || bad(rule.upper) || rule.lower > rule.upper + 1e-12) {
        throw InvalidRuleError("rule '" + rule.name + "': reliability interval [" +
                               std::to_string(rule.lower) + ", " + std::to_string(rule.upper) +
                               "] is not a subinterval of [0,1]");
    }
    if (rule.point && (bad(*rule.point) || *rule.point < rule.lower - 1e-12 ||
                       *rule.point > rule.upper + 1e-12)) {
        throw InvalidRuleError("rule '" + rule.name + "': point probability " +
                               std::to_string(*rule.point) + " lies outside [" +
                               std::to_string(rule.lower) + ", " + std::to_string(rule.upper) + "]");
    }
}

Index state_position(const Domain& domain, const StateRef& ref, const std::string& rule_name) {
    const auto pos = domain.position(ref.variable);
    if (!pos) {
        throw InvalidRuleError("rule '" + rule_name + "': variable '" + ref.variable +
                               "' is not in the rule's domain");
    }
    return domain.variables()[static_cast<std::size_t>(*pos)].state_index(ref.state);
}

}  // namespace

SatisfyingSet satisfying_set(const RuleSpec& rule, const Domain& domain) {
    SatisfyingSet out;
    out.domain_cardinality = domain.cardinality();
    if (rule.kind == RuleKind::Table) {
        throw InvalidRuleError("rule '" + rule.name + "': table valuations have no satisfying set");
    }

    // resolve variable positions once
    const auto position = [&](const std::string& name) {
        const auto pos = domain.position(name);
        if (!pos) {
            throw InvalidRuleError("rule '" + rule.name + "': variable '" + name +
                                   "' is not in the rule's domain");
        }
        return *pos;
    };

    Index target_pos = -1;
    std::vector<Index> addend_pos;
    Index ante_pos = -1, ante_state = -1, cons_pos = -1, cons_state = -1;
    Index assign_pos = -1, assign_state = -1;

    switch (rule.kind) {
        case RuleKind::Sum: {
            target_pos = position(rule.sum_target);
            for (const auto& a : rule.sum_addends) addend_pos.push_back(position(a));
            break;
        }
        case RuleKind::Implies: {
            ante_pos = position(rule.antecedent.variable);
            ante_state = state_position(domain, rule.antecedent, rule.name);
            cons_pos = position(rule.consequent.variable);
            cons_state = state_position(domain, rule.consequent, rule.name);
            break;
        }
        case RuleKind::Assign: {
            assign_pos = position(rule.assignment.variable);
            assign_state = state_position(domain, rule.assignment, rule.name);
            break;
        }
        case RuleKind::Table:
            break;
    }

    for (Index config = 0; config < domain.cardinality(); ++config) {
        const std::vector<Index> states = domain.decode(config);
        bool holds = false;
        switch (rule.kind) {
            case RuleKind::Sum: {
                const auto value_of = [&](Index pos) {
                    const Variable& v = domain.variables()[static_cast<std::size_t>(pos)];
                    return label_to_int(v.frame()[static_cast<std::size_t>(states[static_cast<std::size_t>(pos)])],
                                        rule.name);
                };
                long sum = 0;
                for (Index pos : addend_pos) sum += value_of(pos);
                holds = value_of(target_pos) == sum;
                break;
            }
            case RuleKind::Implies:
                holds = states[static_cast<std::size_t>(ante_pos)] != ante_state ||
                        states[static_cast<std::size_t>(cons_pos)] == cons_state;
                break;
            case RuleKind::Assign:
                holds = states[static_cast<std::size_t>(assign_pos)] == assign_state;
                break;
            case RuleKind::Table:
                break;
        }
        if (holds) out.members.push_back(config);
    }
    return out;
}

Valuation compile_rule(const RuleSpec& rule, const Domain& domain, bool interval_kind) {
    const Index n = domain.cardinality();

    if (rule.kind == RuleKind::Table) {
        if (static_cast<Index>(rule.table_rows.size()) != n) {
            throw InvalidRuleError("rule '" + rule.name + "': expected " + std::to_string(n) +
                                   " table rows, got " + std::to_string(rule.table_rows.size()));
        }
        Eigen::VectorXd lo(n), up(n);
        for (Index i = 0; i < n; ++i) {
            lo[i] = rule.table_rows[static_cast<std::size_t>(i)].first;
            up[i] = rule.table_rows[static_cast<std::size_t>(i)].second;
            if (lo[i] < 0.0 || up[i] > 1.0 || lo[i] > up[i]) {
                throw InvalidRuleError("rule '" + rule.name + "': table row " + std::to_string(i) +
                                       " is not a probability interval");
            }
        }
        // explicit rows must be written coherent; suggest the repair instead
        // of applying it silently
        const CoherenceReport report = check_coherence(lo, up);
        if (!report.cond1_ok) {
            throw EmptyCredalSetError("rule '" + rule.name + "': table rows cut an empty set (sum of "
                                      "lowers " + std::to_string(lo.sum()) + ", sum of uppers " +
                                      std::to_string(up.sum()) + ")");
        }
        if (!report.reachable_ok) {
            const auto [tl, tu] = tighten_bounds(lo, up);
            std::ostringstream os;
            os << "rule '" << rule.name << "': table rows violate reachability at configuration(s)";
            for (Index i : report.violating_indices) os << " " << i;
            os << "; the tightened rows would be ";
            for (Index i = 0; i < n; ++i) {
                if (i) os << "; ";
                os << tl[i] << "," << tu[i];
            }
            throw CoherenceError(os.str());
        }
        if (interval_kind) return IntervalValuation(domain, lo, up);
        Eigen::VectorXd mid = 0.5 * (lo + up);
        const double sum = mid.sum();
        if (sum <= 0.0) {
            throw InvalidRuleError("rule '" + rule.name + "': table midpoints sum to zero");
        }
        return PmfValuation(domain, mid / sum);
    }

    check_reliability(rule);
    const SatisfyingSet sat = satisfying_set(rule, domain);
    const Index ns = static_cast<Index>(sat.members.size());
    const Index nv = sat.complement_size();
    if (ns == 0) {
        throw UnsatisfiableRuleError("rule '" + rule.name + "' is satisfied by no configuration of " +
                                     to_string(domain));
    }
    std::vector<bool> in_sat(static_cast<std::size_t>(n), false);
    for (Index i : sat.members) in_sat[static_cast<std::size_t>(i)] = true;

    if (nv == 0 && rule.upper < 1.0 - 1e-12) {
        throw InvalidRuleError("rule '" + rule.name + "' covers every configuration, so its upper "
                               "reliability must be 1");
    }

    if (!interval_kind) {
        const double r = rule.point_probability();
        if (nv == 0 && r < 1.0 - 1e-12) {
            throw InvalidRuleError("rule '" + rule.name + "' covers every configuration, so its "
                                   "reliability must be 1");
        }
        Eigen::VectorXd p(n);
        for (Index i = 0; i < n; ++i) {
            p[i] = in_sat[static_cast<std::size_t>(i)] ? r / static_cast<double>(ns)
                                                       : (1.0 - r) / static_cast<double>(nv);
        }
        return PmfValuation(domain, std::move(p));
    }

    Eigen::VectorXd lo(n), up(n);
    for (Index i = 0; i < n; ++i) {
        if (in_sat[static_cast<std::size_t>(i)]) {
            lo[i] = rule.lower / static_cast<double>(ns);
            up[i] = rule.upper / static_cast<double>(ns);
        } else {
            lo[i] = (1.0 - rule.upper) / static_cast<double>(nv);
            up[i] = (1.0 - rule.lower) / static_cast<double>(nv);
        }
    }
    return IntervalValuation(domain, std::move(lo), std::move(up));
}

}  // namespace cvn
