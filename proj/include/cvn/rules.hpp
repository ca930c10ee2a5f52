#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cvn/algebra.hpp"
#include "cvn/domain.hpp"

namespace cvn {

enum class RuleKind { Sum, Implies, Assign, Table };

struct StateRef {
    std::string variable;
    std::string state;
};

/// One knowledge statement: a relation over its participants plus the
/// reliability attached to it. `point` is the true probability when the
/// source states one; `lower`/`upper` bound it otherwise (a bare point is the
/// degenerate interval [point, point]).
struct RuleSpec {
    std::string name;
    RuleKind kind = RuleKind::Assign;
    std::vector<std::string> participants;

    // sum: target = addend1 + addend2 + ...
    std::string sum_target;
    std::vector<std::string> sum_addends;
    // implies: antecedent -> consequent
    StateRef antecedent;
    StateRef consequent;
    // assign: variable = state
    StateRef assignment;
    // table: per-configuration interval rows in canonical order
    std::vector<std::pair<double, double>> table_rows;

    std::optional<double> point;
    double lower = 1.0;
    double upper = 1.0;

    int source_line = 0;

    /// The probability the precise engine uses: the stated point, else the
    /// interval midpoint.
    double point_probability() const { return point ? *point : 0.5 * (lower + upper); }
};

/// Configurations of `domain` on which the rule's relation holds.
struct SatisfyingSet {
    std::vector<Index> members;
    Index domain_cardinality = 0;
    Index complement_size() const {
        return domain_cardinality - static_cast<Index>(members.size());
    }
};

/// Exact enumeration of the satisfying configurations. Sum rules do integer
/// arithmetic on frame labels (InvalidRuleError when a label is not an
/// integer); implications are material.
SatisfyingSet satisfying_set(const RuleSpec& rule, const Domain& domain);

/// Compiles the rule on `domain` for one engine kind. Reliability mass is
/// spread uniformly over the satisfying set, complement mass uniformly over
/// the violating configurations; interval reliabilities produce interval
/// valuations, tightened to reachability.
Valuation compile_rule(const RuleSpec& rule, const Domain& domain, bool interval_kind);

}  // namespace cvn
