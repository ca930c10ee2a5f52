#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cvn/network.hpp"
#include "cvn/rules.hpp"

namespace cvn {

struct VariableDecl {
    std::string name;
    std::vector<std::string> labels;
    int source_line = 0;
};

/// Parsed network file: declarations in source order, knowledge rules,
/// an optional file-level elimination order, and the query. Rules stay
/// uncompiled so validation can report per-rule diagnostics.
struct NetworkSpec {
    std::vector<VariableDecl> variables;
    std::vector<RuleSpec> rules;
    std::optional<EliminationOrder> elimination_order;
    std::vector<std::string> query;
    int query_line = 0;

    Domain domain_of(const RuleSpec& rule) const;
    /// Canonical text form; parse_network(to_text()) is structurally equal.
    std::string to_text() const;
};

bool structurally_equal(const NetworkSpec& a, const NetworkSpec& b);

/// Line-oriented statements: `var`, `val`, `order`, `query`; `#` comments.
/// Throws ParseError with source position on syntax errors, undeclared
/// variables, duplicate names, or a missing/duplicate query.
NetworkSpec parse_network(std::string_view text);

NetworkSpec parse_network_file(const std::string& path);

/// Compiles every rule for the requested engine kind and assembles the
/// network (validated).
ValuationNetwork build_network(const NetworkSpec& spec, bool interval_kind);

}  // namespace cvn
