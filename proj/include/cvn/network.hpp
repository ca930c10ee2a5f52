#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cvn/algebra.hpp"

namespace cvn {

struct NamedValuation {
    std::string name;
    Valuation value;
};

/// A valuation network: variables, named valuations over subsets of them, and
/// the query set. All valuations share one kind (precise or interval).
struct ValuationNetwork {
    std::vector<Variable> variables;
    std::vector<NamedValuation> valuations;
    std::vector<std::string> query;

    /// Checks the structural invariants; throws on violation.
    void validate() const;
    Domain query_domain() const;
    Domain full_domain() const;
    bool interval_kind() const;
};

/// Permutation of the non-query variables, in elimination sequence.
using EliminationOrder = std::vector<std::string>;

/// Greedy minimum-cost order: at each step the variable whose elimination
/// clique has the smallest joint-frame cardinality, ties broken by ascending
/// name.
EliminationOrder default_order(const ValuationNetwork& net);

/// Throws DomainError unless `order` is exactly a permutation of the
/// non-query variables.
void validate_order(const ValuationNetwork& net, const EliminationOrder& order);

/// Node of the binary combination tree the fusion algorithm executes. Leaves
/// reference input valuations; Combine nodes merge exactly two children;
/// Eliminate nodes sum one variable out of their child; a Project root
/// focuses the final pool onto the query domain if needed.
struct JoinTreeNode {
    enum class Kind { Leaf, Combine, Eliminate, Project };
    Kind kind = Kind::Leaf;
    int id = -1;
    std::string name;
    Domain domain;       // domain of this node's output
    int left = -1;       // child id (unary ops use left only)
    int right = -1;
    int leaf_index = -1;           // Leaf: index into net.valuations
    std::string eliminated;        // Eliminate
    int step = -1;                 // elimination step this node belongs to; -1 = final pool
};

class JoinTree {
public:
    const std::vector<JoinTreeNode>& nodes() const { return nodes_; }
    int root() const { return root_; }
    /// Clique (union of bucket domains) per elimination step.
    const std::vector<Domain>& step_cliques() const { return cliques_; }
    std::size_t leaf_count() const;

    /// Evaluates the tree bottom-up. Messages are cached per node, so a
    /// second evaluation with the same configuration is free.
    Valuation evaluate(const ValuationNetwork& net, const SolverConfig& cfg) const;

    /// Every internal node's domain stays inside its step clique (the final
    /// combine is bounded by the surviving pool's union).
    bool respects_cliques() const;

private:
    friend JoinTree build_join_tree(const ValuationNetwork&, const EliminationOrder&);
    std::vector<JoinTreeNode> nodes_;
    int root_ = -1;
    std::vector<Domain> cliques_;
    mutable std::vector<std::optional<Valuation>> cache_;
    mutable std::optional<std::string> cache_key_;
};

/// Records the combination/elimination structure the fusion algorithm will
/// execute for this order: per eliminated variable, the valuations mentioning
/// it are combined pairwise (smallest joint domain first, ties by name) and
/// the variable is summed out; the survivors are combined the same way.
JoinTree build_join_tree(const ValuationNetwork& net, const EliminationOrder& order);

/// The queried marginal of the combination of all valuations, computed by
/// local elimination over the join tree.
Valuation fuse(const ValuationNetwork& net, const EliminationOrder& order, const SolverConfig& cfg);

}  // namespace cvn
