#include "cvn/network.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace cvn {

void ValuationNetwork::validate() const {
    if (valuations.empty()) throw InvalidStateError("network has no valuations");
    if (query.empty()) throw InvalidStateError("network has no query variables");

    std::map<std::string, const Variable*> by_name;
    for (const Variable& v : variables) {
        if (!by_name.emplace(v.name(), &v).second) {
            throw InvalidStateError("duplicate variable '" + v.name() + "'");
        }
    }
    std::set<std::string> covered;
    std::set<std::string> val_names;
    const bool interval = !valuations.empty() && is_interval_kind(valuations.front().value);
    for (const NamedValuation& nv : valuations) {
        if (!val_names.insert(nv.name).second) {
            throw InvalidStateError("duplicate valuation name '" + nv.name + "'");
        }
        if (is_interval_kind(nv.value) != interval) {
            throw InvalidStateError("valuation '" + nv.name + "' mixes engine kinds within the network");
        }
        for (const Variable& v : label(nv.value).variables()) {
            const auto it = by_name.find(v.name());
            if (it == by_name.end() || !(*it->second == v)) {
                throw InvalidStateError("valuation '" + nv.name + "' uses undeclared variable '" +
                                        v.name() + "'");
            }
            covered.insert(v.name());
        }
    }
    for (const Variable& v : variables) {
        if (!covered.count(v.name())) {
            throw InvalidStateError("variable '" + v.name() + "' appears in no valuation");
        }
    }
    for (const std::string& q : query) {
        if (!by_name.count(q)) throw InvalidStateError("query variable '" + q + "' is not declared");
    }
}

Domain ValuationNetwork::query_domain() const {
    std::vector<Variable> vars;
    for (const std::string& q : query) {
        for (const Variable& v : variables) {
            if (v.name() == q) vars.push_back(v);
        }
    }
    return Domain(std::move(vars));
}

Domain ValuationNetwork::full_domain() const {
    return Domain(variables);
}

bool ValuationNetwork::interval_kind() const {
    return !valuations.empty() && is_interval_kind(valuations.front().value);
}

EliminationOrder default_order(const ValuationNetwork& net) {
    std::set<std::string> remaining;
    for (const Variable& v : net.variables) remaining.insert(v.name());
    for (const std::string& q : net.query) remaining.erase(q);

    std::vector<Domain> pool;
    for (const NamedValuation& nv : net.valuations) pool.push_back(label(nv.value));

    EliminationOrder order;
    while (!remaining.empty()) {
        std::string best;
        Index best_cost = -1;
        Domain best_clique;
        for (const std::string& x : remaining) {  // std::set iterates in ascending name order
            Domain clique;
            for (const Domain& d : pool) {
                if (d.contains(x)) clique = clique.unite(d);
            }
            if (best_cost < 0 || clique.cardinality() < best_cost) {
                best_cost = clique.cardinality();
                best = x;
                best_clique = clique;
            }
        }
        order.push_back(best);
        remaining.erase(best);
        std::vector<Domain> next;
        for (const Domain& d : pool) {
            if (!d.contains(best)) next.push_back(d);
        }
        const Domain message = best_clique.erase(best);
        if (!message.empty()) next.push_back(message);
        pool = std::move(next);
    }
    return order;
}

void validate_order(const ValuationNetwork& net, const EliminationOrder& order) {
    std::set<std::string> expected;
    for (const Variable& v : net.variables) expected.insert(v.name());
    for (const std::string& q : net.query) expected.erase(q);
    std::set<std::string> given(order.begin(), order.end());
    if (given.size() != order.size()) {
        throw DomainError("elimination order repeats a variable");
    }
    if (given != expected) {
        std::ostringstream os;
        os << "elimination order must be a permutation of the non-query variables {";
        bool first = true;
        for (const std::string& e : expected) {
            if (!first) os << ",";
            os << e;
            first = false;
        }
        os << "}";
        throw DomainError(os.str());
    }
}

std::size_t JoinTree::leaf_count() const {
    std::size_t count = 0;
    for (const JoinTreeNode& n : nodes_) {
        if (n.kind == JoinTreeNode::Kind::Leaf) ++count;
    }
    return count;
}

namespace {

struct OpenNode {
    int id;
    std::string name;
    Domain domain;
};

// Deterministic pair choice: smallest joint domain first, ties by the pair of
// valuation names in bucket order. Intermediate names are structural
// ("(a*b)", "(a*b)-X"), so the tie-break — and with it the combination
// schedule — is pinned by this convention.
std::pair<std::size_t, std::size_t> pick_pair(const std::vector<OpenNode>& bucket) {
    std::size_t best_a = 0, best_b = 1;
    Index best_card = -1;
    std::pair<std::string, std::string> best_names;
    for (std::size_t a = 0; a < bucket.size(); ++a) {
        for (std::size_t b = a + 1; b < bucket.size(); ++b) {
            const Index card = bucket[a].domain.unite(bucket[b].domain).cardinality();
            std::pair<std::string, std::string> names{bucket[a].name, bucket[b].name};
            if (best_card < 0 || card < best_card ||
                (card == best_card && names < best_names)) {
                best_card = card;
                best_names = names;
                best_a = a;
                best_b = b;
            }
        }
    }
    return {best_a, best_b};
}

}  // namespace

JoinTree build_join_tree(const ValuationNetwork& net, const EliminationOrder& order) {
    net.validate();
    validate_order(net, order);

    JoinTree tree;
    std::vector<OpenNode> pool;
    for (std::size_t i = 0; i < net.valuations.size(); ++i) {
        JoinTreeNode leaf;
        leaf.kind = JoinTreeNode::Kind::Leaf;
        leaf.id = static_cast<int>(tree.nodes_.size());
        leaf.name = net.valuations[i].name;
        leaf.domain = label(net.valuations[i].value);
        leaf.leaf_index = static_cast<int>(i);
        tree.nodes_.push_back(leaf);
        pool.push_back({leaf.id, leaf.name, leaf.domain});
    }

    const auto combine_bucket = [&](std::vector<OpenNode>& bucket, int step) {
        while (bucket.size() > 1) {
            const auto [a, b] = pick_pair(bucket);
            const OpenNode na = bucket[a];
            const OpenNode nb = bucket[b];
            bucket.erase(bucket.begin() + static_cast<std::ptrdiff_t>(b));
            bucket.erase(bucket.begin() + static_cast<std::ptrdiff_t>(a));
            JoinTreeNode node;
            node.kind = JoinTreeNode::Kind::Combine;
            node.id = static_cast<int>(tree.nodes_.size());
            node.name = "(" + na.name + "*" + nb.name + ")";
            node.domain = na.domain.unite(nb.domain);
            node.left = na.id;
            node.right = nb.id;
            node.step = step;
            tree.nodes_.push_back(node);
            bucket.insert(bucket.begin(), {node.id, node.name, node.domain});
        }
    };

    for (std::size_t s = 0; s < order.size(); ++s) {
        const std::string& x = order[s];
        std::vector<OpenNode> bucket;
        std::vector<OpenNode> rest;
        for (OpenNode& n : pool) {
            (n.domain.contains(x) ? bucket : rest).push_back(std::move(n));
        }
        pool = std::move(rest);
        Domain clique;
        for (const OpenNode& n : bucket) clique = clique.unite(n.domain);
        tree.cliques_.push_back(clique);
        if (bucket.empty()) continue;  // unreachable for validated networks
        combine_bucket(bucket, static_cast<int>(s));

        JoinTreeNode elim;
        elim.kind = JoinTreeNode::Kind::Eliminate;
        elim.id = static_cast<int>(tree.nodes_.size());
        elim.name = bucket[0].name + "-" + x;
        elim.domain = bucket[0].domain.erase(x);
        elim.left = bucket[0].id;
        elim.eliminated = x;
        elim.step = static_cast<int>(s);
        tree.nodes_.push_back(elim);
        pool.push_back({elim.id, elim.name, elim.domain});
    }

    combine_bucket(pool, -1);
    int root = pool[0].id;
    const Domain target = net.query_domain();
    if (!(tree.nodes_[static_cast<std::size_t>(root)].domain == target)) {
        JoinTreeNode proj;
        proj.kind = JoinTreeNode::Kind::Project;
        proj.id = static_cast<int>(tree.nodes_.size());
        proj.name = pool[0].name + "@query";
        proj.domain = target;
        proj.left = root;
        tree.nodes_.push_back(proj);
        root = proj.id;
    }
    tree.root_ = root;
    tree.cache_.assign(tree.nodes_.size(), std::nullopt);
    return tree;
}

bool JoinTree::respects_cliques() const {
    for (const JoinTreeNode& n : nodes_) {
        if (n.kind != JoinTreeNode::Kind::Combine) continue;
        if (n.step >= 0) {
            if (!cliques_[static_cast<std::size_t>(n.step)].contains(n.domain)) return false;
        }
    }
    return true;
}

Valuation JoinTree::evaluate(const ValuationNetwork& net, const SolverConfig& cfg) const {
    std::ostringstream key;
    key << to_string(cfg.mode) << ":" << cfg.bisection_tol << ":" << cfg.bisection_max_iter << ":"
        << cfg.multistart_count << ":" << cfg.rng_seed << ":" << cfg.vertex_threshold << ":"
        << cfg.conflict_floor << ":" << cfg.oracle_pair_budget << ":" << net.valuations.size();
    if (cache_key_ != key.str()) {
        cache_.assign(nodes_.size(), std::nullopt);
        cache_key_ = key.str();
    }

    // iterative post-order so deep trees cannot overflow the stack
    std::vector<int> stack{root_};
    while (!stack.empty()) {
        const int id = stack.back();
        const JoinTreeNode& n = nodes_[static_cast<std::size_t>(id)];
        if (cache_[static_cast<std::size_t>(id)]) {
            stack.pop_back();
            continue;
        }
        bool ready = true;
        for (int child : {n.left, n.right}) {
            if (child >= 0 && !cache_[static_cast<std::size_t>(child)]) {
                stack.push_back(child);
                ready = false;
            }
        }
        if (!ready) continue;
        stack.pop_back();
        switch (n.kind) {
            case JoinTreeNode::Kind::Leaf:
                cache_[static_cast<std::size_t>(id)] =
                    net.valuations[static_cast<std::size_t>(n.leaf_index)].value;
                break;
            case JoinTreeNode::Kind::Combine: {
                try {
                    cache_[static_cast<std::size_t>(id)] =
                        combine(*cache_[static_cast<std::size_t>(n.left)],
                                *cache_[static_cast<std::size_t>(n.right)], cfg);
                } catch (const TotalConflictError& e) {
                    throw TotalConflictError("combination " + n.name + " failed: " + e.what());
                }
                break;
            }
            case JoinTreeNode::Kind::Eliminate:
                cache_[static_cast<std::size_t>(id)] =
                    eliminate(*cache_[static_cast<std::size_t>(n.left)], n.eliminated);
                break;
            case JoinTreeNode::Kind::Project: {
                const Valuation& child = *cache_[static_cast<std::size_t>(n.left)];
                cache_[static_cast<std::size_t>(id)] =
                    label(child).contains(n.domain) ? marginalize(child, n.domain)
                                                    : extend(child, n.domain);
                break;
            }
        }
    }
    return *cache_[static_cast<std::size_t>(root_)];
}

Valuation fuse(const ValuationNetwork& net, const EliminationOrder& order, const SolverConfig& cfg) {
    const JoinTree tree = build_join_tree(net, order);
    return tree.evaluate(net, cfg);
}

}  // namespace cvn
