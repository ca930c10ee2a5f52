#pragma once

#include <Eigen/Core>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cvn/errors.hpp"

namespace cvn {

using Index = Eigen::Index;

/// A named discrete variable with a finite, ordered frame of state labels.
class Variable {
public:
    Variable(std::string name, std::vector<std::string> frame);

    const std::string& name() const { return name_; }
    const std::vector<std::string>& frame() const { return frame_; }
    Index size() const { return static_cast<Index>(frame_.size()); }

    /// Position of a state label in the frame; InvalidStateError if absent.
    Index state_index(std::string_view label) const;

    friend bool operator==(const Variable& a, const Variable& b) {
        return a.name_ == b.name_ && a.frame_ == b.frame_;
    }

private:
    std::string name_;
    std::vector<std::string> frame_;
};

/// An ordered set of variables (canonical order: ascending name) together with
/// the mixed-radix indexing of its configuration space. The empty domain is
/// legal and has cardinality 1.
class Domain {
public:
    Domain() = default;
    explicit Domain(std::vector<Variable> variables);

    const std::vector<Variable>& variables() const { return variables_; }
    Index size() const { return static_cast<Index>(variables_.size()); }
    bool empty() const { return variables_.empty(); }

    /// Product of frame sizes; 1 for the empty domain.
    Index cardinality() const { return cardinality_; }

    bool contains(std::string_view variable_name) const;
    bool contains(const Domain& sub) const;
    std::optional<Index> position(std::string_view variable_name) const;

    /// Set union; frames of shared names must agree.
    Domain unite(const Domain& other) const;
    /// Set intersection.
    Domain intersect(const Domain& other) const;
    /// Copy of this domain without the named variable (no-op if absent).
    Domain erase(std::string_view variable_name) const;

    /// Mixed-radix configuration index; the last variable in canonical order
    /// varies fastest. `states` are per-variable state indices in canonical
    /// order.
    Index encode(std::span<const Index> states) const;
    std::vector<Index> decode(Index config) const;

    /// For target ⊆ this: maps every configuration of this domain to the
    /// configuration of `target` it reduces to.
    std::vector<Index> projection_map(const Domain& target) const;

    friend bool operator==(const Domain& a, const Domain& b) {
        return a.variables_ == b.variables_;
    }

private:
    std::vector<Variable> variables_;
    Index cardinality_ = 1;
};

/// Human-readable "{A,D,T}" form.
std::string to_string(const Domain& domain);

/// Joined state labels of one configuration, e.g. "A=2,D=1,T=1".
std::string config_label(const Domain& domain, Index config);

}  // namespace cvn
