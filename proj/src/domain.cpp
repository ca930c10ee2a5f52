#include "cvn/domain.hpp"

#include <algorithm>
#include <set>

namespace cvn {

Variable::Variable(std::string name, std::vector<std::string> frame)
    : name_(std::move(name)), frame_(std::move(frame)) {
    if (name_.empty()) {
        throw InvalidStateError("variable name must be non-empty");
    }
    if (frame_.empty()) {
        throw InvalidStateError("variable '" + name_ + "' has an empty frame");
    }
    std::set<std::string> seen(frame_.begin(), frame_.end());
    if (seen.size() != frame_.size()) {
        throw InvalidStateError("variable '" + name_ + "' has duplicate frame labels");
    }
}

Index Variable::state_index(std::string_view label) const {
    for (Index i = 0; i < size(); ++i) {
        if (frame_[static_cast<std::size_t>(i)] == label) return i;
    }
    throw InvalidStateError("variable '" + name_ + "' has no state '" + std::string(label) + "'");
}

Domain::Domain(std::vector<Variable> variables) : variables_(std::move(variables)) {
    std::sort(variables_.begin(), variables_.end(),
              [](const Variable& a, const Variable& b) { return a.name() < b.name(); });
    for (std::size_t i = 1; i < variables_.size(); ++i) {
        if (variables_[i].name() == variables_[i - 1].name()) {
            throw DomainError("duplicate variable '" + variables_[i].name() + "' in domain");
        }
    }
    for (const Variable& v : variables_) cardinality_ *= v.size();
}

bool Domain::contains(std::string_view variable_name) const {
    return position(variable_name).has_value();
}

bool Domain::contains(const Domain& sub) const {
    for (const Variable& v : sub.variables_) {
        auto pos = position(v.name());
        if (!pos || !(variables_[static_cast<std::size_t>(*pos)] == v)) return false;
    }
    return true;
}

std::optional<Index> Domain::position(std::string_view variable_name) const {
    for (Index i = 0; i < size(); ++i) {
        if (variables_[static_cast<std::size_t>(i)].name() == variable_name) return i;
    }
    return std::nullopt;
}

Domain Domain::unite(const Domain& other) const {
    std::vector<Variable> merged = variables_;
    for (const Variable& v : other.variables_) {
        auto pos = position(v.name());
        if (pos) {
            if (!(variables_[static_cast<std::size_t>(*pos)] == v)) {
                throw DomainError("variable '" + v.name() + "' declared with two different frames");
            }
        } else {
            merged.push_back(v);
        }
    }
    return Domain(std::move(merged));
}

Domain Domain::intersect(const Domain& other) const {
    std::vector<Variable> common;
    for (const Variable& v : variables_) {
        if (other.contains(v.name())) common.push_back(v);
    }
    return Domain(std::move(common));
}

Domain Domain::erase(std::string_view variable_name) const {
    std::vector<Variable> kept;
    for (const Variable& v : variables_) {
        if (v.name() != variable_name) kept.push_back(v);
    }
    return Domain(std::move(kept));
}

Index Domain::encode(std::span<const Index> states) const {
    if (static_cast<Index>(states.size()) != size()) {
        throw InvalidStateError("encode: expected " + std::to_string(size()) + " state indices, got " +
                                std::to_string(states.size()));
    }
    Index idx = 0;
    for (Index k = 0; k < size(); ++k) {
        const Variable& v = variables_[static_cast<std::size_t>(k)];
        Index s = states[static_cast<std::size_t>(k)];
        if (s < 0 || s >= v.size()) {
            throw InvalidStateError("state index " + std::to_string(s) + " out of range for variable '" +
                                    v.name() + "'");
        }
        idx = idx * v.size() + s;
    }
    return idx;
}

std::vector<Index> Domain::decode(Index config) const {
    if (config < 0 || config >= cardinality_) {
        throw InvalidStateError("configuration index " + std::to_string(config) + " out of range");
    }
    std::vector<Index> states(static_cast<std::size_t>(size()));
    for (Index k = size() - 1; k >= 0; --k) {
        const Variable& v = variables_[static_cast<std::size_t>(k)];
        states[static_cast<std::size_t>(k)] = config % v.size();
        config /= v.size();
    }
    return states;
}

std::vector<Index> Domain::projection_map(const Domain& target) const {
    if (!contains(target)) {
        throw DomainError("projection target " + to_string(target) + " is not a subset of " + to_string(*this));
    }
    // position of each target variable within this domain
    std::vector<Index> pos;
    pos.reserve(static_cast<std::size_t>(target.size()));
    for (const Variable& v : target.variables()) pos.push_back(*position(v.name()));

    std::vector<Index> map(static_cast<std::size_t>(cardinality_));
    std::vector<Index> sub(static_cast<std::size_t>(target.size()));
    for (Index y = 0; y < cardinality_; ++y) {
        std::vector<Index> states = decode(y);
        for (std::size_t k = 0; k < pos.size(); ++k) {
            sub[k] = states[static_cast<std::size_t>(pos[k])];
        }
        map[static_cast<std::size_t>(y)] = target.encode(sub);
    }
    return map;
}

std::string to_string(const Domain& domain) {
    std::string out = "{";
    for (std::size_t i = 0; i < domain.variables().size(); ++i) {
        if (i) out += ",";
        out += domain.variables()[i].name();
    }
    return out + "}";
}

std::string config_label(const Domain& domain, Index config) {
    if (domain.empty()) return "()";
    std::vector<Index> states = domain.decode(config);
    std::string out;
    for (Index k = 0; k < domain.size(); ++k) {
        const Variable& v = domain.variables()[static_cast<std::size_t>(k)];
        if (k) out += ",";
        out += v.name() + "=" + v.frame()[static_cast<std::size_t>(states[static_cast<std::size_t>(k)])];
    }
    return out;
}

}  // namespace cvn
