#pragma once

#include <string_view>
#include <variant>

#include "cvn/bilinear.hpp"
#include "cvn/valuations.hpp"

namespace cvn {

/// A piece of uncertain knowledge attached to a domain: either a precise mass
/// function or an interval credal set. A network never mixes the two kinds.
using Valuation = std::variant<PmfValuation, IntervalValuation>;

const Domain& label(const Valuation& v);
bool is_interval_kind(const Valuation& v);

/// The combination-neutral element on a domain: the uniform mass function
/// (zero-width in interval form).
Valuation identity_valuation(const Domain& domain, bool interval_kind);
/// The totally uninformative credal set; absorbing under combination.
Valuation vacuous_valuation(const Domain& domain);

// --- precise algebra ---
PmfValuation combine_pmf(const PmfValuation& p1, const PmfValuation& p2);
PmfValuation marginalize_pmf(const PmfValuation& p, const Domain& target);
PmfValuation extend_pmf(const PmfValuation& p, const Domain& target);

// --- interval algebra ---
/// Combination with algebraic shortcuts (vacuous absorbs, identity is
/// neutral, two precise operands multiply exactly); otherwise the bound
/// solver runs with canonicalized operand order, so the operation is
/// bit-for-bit commutative.
IntervalValuation combine_credal(const IntervalValuation& k1, const IntervalValuation& k2,
                                 const SolverConfig& cfg);
/// Absorption shortcut: K combined with the vacuous set, without the solver.
IntervalValuation combine_credal_vacuous(const IntervalValuation& k);
IntervalValuation marginalize_credal(const IntervalValuation& k, const Domain& target);
IntervalValuation extend_credal(const IntervalValuation& k, const Domain& target);

// --- kind-generic operations ---
/// Vacuously extends both operands to the union domain, then combines.
Valuation combine(const Valuation& v1, const Valuation& v2, const SolverConfig& cfg);
Valuation marginalize(const Valuation& v, const Domain& target);
Valuation extend(const Valuation& v, const Domain& target);
/// Marginalizes the variable away; a no-op when it is not in the label.
Valuation eliminate(const Valuation& v, std::string_view variable_name);

}  // namespace cvn
