#include "cvn/bilinear.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <random>
#include <utility>
#include <vector>

namespace cvn {

std::string to_string(SolverMode mode) {
    switch (mode) {
        case SolverMode::Auto: return "auto";
        case SolverMode::LpOnly: return "lp";
        case SolverMode::OracleOnly: return "oracle";
    }
    return "auto";
}

SolverMode solver_mode_from_string(const std::string& name) {
    if (name == "auto") return SolverMode::Auto;
    if (name == "lp") return SolverMode::LpOnly;
    if (name == "oracle") return SolverMode::OracleOnly;
    throw InvalidStateError("unknown solver mode '" + name + "' (expected auto|lp|oracle)");
}

void SolverConfig::validate() const {
    if (!(bisection_tol > 0.0) || bisection_tol >= 1e-2) {
        throw InvalidStateError("bisection_tol must lie in (0, 1e-2)");
    }
    if (bisection_max_iter <= 0) throw InvalidStateError("bisection_max_iter must be positive");
    if (multistart_count <= 0) throw InvalidStateError("multistart_count must be positive");
    if (vertex_threshold <= 0) throw InvalidStateError("vertex_threshold must be positive");
    if (!(conflict_floor > 0.0) || conflict_floor >= 1e-2) {
        throw InvalidStateError("conflict_floor must lie in (0, 1e-2)");
    }
}

namespace {

Eigen::VectorXd greedy_fill(const IntervalValuation& k, const std::vector<Index>& order) {
    Eigen::VectorXd p = k.lower();
    double budget = 1.0 - p.sum();
    for (Index i : order) {
        if (budget <= 0.0) break;
        const double add = std::min(k.upper()[i] - k.lower()[i], budget);
        p[i] += add;
        budget -= add;
    }
    return p;
}

Eigen::VectorXd greedy_drain(const IntervalValuation& k, const std::vector<Index>& order) {
    Eigen::VectorXd p = k.upper();
    double excess = p.sum() - 1.0;
    for (Index i : order) {
        if (excess <= 0.0) break;
        const double sub = std::min(k.upper()[i] - k.lower()[i], excess);
        p[i] -= sub;
        excess -= sub;
    }
    return p;
}

std::vector<Index> ascending(Index n) {
    std::vector<Index> order(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    return order;
}

// Platform-stable Fisher-Yates.
std::vector<Index> random_order(Index n, std::mt19937_64& rng) {
    std::vector<Index> order = ascending(n);
    for (Index i = n - 1; i > 0; --i) {
        const Index j = static_cast<Index>(rng() % static_cast<std::uint64_t>(i + 1));
        std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    }
    return order;
}

Eigen::VectorXd random_vertex(const IntervalValuation& k, std::mt19937_64& rng) {
    const std::vector<Index> order = random_order(k.domain().cardinality(), rng);
    return (rng() & 1u) ? greedy_drain(k, order) : greedy_fill(k, order);
}

double bilinear_value(const Eigen::VectorXd& c, const Eigen::VectorXd& p1, const Eigen::VectorXd& p2) {
    return (c.array() * p1.array() * p2.array()).sum();
}

}  // namespace

Eigen::VectorXd lower_greedy_vertex(const IntervalValuation& k) {
    return greedy_fill(k, ascending(k.domain().cardinality()));
}

Eigen::VectorXd upper_greedy_vertex(const IntervalValuation& k) {
    return greedy_drain(k, ascending(k.domain().cardinality()));
}

BilinearPoint alternating_lp(const BilinearProblem& problem, Eigen::VectorXd start1,
                             Eigen::VectorXd start2, const LpSolver& lp) {
    const IntervalValuation& k1 = problem.k1;
    const IntervalValuation& k2 = problem.k2;
    LpProblem lp1 = shifted_membership_lp(k1, problem.objective);
    LpProblem lp2 = shifted_membership_lp(k2, problem.objective);

    BilinearPoint point{std::move(start1), std::move(start2), 0.0};
    point.value = bilinear_value(problem.objective, point.p1, point.p2);
    for (int round = 0; round < 100; ++round) {
        lp2.objective = (problem.objective.array() * point.p1.array()).matrix();
        point.p2 = k2.lower() + lp.solve(lp2).x;
        lp1.objective = (problem.objective.array() * point.p2.array()).matrix();
        point.p1 = k1.lower() + lp.solve(lp1).x;
        const double value = bilinear_value(problem.objective, point.p1, point.p2);
        if (point.value - value < 1e-10) {
            point.value = std::min(point.value, value);
            break;
        }
        point.value = value;
    }
    return point;
}

BilinearPoint alternating_lp(const BilinearProblem& problem, Eigen::VectorXd start1,
                             Eigen::VectorXd start2) {
    static const DenseSimplexSolver solver;
    return alternating_lp(problem, std::move(start1), std::move(start2), solver);
}

BilinearPoint vertex_pair_oracle(const BilinearProblem& problem, Index vertex_threshold) {
    const std::vector<Eigen::VectorXd> v1 = enumerate_vertices(problem.k1, vertex_threshold);
    const std::vector<Eigen::VectorXd> v2 = enumerate_vertices(problem.k2, vertex_threshold);
    BilinearPoint best;
    best.value = std::numeric_limits<double>::infinity();
    for (const auto& a : v1) {
        for (const auto& b : v2) {
            if (a.dot(b) < problem.conflict_floor) continue;
            const double value = bilinear_value(problem.objective, a, b);
            if (value < best.value) {
                best.value = value;
                best.p1 = a;
                best.p2 = b;
            }
        }
    }
    if (!std::isfinite(best.value)) {
        throw TotalConflictError("every vertex pair falls below the conflict floor");
    }
    return best;
}

namespace {

// Shared state for all 2n bound computations of one combination: start pairs,
// constraint scaffolding, and (when enumerable within budget) the vertex
// pairs with their overlaps.
class CombineSession {
public:
    CombineSession(const IntervalValuation& k1, const IntervalValuation& k2, const SolverConfig& cfg)
        : k1_(k1), k2_(k2), cfg_(cfg), n_(k1.domain().cardinality()) {
        cfg.validate();
        if (!(k1.domain() == k2.domain())) {
            throw DomainError("combination requires equal domains: " + to_string(k1.domain()) +
                              " vs " + to_string(k2.domain()));
        }
        use_lp_ = cfg.mode != SolverMode::OracleOnly;
        const bool want_vertices = cfg.mode != SolverMode::LpOnly;
        if (want_vertices && (cfg.mode == SolverMode::OracleOnly || n_ <= cfg.vertex_threshold)) {
            verts1_ = enumerate_vertices(k1_, cfg.vertex_threshold);
            verts2_ = enumerate_vertices(k2_, cfg.vertex_threshold);
            const std::size_t pairs = verts1_.size() * verts2_.size();
            if (cfg.mode == SolverMode::OracleOnly || pairs <= cfg.oracle_pair_budget) {
                use_oracle_ = true;
                pair_den_.resize(static_cast<Index>(pairs));
                Index p = 0;
                for (const auto& a : verts1_) {
                    for (const auto& b : verts2_) pair_den_[p++] = a.dot(b);
                }
            }
        }
        if (use_lp_) {
            lp1_ = shifted_membership_lp(k1_, Eigen::VectorXd::Zero(n_));
            lp2_ = shifted_membership_lp(k2_, Eigen::VectorXd::Zero(n_));
        }
        if (max_denominator() < cfg.conflict_floor) {
            throw TotalConflictError("all joint mass assignments overlap below the conflict floor");
        }
    }

    double lower_bound(Index i) { return solve_bound(i, /*upper=*/false); }
    double upper_bound(Index i) { return solve_bound(i, /*upper=*/true); }

    double max_denominator() {
        if (use_oracle_) return pair_den_.size() > 0 ? pair_den_.maxCoeff() : 0.0;
        // heuristic: best multistart maximum of the overlap
        return -inner_lp_min(Eigen::VectorXd::Constant(n_, -1.0), mix_seed(~0ull, 0), nullptr);
    }

private:
    using StartPair = std::pair<Eigen::VectorXd, Eigen::VectorXd>;

    std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) const {
        // splitmix64 over the call identity; deterministic and order-free
        std::uint64_t z = cfg_.rng_seed + 0x9e3779b97f4a7c15ull * (a + 1) + 0x94d049bb133111ebull * (b + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // min over the product set of sum_x c[x] p1[x] p2[x]: alternating descent
    // from the two greedy extremes, the warm pair carried along the bisection,
    // and seeded random vertex pairs.
    double inner_lp_min(const Eigen::VectorXd& c, std::uint64_t seed, StartPair* warm) {
        std::mt19937_64 rng(seed);
        double best = std::numeric_limits<double>::infinity();
        StartPair best_pair;
        const auto descend = [&](Eigen::VectorXd p1, Eigen::VectorXd p2) {
            double value = bilinear_value(c, p1, p2);
            for (int round = 0; round < 100; ++round) {
                lp2_.objective = (c.array() * p1.array()).matrix();
                p2 = k2_.lower() + solver_.solve(lp2_).x;
                lp1_.objective = (c.array() * p2.array()).matrix();
                p1 = k1_.lower() + solver_.solve(lp1_).x;
                const double v = bilinear_value(c, p1, p2);
                if (value - v < 1e-10) {
                    value = std::min(value, v);
                    break;
                }
                value = v;
            }
            if (value < best) {
                best = value;
                best_pair = {std::move(p1), std::move(p2)};
            }
        };
        descend(lower_greedy_vertex(k1_), lower_greedy_vertex(k2_));
        descend(upper_greedy_vertex(k1_), upper_greedy_vertex(k2_));
        if (warm && warm->first.size() > 0) descend(warm->first, warm->second);
        for (int s = 2; s < cfg_.multistart_count; ++s) {
            // draw the pair anti-correlated half the time: fill one side along
            // an order and the other side along its reverse, which covers the
            // adversarial corners of the product set
            if (s & 1) {
                std::vector<Index> order = random_order(n_, rng);
                std::vector<Index> reversed(order.rbegin(), order.rend());
                const bool drain = rng() & 1u;
                descend(drain ? greedy_drain(k1_, order) : greedy_fill(k1_, order),
                        drain ? greedy_fill(k2_, reversed) : greedy_drain(k2_, reversed));
            } else {
                descend(random_vertex(k1_, rng), random_vertex(k2_, rng));
            }
        }
        if (warm) *warm = std::move(best_pair);
        return best;
    }

    // Bound problems have pair values a*num + b*den, so the oracle scan only
    // needs the precomputed overlaps.
    double inner_oracle_min(Index i, double a, double b) {
        double best = std::numeric_limits<double>::infinity();
        Index p = 0;
        for (const auto& va : verts1_) {
            const double v1i = va[i];
            for (const auto& vb : verts2_) {
                const double den = pair_den_[p++];
                if (den < cfg_.conflict_floor) continue;
                best = std::min(best, a * (v1i * vb[i]) + b * den);
            }
        }
        return best;
    }

    double inner_bound_min(Index i, bool upper, double nu, int iter, StartPair* warm) {
        double best = std::numeric_limits<double>::infinity();
        if (use_oracle_) {
            best = upper ? inner_oracle_min(i, -1.0, 1.0 - nu) : inner_oracle_min(i, 1.0, -nu);
        }
        if (use_lp_) {
            Eigen::VectorXd c = Eigen::VectorXd::Constant(n_, upper ? 1.0 - nu : -nu);
            c[i] = upper ? -nu : 1.0 - nu;
            const std::uint64_t seed =
                mix_seed(static_cast<std::uint64_t>(2 * i + (upper ? 1 : 0)), static_cast<std::uint64_t>(iter));
            best = std::min(best, inner_lp_min(c, seed, warm));
        }
        return best;
    }

    double solve_bound(Index i, bool upper) {
        StartPair warm;
        int iter = 0;
        const auto f = [&](double nu) { return inner_bound_min(i, upper, nu, iter++, &warm); };
        const double f0 = f(0.0);
        assert(f0 >= -1e-12);
        const double f1 = f(1.0);
        if (f1 >= 0.0) {
            return upper ? 0.0 : 1.0;
        }
        double lo = 0.0, hi = 1.0;
        double f_lo = f0, f_hi = f1;
        while (iter < cfg_.bisection_max_iter && hi - lo > cfg_.bisection_tol) {
            assert(f_lo >= -1e-12 && f_hi < 0.0);
            const double mid = 0.5 * (lo + hi);
            const double v = f(mid);
            if (v >= 0.0) {
                lo = mid;
                f_lo = v;
            } else {
                hi = mid;
                f_hi = v;
            }
        }
        (void)f_lo;
        (void)f_hi;
        return upper ? 1.0 - lo : lo;
    }

    const IntervalValuation& k1_;
    const IntervalValuation& k2_;
    SolverConfig cfg_;
    Index n_;
    bool use_lp_ = true;
    bool use_oracle_ = false;
    std::vector<Eigen::VectorXd> verts1_, verts2_;
    Eigen::VectorXd pair_den_;
    LpProblem lp1_, lp2_;
    DenseSimplexSolver solver_;
};

}  // namespace

double lower_combined(const IntervalValuation& k1, const IntervalValuation& k2, Index i,
                      const SolverConfig& cfg) {
    CombineSession session(k1, k2, cfg);
    return session.lower_bound(i);
}

double upper_combined(const IntervalValuation& k1, const IntervalValuation& k2, Index i,
                      const SolverConfig& cfg) {
    CombineSession session(k1, k2, cfg);
    return session.upper_bound(i);
}

IntervalValuation combine_credal_bounds(const IntervalValuation& k1, const IntervalValuation& k2,
                                        const SolverConfig& cfg) {
    CombineSession session(k1, k2, cfg);
    const Index n = k1.domain().cardinality();
    Eigen::VectorXd lower(n), upper(n);
    for (Index i = 0; i < n; ++i) {
        lower[i] = session.lower_bound(i);
        upper[i] = session.upper_bound(i);
    }
    return IntervalValuation(k1.domain(), std::move(lower), std::move(upper));
}

}  // namespace cvn
