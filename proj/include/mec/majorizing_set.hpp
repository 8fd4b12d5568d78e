#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mec/distribution.hpp"
#include "mec/errors.hpp"
#include "mec/majorization.hpp"

namespace mec {

// The recursive sequence G'(i) = max_j (prefix_p(j) - sum_{k<i} G'(k)) / j.
// For the instance consisting of every distribution majorizing p, this is
// both what the greedy coupler produces and an upper bound (under
// majorization) on every coupling. Support is infinite in general; states
// are materialized until the residual mass drops below a threshold.
template <class R>
class gprime_sequence {
public:
    using traits = numeric_traits<R>;

    static gprime_sequence compute(const basic_distribution<R>& p, double tail = 1e-12,
                                   std::size_t max_states = 10'000'000) {
        if (!(tail > 0.0) || !(tail < 1.0))
            throw domain_error("gprime: tail must lie in (0,1)");
        gprime_sequence g(p);
        while (traits::to_double(g.residual_) > tail) {
            g.extend_by_one();
            if (g.states_.size() > max_states)
                throw domain_error("gprime: state cap exceeded before reaching tail");
        }
        return g;
    }

    const basic_distribution<R>& base() const { return base_; }
    std::size_t size() const { return states_.size(); }
    const std::vector<R>& states() const { return states_; }

    // 1-based accessors matching the recursion's indexing.
    const R& state(std::size_t i) const {
        if (i == 0 || i > states_.size()) throw index_error("gprime: state index out of range");
        return states_[i - 1];
    }
    std::uint32_t max_j(std::size_t i) const {
        if (i == 0 || i > states_.size()) throw index_error("gprime: state index out of range");
        return max_j_[i - 1];
    }
    R prefix(std::size_t count) const {
        if (count > states_.size()) throw index_error("gprime: prefix length out of range");
        R s(0);
        for (std::size_t k = 0; k < count; ++k) s += states_[k];
        return s;
    }

    const R& residual() const { return residual_; }

    void extend_to(std::size_t count) {
        while (states_.size() < count) extend_by_one();
    }

    double entropy_bits() const { return entropy(states_); }

    // Upper-bound allowance for the entropy carried by the un-materialized
    // tail; reported as an allowance, not an exact value.
    double tail_entropy_allowance() const {
        double r = traits::to_double(residual_);
        if (r <= 0.0 || states_.empty()) return 0.0;
        double last = traits::to_double(states_.back());
        return r * std::log2(1.0 / last) + r * log2_e;
    }

private:
    explicit gprime_sequence(const basic_distribution<R>& p)
        : base_(p), residual_(1) {}

    void extend_by_one() {
        const std::size_t n = base_.size();
        const R placed = R(1) - residual_;
        R best(0);
        std::uint32_t best_j = 1;
        bool first = true;
        for (std::size_t j = 1; j <= n; ++j) {
            R v = (base_.prefix(j) - placed) / R(static_cast<unsigned>(j));
            if (first || v > best) {
                best = v;
                best_j = static_cast<std::uint32_t>(j);
                first = false;
            }
        }
        states_.push_back(best);
        max_j_.push_back(best_j);
        residual_ -= best;
        if (residual_ < R(0)) residual_ = R(0);  // float round-off guard
    }

    basic_distribution<R> base_;
    std::vector<R> states_;           // G'(1), G'(2), ...
    std::vector<std::uint32_t> max_j_;  // maximizing prefix length per state
    R residual_;                      // 1 - sum(states_)
};

template <class R>
gprime_sequence<R> gprime(const basic_distribution<R>& p, double tail = 1e-12) {
    return gprime_sequence<R>::compute(p, tail);
}

// The adversary distribution for a violation at prefix i' with maximizer j':
//   state 1:            sum_{l <= i'} G'(l)
//   states 2 .. j':     G'(i')
//   states j'+1 .. n:   p(k)
// Any candidate whose prefix at i' exceeds G'(i')'s cannot couple it. The
// construction only closes up (sums to 1, sorted, majorizes p) when j' is a
// maximizer of the recursion at i'; anything else is rejected.
template <class R>
basic_distribution<R> adversary(const gprime_sequence<R>& gp, std::size_t i_prime,
                                std::size_t j_prime, tolerances tol = {}) {
    using traits = numeric_traits<R>;
    const auto& p = gp.base();
    const std::size_t n = p.size();
    if (i_prime == 0 || i_prime > gp.size())
        throw index_error("adversary: i' outside the materialized states");
    if (j_prime == 0 || j_prime > n) throw index_error("adversary: j' outside [n]");

    // Mass identity of a maximizer: j' * G'(i') = prefix_p(j') - placed.
    const R placed = gp.prefix(i_prime - 1);
    const R lhs = R(static_cast<unsigned>(j_prime)) * gp.state(i_prime);
    const R rhs = p.prefix(j_prime) - placed;
    if (!traits::close(lhs, rhs, tol.bound))
        throw invalid_witness_error("adversary: j' is not a maximizer at i'");

    std::vector<R> states;
    states.reserve(n);
    states.push_back(gp.prefix(i_prime));
    for (std::size_t k = 2; k <= j_prime; ++k) states.push_back(gp.state(i_prime));
    for (std::size_t k = j_prime + 1; k <= n; ++k) states.push_back(p.state(k - 1));

    for (std::size_t k = 1; k < states.size(); ++k)
        if (!traits::leq(states[k], states[k - 1], tol.bound))
            throw bound_violation("adversary: states not sorted nonincreasing");
    auto out = basic_distribution<R>::from_masses(std::move(states), false, tol);
    if (!majorizes(out, p, tol))
        throw bound_violation("adversary: output does not majorize the base");
    return out;
}

enum class defeat_kind { consistent, defeated };

template <class R>
struct defeat_verdict {
    defeat_kind kind = defeat_kind::consistent;
    std::uint32_t violating_prefix = 0;  // earliest i' (1-based) when defeated
    std::optional<basic_distribution<R>> witness;  // the adversary p~
};

namespace detail {

// Exhaustive partition feasibility: can `weights` be split into groups whose
// sums are exactly `slots`? Bitmask DP over subset sums; empty groups match
// zero slots for free. Weights count is capped by the caller.
template <class R>
bool partition_exists(const std::vector<R>& weights, const std::vector<R>& slots,
                      tolerances tol) {
    using traits = numeric_traits<R>;
    const std::size_t L = weights.size();
    const std::uint32_t full = (1u << L) - 1u;
    std::vector<R> subset_sum(std::size_t(1) << L, R(0));
    for (std::uint32_t mask = 1; mask <= full && L > 0; ++mask) {
        std::uint32_t low = mask & (~mask + 1u);
        std::uint32_t idx = 0;
        while (!((low >> idx) & 1u)) ++idx;
        subset_sum[mask] = subset_sum[mask ^ low] + weights[idx];
    }
    std::vector<char> reach(std::size_t(1) << L, 0);
    reach[0] = 1;
    for (const R& slot : slots) {
        std::vector<char> next(std::size_t(1) << L, 0);
        for (std::uint32_t mask = 0; mask <= full; ++mask) {
            if (!reach[mask]) continue;
            std::uint32_t rest = full & ~mask;
            // All submasks of the complement, including the empty one.
            std::uint32_t sub = rest;
            for (;;) {
                if (traits::close(subset_sum[sub], slot, tol.mass) && !next[mask | sub])
                    next[mask | sub] = 1;
                if (sub == 0) break;
                sub = (sub - 1) & rest;
            }
        }
        reach.swap(next);
    }
    return reach[full] != 0;
}

}  // namespace detail

// Tests a candidate coupling-output distribution against the majorizing-set
// optimum for p. Candidates majorized by G' are consistent; otherwise the
// earliest violating prefix yields an adversary member of the set, and an
// exhaustive partition search confirms the candidate cannot couple it.
template <class R>
defeat_verdict<R> defeat_check(const basic_distribution<R>& candidate,
                               const gprime_sequence<R>& gp, std::size_t support_cap = 12,
                               tolerances tol = {}) {
    using traits = numeric_traits<R>;
    gprime_sequence<R> g = gp;  // may need more states than were materialized
    g.extend_to(candidate.size());

    std::size_t violation = 0;  // earliest 1-based prefix where candidate escapes G'
    R cand_prefix(0);
    for (std::size_t i = 1; i <= candidate.size(); ++i) {
        cand_prefix += candidate.state(i - 1);
        if (!traits::leq(cand_prefix, g.prefix(i), tol.bound)) {
            violation = i;
            break;
        }
    }
    if (violation == 0) return defeat_verdict<R>{defeat_kind::consistent, 0, std::nullopt};

    // Only the confirmation search is exponential; the cap guards it alone.
    std::size_t support = 0;
    for (const auto& v : candidate.probs())
        if (v > R(0)) ++support;
    if (support > support_cap)
        throw support_too_large_error("defeat_check: candidate support " +
                                      std::to_string(support) + " exceeds cap " +
                                      std::to_string(support_cap));

    auto p_tilde = adversary(g, violation, g.max_j(violation), tol);

    std::vector<R> weights;
    for (const auto& v : candidate.probs())
        if (v > R(0)) weights.push_back(v);
    std::vector<R> slots;
    for (const auto& v : p_tilde.probs())
        if (v > R(0)) slots.push_back(v);
    if (detail::partition_exists(weights, slots, tol))
        throw bound_violation("defeat_check: adversary failed to defeat the candidate");

    return defeat_verdict<R>{defeat_kind::defeated, static_cast<std::uint32_t>(violation),
                             std::move(p_tilde)};
}

// Closed form of the greedy output on the majorizing set of uniform(n):
// state i has mass (1 - 1/n)^(i-1) / n.
inline double uniform_greedy_state(long n, long i) {
    if (n < 1 || i < 1) throw domain_error("uniform_greedy_state: n and i must be positive");
    const double nd = static_cast<double>(n);
    return std::pow(1.0 - 1.0 / nd, static_cast<double>(i - 1)) / nd;
}

// Entropy gap of that instance: (n-1) * log2(n/(n-1)) bits. Strictly
// increasing in n with limit log2(e).
inline double uniform_gap(long n) {
    if (n < 2) throw domain_error("uniform_gap: n must be at least 2");
    const double nd = static_cast<double>(n);
    return (nd - 1.0) * std::log1p(1.0 / (nd - 1.0)) * log2_e;
}

}  // namespace mec
