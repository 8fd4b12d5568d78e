#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mec/distribution.hpp"
#include "mec/errors.hpp"
#include "mec/instance.hpp"

namespace mec {

// q majorizes p: every prefix sum of p is dominated by the corresponding
// prefix sum of q. Supports of different lengths are zero-padded.
template <class R>
bool majorizes(const basic_distribution<R>& q, const basic_distribution<R>& p,
               tolerances tol = {}) {
    using traits = numeric_traits<R>;
    const std::size_t n = std::max(p.size(), q.size());
    R pp(0), qq(0);
    for (std::size_t i = 0; i < n; ++i) {
        if (i < p.size()) pp += p.state(i);
        if (i < q.size()) qq += q.state(i);
        if (!traits::leq(pp, qq, tol.bound)) return false;
    }
    return true;
}

template <class R>
struct meet_result {
    basic_distribution<R> meet;
    // For each prefix length i (position i-1 here), the marginal whose prefix
    // sum attained the minimum; smallest marginal index on ties.
    std::vector<std::uint32_t> per_index_argmin;
};

// Greatest lower bound of the instance under majorization. Its prefix sums
// are the pointwise minima of the members' prefix sums; differencing those
// minima yields nonincreasing states because each prefix curve is concave.
template <class R>
meet_result<R> meet(const basic_instance<R>& S) {
    const std::size_t m = S.marginal_count();
    const std::size_t n = S.state_count();
    std::vector<R> mins(n);
    std::vector<std::uint32_t> argmin(n, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        R best = S.marginal(0).prefix(i);
        std::uint32_t who = 0;
        for (std::size_t j = 1; j < m; ++j) {
            R v = S.marginal(j).prefix(i);
            if (v < best) {
                best = v;
                who = static_cast<std::uint32_t>(j);
            }
        }
        mins[i - 1] = best;
        argmin[i - 1] = who;
    }
    std::vector<R> states(n);
    R prev(0);
    for (std::size_t i = 0; i < n; ++i) {
        states[i] = mins[i] - prev;
        prev = mins[i];
    }
    auto d = basic_distribution<R>::from_masses(std::move(states));
    return meet_result<R>{std::move(d), std::move(argmin)};
}

struct strong_majorization_witness {
    bool holds = false;
    // cover[i] is the covering prefix length j of q chosen for prefix i+1 of p.
    std::vector<std::uint32_t> cover;
    // 1-based prefix length of p at which the check failed (when !holds).
    std::uint32_t violating_index = 0;
};

// p is alpha-strongly majorized by q when every prefix of p has a covering
// prefix of q whose last element is at least alpha times the last element of
// p's prefix. With q sorted nonincreasing, the smallest covering j maximizes
// q(j), so checking it alone decides the predicate. Two-pointer scan,
// O(|p| + |q|). p may be a truncation (prefix sums below 1).
inline strong_majorization_witness is_strongly_majorized(std::span<const double> p,
                                                         std::span<const double> q,
                                                         double alpha, tolerances tol = {}) {
    strong_majorization_witness w;
    w.cover.reserve(p.size());
    double p_prefix = 0.0, q_prefix = 0.0;
    std::size_t j = 0;  // number of q states consumed
    for (std::size_t i = 0; i < p.size(); ++i) {
        p_prefix += p[i];
        while (j < q.size() && q_prefix < p_prefix - tol.bound) q_prefix += q[j++];
        if (q_prefix < p_prefix - tol.bound) {
            if (p_prefix > 1.0 + tol.mass)
                throw no_covering_prefix_error(
                    "strong majorization: p prefix exceeds unit mass at length " +
                    std::to_string(i + 1));
            w.holds = false;
            w.violating_index = static_cast<std::uint32_t>(i + 1);
            return w;
        }
        // j == 0 can only happen when p's prefix is still ~0; cover with q(1).
        std::size_t jj = j == 0 ? 1 : j;
        if (!(alpha * p[i] <= q[jj - 1] + tol.bound)) {
            w.holds = false;
            w.violating_index = static_cast<std::uint32_t>(i + 1);
            return w;
        }
        w.cover.push_back(static_cast<std::uint32_t>(jj));
    }
    w.holds = true;
    return w;
}

template <class R>
std::vector<double> to_double_masses(const std::vector<R>& values) {
    std::vector<double> out;
    out.reserve(values.size());
    for (const auto& v : values) out.push_back(numeric_traits<R>::to_double(v));
    return out;
}

template <class R>
strong_majorization_witness is_strongly_majorized(const basic_distribution<R>& p,
                                                  const basic_distribution<R>& q, double alpha,
                                                  tolerances tol = {}) {
    auto pd = to_double_masses(p.probs());
    auto qd = to_double_masses(q.probs());
    return is_strongly_majorized(std::span<const double>(pd), std::span<const double>(qd), alpha,
                                 tol);
}

struct entropy_order_report {
    double h_p = 0.0;
    double h_q = 0.0;
    double slack = 0.0;  // H(p) - log2(alpha) - H(q)
};

// Entropy ordering under strong majorization: H(q) <= H(p) - log2(alpha).
// Requires the predicate to hold; a negative slack beyond tolerance would
// contradict it and is treated as an implementation bug.
inline entropy_order_report check_strong_majorization_entropy_bound(std::span<const double> p,
                                                                    std::span<const double> q,
                                                                    double alpha,
                                                                    tolerances tol = {}) {
    if (!(alpha > 0)) throw domain_error("entropy bound: alpha must be positive");
    if (!is_strongly_majorized(p, q, alpha, tol).holds)
        throw precondition_error("entropy bound: p is not strongly majorized by q");
    entropy_order_report r;
    r.h_p = entropy(p);
    r.h_q = entropy(q);
    r.slack = r.h_p - std::log2(alpha) - r.h_q;
    if (r.slack < -tol.bound)
        throw bound_violation("entropy bound: H(q) > H(p) - log2(alpha), slack " +
                              std::to_string(r.slack));
    return r;
}

template <class R>
entropy_order_report check_strong_majorization_entropy_bound(const basic_distribution<R>& p,
                                                             const basic_distribution<R>& q,
                                                             double alpha, tolerances tol = {}) {
    auto pd = to_double_masses(p.probs());
    auto qd = to_double_masses(q.probs());
    return check_strong_majorization_entropy_bound(std::span<const double>(pd),
                                                   std::span<const double>(qd), alpha, tol);
}

}  // namespace mec
