#pragma once

#include <cmath>
#include <cstdint>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "mec/distribution.hpp"
#include "mec/errors.hpp"
#include "mec/greedy.hpp"
#include "mec/majorization.hpp"

namespace mec {

// One materialized entry of a geometric split: source state ell of the base
// distribution, 1-based geometric index k, mass = base(ell) * g*(1-g)^(k-1).
struct split_entry {
    std::uint32_t source_index = 0;
    std::uint32_t geom_index = 1;
    double mass = 0.0;
};

// Product of a base distribution with a geometric distribution, materialized
// in globally nonincreasing mass order until the un-materialized tail drops
// below a threshold. The support is infinite; tail_bound reports what was
// left out so consumers can account for it.
class split_distribution {
public:
    split_distribution(std::vector<split_entry> entries, double gamma, double tail_bound)
        : entries_(std::move(entries)), gamma_(gamma), tail_bound_(tail_bound) {
        masses_.reserve(entries_.size());
        for (const auto& e : entries_) masses_.push_back(e.mass);
    }

    const std::vector<split_entry>& entries() const { return entries_; }
    const std::vector<double>& masses() const { return masses_; }
    std::size_t size() const { return entries_.size(); }
    double gamma() const { return gamma_; }
    double tail_bound() const { return tail_bound_; }

    // Entropy of the materialized entries only; the tail contributes extra.
    double entropy_bits() const { return entropy(std::span<const double>(masses_)); }

private:
    std::vector<split_entry> entries_;
    std::vector<double> masses_;
    double gamma_;
    double tail_bound_;
};

inline double entropy(const split_distribution& s) { return s.entropy_bits(); }

// Shannon entropy of Geom_gamma in bits, closed form of the series:
//   [-(1-g) log2(1-g) - g log2(g)] / g
inline double geom_entropy(double gamma) {
    if (!(gamma > 0.0) || !(gamma < 1.0))
        throw domain_error("geom_entropy: gamma must lie in (0,1)");
    const double q = 1.0 - gamma;
    return (-(q)*std::log2(q) - gamma * std::log2(gamma)) / gamma;
}

namespace detail {

// Frontier order: larger mass first; (source, geom) lexicographic on ties so
// equal masses materialize deterministically.
struct split_frontier_less {
    bool operator()(const split_entry& a, const split_entry& b) const {
        if (a.mass != b.mass) return a.mass < b.mass;
        if (a.source_index != b.source_index) return a.source_index > b.source_index;
        return a.geom_index > b.geom_index;
    }
};

}  // namespace detail

// Split every state of `base` into a geometric cascade and materialize the
// product in nonincreasing order. Within one source state the cascade is
// decreasing, so a frontier queue holding at most one candidate per source
// (the next geometric index) yields the global order.
inline split_distribution split(const distribution& base, double gamma, double tail,
                                std::size_t max_entries = 5'000'000) {
    if (!(gamma > 0.0) || !(gamma < 1.0))
        throw domain_error("split: gamma must lie in (0,1)");
    if (!(tail > 0.0) || !(tail < 1.0)) throw domain_error("split: tail must lie in (0,1)");

    std::priority_queue<split_entry, std::vector<split_entry>, detail::split_frontier_less> pq;
    for (std::uint32_t ell = 0; ell < base.size(); ++ell) {
        double m = base.state(ell) * gamma;
        if (m > 0.0) pq.push(split_entry{ell, 1, m});
    }
    std::vector<split_entry> out;
    double remaining = 1.0;
    while (!pq.empty() && remaining > tail) {
        split_entry e = pq.top();
        pq.pop();
        out.push_back(e);
        remaining -= e.mass;
        pq.push(split_entry{e.source_index, e.geom_index + 1, e.mass * (1.0 - gamma)});
        if (out.size() > max_entries)
            throw domain_error("split: entry cap exceeded before reaching the tail threshold");
    }
    if (remaining < 0.0) remaining = 0.0;
    return split_distribution(std::move(out), gamma, remaining);
}

template <class R>
split_distribution split(const basic_distribution<R>& base, double gamma, double tail,
                         std::size_t max_entries = 5'000'000) {
    return split(distribution::from_masses(to_double_masses(base.probs()), true), gamma, tail,
                 max_entries);
}

// Corollary-style upper bound on the greedy entropy:
//   H(meet) + H(Geom_{1/z}) - log2(z-1).
// Equals meet_entropy + 2 at z = 2 and decreases toward
// meet_entropy + log2(e) as z grows.
inline double corollary1_bound(double meet_entropy, long z) {
    if (z < 2) throw domain_error("corollary1_bound: z must be at least 2");
    if (z == 2) return meet_entropy + 2.0;
    // geom_entropy(1/z) - log2(z-1) == z * log2(z/(z-1)); evaluate via log1p
    // so the large-z regime keeps full precision.
    const double zd = static_cast<double>(z);
    return meet_entropy + zd * (std::log1p(1.0 / (zd - 1.0)) * log2_e);
}

// The materialized truncation of a split, checked against a finite q.
inline strong_majorization_witness is_strongly_majorized(const split_distribution& p,
                                                         const basic_distribution<double>& q,
                                                         double alpha, tolerances tol = {}) {
    return is_strongly_majorized(std::span<const double>(p.masses()),
                                 std::span<const double>(q.probs()), alpha, tol);
}

struct lemma5_report {
    bool holds = false;
    long z = 0;
    double alpha = 0.0;           // z - 1
    double tail_bound = 0.0;      // un-materialized split mass
    std::size_t prefixes_checked = 0;
    std::uint32_t violating_index = 0;       // when !holds
    entropy_order_report entropy_order;      // H(split), H(greedy), slack; when holds
};

// The core check from precomputed parts, so one greedy run can serve many z.
inline lemma5_report verify_lemma5_parts(const distribution& meet_dist,
                                         const std::vector<double>& greedy_masses, long z,
                                         double tail, tolerances tol = {}) {
    if (z < 2) throw domain_error("verify_lemma5: z must be at least 2");
    auto sp = split(meet_dist, 1.0 / static_cast<double>(z), tail);
    lemma5_report r;
    r.z = z;
    r.alpha = static_cast<double>(z - 1);
    r.tail_bound = sp.tail_bound();
    r.prefixes_checked = sp.size();
    auto w = is_strongly_majorized(std::span<const double>(sp.masses()),
                                   std::span<const double>(greedy_masses), r.alpha, tol);
    r.holds = w.holds;
    r.violating_index = w.violating_index;
    if (r.holds)
        r.entropy_order = check_strong_majorization_entropy_bound(
            std::span<const double>(sp.masses()), std::span<const double>(greedy_masses),
            r.alpha, tol);
    return r;
}

// The split of the meet at gamma = 1/z is (z-1)-strongly majorized by the
// greedy mass sequence. Verified over every materialized prefix of the split;
// on success the entropy-ordering consequence is evaluated as well.
template <class R>
lemma5_report verify_lemma5(const basic_instance<R>& S, long z, double tail = 1e-12,
                            tolerances tol = {}) {
    auto mt = meet(S);
    auto trace = greedy_couple(S, false, tol);
    auto meet_dist = distribution::from_masses(to_double_masses(mt.meet.probs()), true);
    return verify_lemma5_parts(meet_dist, to_double_masses(trace.coupling.masses()), z, tail,
                               tol);
}

}  // namespace mec
