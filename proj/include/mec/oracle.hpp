#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mec/coupling.hpp"
#include "mec/errors.hpp"
#include "mec/greedy.hpp"
#include "mec/instance.hpp"
#include "mec/numeric.hpp"

namespace mec {

struct oracle_caps {
    std::uint64_t max_nodes = 10'000'000;
    // Optional wall clock cap in seconds; 0 disables it. Node caps keep runs
    // deterministic, so the time cap is off by default.
    double max_seconds = 0.0;
};

struct oracle_result {
    double best_entropy = std::numeric_limits<double>::infinity();
    std::optional<basic_coupling<rational>> best_coupling;
    std::uint64_t nodes_explored = 0;
    std::uint64_t couplings_found = 0;  // distinct complete couplings seen
    bool exhaustive = false;            // enumeration completed under the caps
};

namespace detail {

struct unit_cells {
    std::vector<std::pair<std::vector<std::uint32_t>, std::uint64_t>> cells;  // (cell, units)
};

// Depth-first enumeration of couplings generated by "pick a feasible cell,
// assign the minimum residual among its coordinates, recurse". Each pick
// zeroes at least one residual state. All masses are integer multiples of a
// common 1/denom grid, so the arithmetic is exact and cheap. Partial
// couplings are deduplicated by canonical (cell, mass) content: two pick
// orders that placed the same cells with the same masses sit at the same
// residual state and would retrace identical subtrees.
template <class I>
class unit_enumerator {
public:
    using unit_coupling = std::vector<std::pair<std::vector<std::uint32_t>, I>>;

    unit_enumerator(std::vector<std::vector<I>> residuals, double denom, oracle_caps caps,
                    std::vector<unit_coupling>* collect = nullptr)
        : caps_(caps), m_(residuals.size()), n_(residuals.front().size()),
          resid_(std::move(residuals)), denom_(denom), collect_(collect) {
        start_ = std::chrono::steady_clock::now();
    }

    void run() {
        exhaustive_ = true;
        dfs();
    }

    bool exhaustive() const { return exhaustive_; }
    std::uint64_t nodes() const { return nodes_; }
    std::uint64_t found() const { return found_; }
    double best_entropy() const { return best_entropy_; }
    const std::vector<std::pair<std::vector<std::uint32_t>, I>>& best_cells() const {
        return best_cells_;
    }

private:
    using partial_key = std::vector<std::pair<std::uint64_t, I>>;

    bool capped() {
        if (nodes_ >= caps_.max_nodes) return true;
        if (caps_.max_seconds > 0.0) {
            auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_);
            if (dt.count() > caps_.max_seconds) return true;
        }
        return false;
    }

    partial_key canonical_key() const {
        partial_key key;
        key.reserve(partial_.size());
        for (const auto& c : partial_) {
            std::uint64_t id = 0;
            for (auto idx : c.first) id = id * n_ + idx;
            key.emplace_back(id, c.second);
        }
        std::sort(key.begin(), key.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        return key;
    }

    void dfs() {
        if (stopped_) return;
        ++nodes_;
        if (capped()) {
            stopped_ = true;
            exhaustive_ = false;
            return;
        }
        std::vector<std::vector<std::uint32_t>> live(m_);
        bool done = true;
        for (std::size_t j = 0; j < m_; ++j) {
            for (std::uint32_t k = 0; k < n_; ++k)
                if (resid_[j][k] > I(0)) live[j].push_back(k);
            if (!live[j].empty()) done = false;
        }
        if (done) {
            record_complete();
            return;
        }
        for (std::size_t j = 0; j < m_; ++j)
            if (live[j].empty()) return;  // unreachable: totals move in lockstep

        std::vector<std::uint32_t> cell(m_);
        enumerate_cells(live, 0, cell);
    }

    void enumerate_cells(const std::vector<std::vector<std::uint32_t>>& live, std::size_t j,
                         std::vector<std::uint32_t>& cell) {
        if (stopped_) return;
        if (j == m_) {
            expand(cell);
            return;
        }
        for (std::uint32_t k : live[j]) {
            cell[j] = k;
            enumerate_cells(live, j + 1, cell);
        }
    }

    void expand(const std::vector<std::uint32_t>& cell) {
        I u = resid_[0][cell[0]];
        for (std::size_t j = 1; j < m_; ++j) u = std::min(u, resid_[j][cell[j]]);
        partial_.emplace_back(cell, u);
        for (std::size_t j = 0; j < m_; ++j) resid_[j][cell[j]] -= u;

        if (visited_.insert(canonical_key()).second) dfs();

        for (std::size_t j = 0; j < m_; ++j) resid_[j][cell[j]] += u;
        partial_.pop_back();
    }

    void record_complete() {
        ++found_;
        double h = 0.0;
        for (const auto& c : partial_) {
            double x = static_cast<double>(c.second) / denom_;
            if (x > 0.0) h -= x * std::log2(x);
        }
        if (h < best_entropy_) {
            best_entropy_ = h;
            best_cells_ = partial_;
        }
        if (collect_) {
            unit_coupling sorted = partial_;
            std::sort(sorted.begin(), sorted.end());
            collect_->push_back(std::move(sorted));
        }
    }

    oracle_caps caps_;
    std::size_t m_, n_;
    std::vector<std::vector<I>> resid_;
    double denom_;
    std::vector<std::pair<std::vector<std::uint32_t>, I>> partial_;
    std::vector<std::pair<std::vector<std::uint32_t>, I>> best_cells_;
    std::set<partial_key> visited_;
    std::vector<unit_coupling>* collect_;
    std::uint64_t nodes_ = 0;
    std::uint64_t found_ = 0;
    double best_entropy_ = std::numeric_limits<double>::infinity();
    bool exhaustive_ = false;
    bool stopped_ = false;
    std::chrono::steady_clock::time_point start_;
};

template <class I>
oracle_result run_unit_enumeration(const basic_instance<rational>& S, const bigint& denom,
                                   oracle_caps caps) {
    std::vector<std::vector<I>> residuals(S.marginal_count());
    for (std::size_t j = 0; j < S.marginal_count(); ++j) {
        for (const auto& v : S.marginal(j).probs()) {
            bigint units = numerator(v) * (denom / denominator(v));
            residuals[j].push_back(static_cast<I>(units));
        }
    }
    unit_enumerator<I> e(std::move(residuals),
                         numeric_traits<rational>::to_double(rational(denom)), caps);
    e.run();

    oracle_result r;
    r.nodes_explored = e.nodes();
    r.couplings_found = e.found();
    r.exhaustive = e.exhaustive();
    r.best_entropy = e.best_entropy();
    if (!e.best_cells().empty()) {
        std::vector<coupling_cell<rational>> cells;
        cells.reserve(e.best_cells().size());
        for (const auto& [cell, units] : e.best_cells())
            cells.push_back(coupling_cell<rational>{cell, rational(bigint(units), denom)});
        r.best_coupling.emplace(S, std::move(cells));
    }
    return r;
}

}  // namespace detail

// Rational copy of a float instance; masses are snapped to nearby small
// denominators (continued fractions) and renormalized so they sum to 1
// exactly. Used when float data enters an equality-sensitive computation.
inline basic_instance<rational> rationalized(const basic_instance<double>& S,
                                             double eps = 1e-12) {
    std::vector<basic_distribution<rational>> marginals;
    marginals.reserve(S.marginal_count());
    for (const auto& p : S.marginals()) {
        std::vector<rational> masses;
        masses.reserve(p.size());
        for (double v : p.probs()) masses.push_back(rationalize(v, eps));
        marginals.push_back(basic_distribution<rational>::from_masses(std::move(masses), true));
    }
    return basic_instance<rational>::from_marginals(std::move(marginals));
}

// Rational copy on the dyadic grid 2^-40 (granularity ~9e-13). Each marginal
// is rounded per state and the largest state absorbs the rounding deficit, so
// unit sums are exact and every mass shares one denominator. This keeps the
// oracle's integer arithmetic in 64 bits.
inline basic_instance<rational> dyadic_rationalized(const basic_instance<double>& S) {
    constexpr std::int64_t denom = std::int64_t(1) << 40;
    std::vector<basic_distribution<rational>> marginals;
    marginals.reserve(S.marginal_count());
    for (const auto& p : S.marginals()) {
        std::vector<std::int64_t> units;
        units.reserve(p.size());
        std::int64_t total = 0;
        for (double v : p.probs()) {
            std::int64_t u = std::llround(v * static_cast<double>(denom));
            units.push_back(u);
            total += u;
        }
        units.front() += denom - total;  // largest state absorbs the deficit
        std::vector<rational> masses;
        masses.reserve(units.size());
        for (auto u : units) masses.push_back(rational(u, denom));
        marginals.push_back(basic_distribution<rational>::from_masses(std::move(masses)));
    }
    return basic_instance<rational>::from_marginals(std::move(marginals));
}

// Minimum-entropy search over couplings reachable by min-assign pick orders.
// Entropy is concave over the coupling polytope, so the optimum sits at an
// extreme point; for m = 2 every extreme point arises from some pick order
// (peel any leaf of its support forest), so a completed enumeration is the
// exact optimum. For m >= 3 a completed run is still an upper bound on the
// optimum, reported as best-found. Arithmetic is exact throughout.
inline oracle_result exact_mec(const basic_instance<rational>& S, oracle_caps caps = {}) {
    bigint denom = 1;
    for (const auto& p : S.marginals())
        for (const auto& v : p.probs()) {
            bigint d = denominator(v);
            denom = denom / gcd(denom, d) * d;  // lcm
        }
    if (denom <= bigint(std::numeric_limits<std::int64_t>::max() / 2))
        return detail::run_unit_enumeration<std::int64_t>(S, denom, caps);
    return detail::run_unit_enumeration<bigint>(S, denom, caps);
}

inline oracle_result exact_mec(const basic_instance<double>& S, oracle_caps caps = {}) {
    return exact_mec(dyadic_rationalized(S), caps);
}

// Every distinct coupling the enumeration reaches, cells sorted. Desk-scale
// sizes only; used to cross-check the enumeration against independent
// polytope-vertex listings.
inline std::vector<std::vector<coupling_cell<rational>>> all_couplings(
    const basic_instance<rational>& S, oracle_caps caps = {}) {
    bigint denom = 1;
    for (const auto& p : S.marginals())
        for (const auto& v : p.probs()) {
            bigint d = denominator(v);
            denom = denom / gcd(denom, d) * d;
        }
    std::vector<detail::unit_enumerator<bigint>::unit_coupling> raw;
    std::vector<std::vector<bigint>> residuals(S.marginal_count());
    for (std::size_t j = 0; j < S.marginal_count(); ++j)
        for (const auto& v : S.marginal(j).probs())
            residuals[j].push_back(numerator(v) * (denom / denominator(v)));
    detail::unit_enumerator<bigint> e(std::move(residuals),
                                      numeric_traits<rational>::to_double(rational(denom)),
                                      caps, &raw);
    e.run();
    if (!e.exhaustive()) throw precondition_error("all_couplings: enumeration hit a cap");
    std::vector<std::vector<coupling_cell<rational>>> out;
    out.reserve(raw.size());
    for (const auto& uc : raw) {
        std::vector<coupling_cell<rational>> cells;
        cells.reserve(uc.size());
        for (const auto& [cell, units] : uc)
            cells.push_back(coupling_cell<rational>{cell, rational(units, denom)});
        out.push_back(std::move(cells));
    }
    return out;
}

struct oracle_comparison {
    double greedy_entropy = 0.0;
    double best_entropy = 0.0;
    double difference = 0.0;  // greedy - best
    std::uint64_t nodes_explored = 0;
};

// Gap between the greedy coupling and the enumerated optimum. Requires a
// completed enumeration. The difference can never exceed log2(e); for two
// marginals it cannot exceed 1 bit.
template <class R>
oracle_comparison compare_greedy_to_oracle(const basic_instance<R>& S, oracle_caps caps = {},
                                           tolerances tol = {}) {
    auto res = exact_mec(S, caps);
    if (!res.exhaustive)
        throw precondition_error("oracle comparison: enumeration hit a cap; no complete result");
    auto trace = greedy_couple(S, false, tol);
    oracle_comparison cmp;
    cmp.greedy_entropy = trace.coupling.entropy_bits();
    cmp.best_entropy = res.best_entropy;
    cmp.difference = cmp.greedy_entropy - cmp.best_entropy;
    cmp.nodes_explored = res.nodes_explored;
    if (cmp.difference > log2_e + tol.bound)
        throw bound_violation("oracle comparison: greedy exceeds best-found by " +
                              std::to_string(cmp.difference) + " bits");
    if (S.marginal_count() == 2 && cmp.difference > 1.0 + tol.bound)
        throw bound_violation("oracle comparison: two-marginal gap above 1 bit");
    return cmp;
}

}  // namespace mec
