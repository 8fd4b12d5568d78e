#pragma once

#include <cstdint>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "mec/coupling.hpp"
#include "mec/errors.hpp"
#include "mec/instance.hpp"
#include "mec/majorization.hpp"

namespace mec {

template <class R>
struct greedy_step {
    std::vector<std::uint32_t> argmax_indices;  // chosen state per marginal
    R mass;                                     // assigned u = min of the maxima
};

template <class R>
struct greedy_trace {
    basic_coupling<R> coupling;
    std::vector<greedy_step<R>> steps;  // construction order, masses nonincreasing
    // Residual marginal snapshots after each step; filled only on request.
    std::vector<std::vector<std::vector<R>>> residual_checkpoints;
};

namespace detail {

// Max-heap entry ordering: larger residual first, smaller state index on ties.
template <class R>
struct residual_entry_less {
    bool operator()(const std::pair<R, std::uint32_t>& a,
                    const std::pair<R, std::uint32_t>& b) const {
        if (a.first != b.first) return a.first < b.first;
        return a.second > b.second;
    }
};

}  // namespace detail

// The greedy coupler: repeatedly take each marginal's largest residual state,
// assign the smallest of those maxima as a joint cell, and subtract it from
// every chosen state. Per-marginal maxima are tracked with lazy max-heaps
// (stale entries skipped on pop), giving O(m^2 n log n) over the whole run.
//
// Ties break deterministically: smallest state index within a marginal,
// smallest marginal index for the minimum. In float mode residuals below
// tol.snap are zeroed so the loop terminates; rational mode needs no snapping.
template <class R>
greedy_trace<R> greedy_couple(const basic_instance<R>& S, bool record_residuals = false,
                              tolerances tol = {}) {
    using traits = numeric_traits<R>;
    using entry = std::pair<R, std::uint32_t>;
    const std::size_t m = S.marginal_count();

    std::vector<std::vector<R>> resid(m);
    std::vector<std::priority_queue<entry, std::vector<entry>, detail::residual_entry_less<R>>>
        heaps(m);
    for (std::size_t j = 0; j < m; ++j) {
        resid[j] = S.marginal(j).probs();
        for (std::uint32_t k = 0; k < resid[j].size(); ++k)
            if (resid[j][k] > R(0)) heaps[j].push({resid[j][k], k});
    }

    std::vector<greedy_step<R>> steps;
    std::vector<coupling_cell<R>> cells;
    std::vector<std::vector<std::vector<R>>> checkpoints;

    for (;;) {
        // Current maximum residual state of each marginal.
        std::vector<std::uint32_t> picks(m);
        bool exhausted = false;
        R u(0);
        for (std::size_t j = 0; j < m; ++j) {
            auto& h = heaps[j];
            while (!h.empty() && h.top().first != resid[j][h.top().second]) h.pop();
            if (h.empty()) {
                exhausted = true;
                break;
            }
            picks[j] = h.top().second;
            const R& top = h.top().first;
            if (j == 0 || top < u) u = top;
        }
        if (exhausted || !(u > R(0))) break;

        for (std::size_t j = 0; j < m; ++j) {
            R& r = resid[j][picks[j]];
            r -= u;
            if constexpr (!traits::exact) {
                if (r < tol.snap) r = R(0);
            }
            if (r > R(0)) heaps[j].push({r, picks[j]});
        }
        steps.push_back(greedy_step<R>{picks, u});
        cells.push_back(coupling_cell<R>{std::move(picks), u});
        if (record_residuals) checkpoints.push_back(resid);
    }

    basic_coupling<R> c(S, std::move(cells), tol);
    return greedy_trace<R>{std::move(c), std::move(steps), std::move(checkpoints)};
}

struct theorem1_entry {
    double lower_bound = 0.0;  // tightest value of the closed-form bound
    std::uint32_t max_j = 0;   // prefix length attaining it (smallest on ties)
    double state = 0.0;        // the greedy mass it bounds
};

struct theorem1_certificate {
    std::vector<theorem1_entry> entries;  // one per greedy step
};

// Per-state certificate: every greedy mass is at least
//   max_j (prefix of the meet at j - mass already placed) / j.
// A violation cannot arise from valid inputs; it signals a bug in the greedy
// coupler or the meet.
template <class R>
theorem1_certificate make_theorem1_certificate(const greedy_trace<R>& trace,
                                               const meet_result<R>& meet, tolerances tol = {}) {
    using traits = numeric_traits<R>;
    const auto& md = meet.meet;
    const std::size_t n = md.size();
    theorem1_certificate cert;
    cert.entries.reserve(trace.steps.size());
    R placed(0);
    for (const auto& step : trace.steps) {
        R best(0);
        std::uint32_t best_j = 1;
        bool first = true;
        for (std::size_t j = 1; j <= n; ++j) {
            R v = (md.prefix(j) - placed) / R(static_cast<unsigned>(j));
            if (first || v > best) {
                best = v;
                best_j = static_cast<std::uint32_t>(j);
                first = false;
            }
        }
        if (!traits::leq(best, step.mass, tol.bound))
            throw certificate_violation(
                "greedy state " + std::to_string(cert.entries.size() + 1) + " is " +
                std::to_string(traits::to_double(step.mass)) + ", below its lower bound " +
                std::to_string(traits::to_double(best)));
        cert.entries.push_back(theorem1_entry{traits::to_double(best), best_j,
                                              traits::to_double(step.mass)});
        placed += step.mass;
    }
    return cert;
}

struct gap_report {
    double h_greedy = 0.0;
    double h_meet = 0.0;
    double gap = 0.0;  // h_greedy - h_meet, in [0, log2(e)]
};

// The additive-gap band: the greedy coupling's entropy never drops below the
// meet's and never exceeds it by more than log2(e) bits. Violations signal
// implementation bugs, not valid outcomes.
template <class R>
gap_report bound_report(const basic_instance<R>& S, tolerances tol = {}) {
    auto trace = greedy_couple(S, false, tol);
    auto mt = meet(S);
    gap_report r;
    r.h_greedy = trace.coupling.entropy_bits();
    r.h_meet = mt.meet.entropy_bits();
    r.gap = r.h_greedy - r.h_meet;
    if (r.gap < -tol.bound)
        throw bound_violation("gap " + std::to_string(r.gap) + " below zero");
    if (r.gap > log2_e + tol.bound)
        throw bound_violation("gap " + std::to_string(r.gap) + " above log2(e)");
    return r;
}

}  // namespace mec
