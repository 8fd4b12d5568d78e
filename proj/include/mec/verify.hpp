#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mec/greedy.hpp"
#include "mec/instance.hpp"
#include "mec/majorization.hpp"
#include "mec/oracle.hpp"
#include "mec/random.hpp"
#include "mec/split.hpp"

namespace mec {

struct verify_config {
    std::uint64_t trials = 1000;
    std::size_t m = 2;
    std::size_t n = 3;
    std::uint64_t seed = 0;
    std::vector<long> z_values{2, 3, 5, 10};
    numeric_mode mode = numeric_mode::float64;
    double tail = 1e-12;
    tolerances tol{};
    // Oracle comparison runs only for m == 2, n <= 4 instances; this flag can
    // switch it off entirely (it dominates the runtime when active).
    bool with_oracle = true;
    oracle_caps caps{};
};

struct verify_failure {
    std::uint64_t trial = 0;
    std::string check;
    std::string detail;
    std::vector<std::vector<double>> marginals;  // counterexample dump
};

struct verify_summary {
    std::uint64_t trials = 0;
    std::uint64_t checks_run = 0;
    bool all_passed = true;
    double max_gap = 0.0;  // largest H(greedy) - H(meet) observed
    double min_gap = std::numeric_limits<double>::infinity();
    double max_oracle_difference = 0.0;
    double min_lemma6_slack = std::numeric_limits<double>::infinity();
    std::uint64_t oracle_trials = 0;
    std::uint64_t max_greedy_cells = 0;
    std::optional<verify_failure> first_failure;  // lowest failing trial
    std::map<std::string, std::uint64_t> failures_by_check;
};

namespace detail {

inline std::vector<std::vector<double>> dump_marginals(const basic_instance<double>& S) {
    std::vector<std::vector<double>> out;
    out.reserve(S.marginal_count());
    for (const auto& p : S.marginals()) out.push_back(p.probs());
    return out;
}

template <class R>
struct trial_data {
    basic_instance<R> S;
    greedy_trace<R> trace;
    meet_result<R> mt;
    double h_greedy = 0.0;
    double h_meet = 0.0;
};

}  // namespace detail

// Runs the full battery over seeded random instances: the per-state
// lower-bound certificate, the [0, log2(e)] entropy band, split strong
// majorization with its entropy-order consequence for each z, the numeric
// upper-bound chain, cell-count bounds, and (two marginals, small support)
// the exact-enumeration comparison. Deterministic for a fixed config.
inline verify_summary run_verification(const verify_config& cfg) {
    verify_summary sum;
    instance_generator gen(cfg.seed);

    auto fail = [&](std::uint64_t trial, const std::string& check, const std::string& detail,
                    const basic_instance<double>& S) {
        sum.all_passed = false;
        ++sum.failures_by_check[check];
        if (!sum.first_failure)
            sum.first_failure =
                verify_failure{trial, check, detail, detail::dump_marginals(S)};
    };

    for (std::uint64_t t = 0; t < cfg.trials; ++t) {
        basic_instance<double> S = gen.next_instance(cfg.m, cfg.n);

        distribution meet_dist;
        std::vector<double> greedy_masses;
        double h_greedy = 0.0, h_meet = 0.0;
        std::size_t cell_count = 0;
        try {
            if (cfg.mode == numeric_mode::exact_rational) {
                auto SX = rationalized(S);
                auto trace = greedy_couple(SX, false, cfg.tol);
                auto mt = meet(SX);
                auto cert = make_theorem1_certificate(trace, mt, cfg.tol);
                h_greedy = trace.coupling.entropy_bits();
                h_meet = mt.meet.entropy_bits();
                cell_count = trace.coupling.cell_count();
                greedy_masses = to_double_masses(trace.coupling.masses());
                meet_dist = distribution::from_masses(to_double_masses(mt.meet.probs()), true);
            } else {
                auto trace = greedy_couple(S, false, cfg.tol);
                auto mt = meet(S);
                auto cert = make_theorem1_certificate(trace, mt, cfg.tol);
                h_greedy = trace.coupling.entropy_bits();
                h_meet = mt.meet.entropy_bits();
                cell_count = trace.coupling.cell_count();
                greedy_masses = to_double_masses(trace.coupling.masses());
                meet_dist = mt.meet;
            }
            ++sum.checks_run;
        } catch (const certificate_violation& e) {
            fail(t, "certificate", e.what(), S);
            ++sum.trials;
            continue;
        } catch (const error& e) {
            fail(t, "construction", e.what(), S);
            ++sum.trials;
            continue;
        }

        const double gap = h_greedy - h_meet;
        sum.max_gap = std::max(sum.max_gap, gap);
        sum.min_gap = std::min(sum.min_gap, gap);
        ++sum.checks_run;
        if (gap < -cfg.tol.bound || gap > log2_e + cfg.tol.bound)
            fail(t, "band", "gap " + std::to_string(gap) + " outside [0, log2(e)]", S);

        sum.max_greedy_cells = std::max<std::uint64_t>(sum.max_greedy_cells, cell_count);
        ++sum.checks_run;
        if (cell_count > cfg.m * (cfg.n - 1) + 1)
            fail(t, "cell-count",
                 "greedy produced " + std::to_string(cell_count) + " cells, above m(n-1)+1", S);

        for (long z : cfg.z_values) {
            try {
                auto rep = verify_lemma5_parts(meet_dist, greedy_masses, z, cfg.tail, cfg.tol);
                ++sum.checks_run;
                if (!rep.holds)
                    fail(t, "lemma5[z=" + std::to_string(z) + "]",
                         "strong majorization failed at split prefix " +
                             std::to_string(rep.violating_index),
                         S);
                else
                    sum.min_lemma6_slack = std::min(sum.min_lemma6_slack,
                                                    rep.entropy_order.slack);
            } catch (const error& e) {
                fail(t, "lemma5[z=" + std::to_string(z) + "]", e.what(), S);
            }
            ++sum.checks_run;
            double bound = corollary1_bound(h_meet, z);
            if (h_greedy > bound + cfg.tol.bound)
                fail(t, "corollary1[z=" + std::to_string(z) + "]",
                     "H(greedy) " + std::to_string(h_greedy) + " exceeds bound " +
                         std::to_string(bound),
                     S);
        }

        if (cfg.with_oracle && cfg.m == 2 && cfg.n <= 4) {
            try {
                auto cmp = compare_greedy_to_oracle(S, cfg.caps, cfg.tol);
                ++sum.oracle_trials;
                ++sum.checks_run;
                sum.max_oracle_difference =
                    std::max(sum.max_oracle_difference, cmp.difference);
                if (cmp.best_entropy < h_meet - cfg.tol.bound)
                    fail(t, "oracle-bracket",
                         "best entropy " + std::to_string(cmp.best_entropy) +
                             " below H(meet) " + std::to_string(h_meet),
                         S);
                if (cmp.difference < -cfg.tol.bound || cmp.difference > 1.0 + cfg.tol.bound)
                    fail(t, "oracle-m2-gap",
                         "greedy minus optimum " + std::to_string(cmp.difference) +
                             " outside [0, 1]",
                         S);
            } catch (const error& e) {
                fail(t, "oracle", e.what(), S);
            }
        }

        ++sum.trials;
    }
    if (sum.trials == 0) sum.min_gap = 0.0;
    return sum;
}

}  // namespace mec
