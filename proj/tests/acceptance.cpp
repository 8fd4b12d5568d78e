// Acceptance suite: end-to-end checks of every certified guarantee at its
// stated tolerance, one pass/fail line per criterion. Exit code is the
// number of failed criteria.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mec/mec.hpp"

using namespace mec;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& label, const std::string& detail) {
    if (!pass) ++failures;
    std::printf("criterion %d: %s  %s%s%s\n", id, pass ? "PASS" : "FAIL", label.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
}

// Sorted nonincreasing sequences of multiples of 1/8 summing to 1.
std::vector<std::vector<rational>> eighth_grid(int max_parts) {
    std::vector<std::vector<rational>> out;
    std::vector<int> parts;
    auto rec = [&](auto&& self, int remaining, int cap, int slots) -> void {
        if (remaining == 0) {
            std::vector<rational> d;
            for (int u : parts) d.emplace_back(u, 8);
            out.push_back(std::move(d));
            return;
        }
        if (slots == 0) return;
        for (int u = std::min(cap, remaining); u >= 1; --u) {
            parts.push_back(u);
            self(self, remaining - u, u, slots - 1);
            parts.pop_back();
        }
    };
    rec(rec, 8, 8, max_parts);
    return out;
}

std::uint64_t count_matching(const verify_summary& s, const std::string& prefix) {
    std::uint64_t c = 0;
    for (const auto& [k, v] : s.failures_by_check)
        if (k.rfind(prefix, 0) == 0) c += v;
    return c;
}

}  // namespace

int main() {
    constexpr double tol = 1e-9;

    // One randomized sweep feeds criteria 1, 3, 4 and 5: 700 instances per
    // (m, n) cell over m in {2,3,4}, n in {2..6} = 10,500 total, with the
    // upper-bound family checked at z in {2, 3, 5, 10}.
    verify_summary sweep;
    sweep.min_gap = 0.0;
    {
        std::uint64_t seed = 20260811;
        bool first = true;
        for (std::size_t m = 2; m <= 4; ++m)
            for (std::size_t n = 2; n <= 6; ++n) {
                verify_config cfg;
                cfg.trials = 700;
                cfg.m = m;
                cfg.n = n;
                cfg.seed = seed++;
                cfg.z_values = {2, 3, 5, 10};
                cfg.with_oracle = false;
                auto s = run_verification(cfg);
                sweep.trials += s.trials;
                sweep.checks_run += s.checks_run;
                sweep.all_passed = sweep.all_passed && s.all_passed;
                sweep.max_gap = std::max(sweep.max_gap, s.max_gap);
                sweep.min_gap = first ? s.min_gap : std::min(sweep.min_gap, s.min_gap);
                sweep.min_lemma6_slack = std::min(sweep.min_lemma6_slack, s.min_lemma6_slack);
                sweep.max_greedy_cells = std::max(sweep.max_greedy_cells, s.max_greedy_cells);
                for (const auto& [k, v] : s.failures_by_check) sweep.failures_by_check[k] += v;
                if (!sweep.first_failure && s.first_failure) sweep.first_failure = s.first_failure;
                first = false;
            }
    }

    // 1. Additive band: 0 <= H(greedy) - H(meet) <= log2(e) over the sweep.
    {
        bool pass = count_matching(sweep, "band") == 0 && sweep.min_gap >= -tol &&
                    sweep.max_gap <= 1.4426950 + tol;
        std::ostringstream d;
        d << sweep.trials << " instances, gap range [" << sweep.min_gap << ", "
          << sweep.max_gap << "]";
        report(1, pass, "entropy gap stays within [0, log2(e)]", d.str());
    }

    // 2. Tightness sequence: closed-form uniform gaps against independently
    // computed 40-digit references, monotone growth toward log2(e), and the
    // recursion matching the closed form state by state.
    {
        bool pass = true;
        std::ostringstream d;
        const std::pair<long, double> frozen[] = {
            {2L, 1.0},
            {10L, 1.3680278410054499},
            {100L, 1.4354573998163926},
            {10000L, 1.442622903732307},
        };
        double prev = -1.0;
        for (auto [n, want] : frozen) {
            double got = uniform_gap(n);
            double direct = double(n - 1) * std::log2(double(n) / double(n - 1));
            if (std::abs(got - want) > tol || std::abs(got - direct) > tol || got <= prev)
                pass = false;
            prev = got;
        }
        for (long n = 3; n <= 2000; ++n)
            if (uniform_gap(n) <= uniform_gap(n - 1)) pass = false;
        double at_million = uniform_gap(1'000'000);
        if (std::abs(at_million - 1.4426950) > 1e-6) pass = false;

        for (long n = 1; n <= 8 && pass; ++n) {
            auto gp = gprime(uniform_distribution<>(std::size_t(n)), 1e-12);
            for (std::size_t i = 1; i <= gp.size(); ++i)
                if (std::abs(gp.state(i) - uniform_greedy_state(n, long(i))) > tol) {
                    pass = false;
                    break;
                }
        }
        d << "uniform_gap(1e6) = " << at_million;
        report(2, pass, "uniform closed forms and the log2(e) limit", d.str());
    }

    // 3. Per-state lower-bound certificate: zero violations in the sweep plus
    // exact bound/state agreement on uniform bases.
    {
        bool pass = count_matching(sweep, "certificate") == 0 &&
                    count_matching(sweep, "construction") == 0;
        for (long n = 1; n <= 8 && pass; ++n) {
            auto gp = gprime(uniform_distribution<>(std::size_t(n)), 1e-12);
            double placed = 0.0;
            for (std::size_t i = 1; i <= gp.size(); ++i) {
                double best = 0.0;
                for (long j = 1; j <= n; ++j)
                    best = std::max(best, (double(j) / double(n) - placed) / double(j));
                if (std::abs(gp.state(i) - best) > tol) {
                    pass = false;
                    break;
                }
                placed += gp.state(i);
            }
        }
        report(3, pass, "lower-bound certificate holds everywhere, with equality on uniforms",
               "");
    }

    // 4. Split strong majorization and the upper-bound family at
    // z in {2, 3, 5, 10}; z = 2 reproduces the 2-bit bound.
    {
        bool pass = count_matching(sweep, "lemma5") == 0 &&
                    count_matching(sweep, "corollary1") == 0 &&
                    corollary1_bound(0.0, 2) == 2.0;
        report(4, pass, "geometric-split majorization and the bound family", "");
    }

    // 5. Entropy ordering under strong majorization, for every triple that
    // criterion 4 verified.
    {
        bool pass = count_matching(sweep, "lemma5") == 0 && sweep.min_lemma6_slack >= -tol;
        std::ostringstream d;
        d << "min slack " << sweep.min_lemma6_slack;
        report(5, pass, "strong majorization orders entropies", d.str());
    }

    // 6. Oracle bracketing and the one-bit two-marginal gap over 1000
    // exhaustively enumerated instances with n <= 4.
    {
        bool pass = true;
        double max_diff = 0.0;
        instance_generator gen(60011);
        for (int t = 0; t < 1000 && pass; ++t) {
            auto S = gen.next_instance(2, 2 + t % 3);
            auto res = exact_mec(S);
            if (!res.exhaustive) {
                pass = false;
                break;
            }
            double h_meet = meet(S).meet.entropy_bits();
            double h_greedy = greedy_couple(S).coupling.entropy_bits();
            double best = res.best_entropy;
            max_diff = std::max(max_diff, h_greedy - best);
            if (!(h_meet - tol <= best && best <= h_greedy + tol &&
                  h_greedy <= best + 1.0 + tol))
                pass = false;
        }
        std::ostringstream d;
        d << "max greedy - optimum = " << max_diff;
        report(6, pass, "exact optimum bracketing and the m=2 one-bit gap", d.str());
    }

    // 7. Adversary construction over the 1/8-step grid (exact arithmetic) and
    // defeat checks for every escaping candidate.
    {
        bool pass = true;
        int defeats = 0;
        std::string why;
        try {
            auto candidates = eighth_grid(12);
            for (const auto& base_masses : eighth_grid(4)) {
                auto p = make_distribution<rational>(base_masses);
                auto gp = gprime(p, 1e-12);
                for (std::size_t i = 1; i <= std::min<std::size_t>(6, gp.size()); ++i) {
                    auto pt = adversary(gp, i, gp.max_j(i));
                    rational total(0);
                    for (const auto& v : pt.probs()) total += v;
                    if (total != rational(1)) pass = false;
                    for (std::size_t k = 1; k < pt.size(); ++k)
                        if (pt.state(k) > pt.state(k - 1)) pass = false;
                    if (!majorizes(pt, p)) pass = false;
                }
                for (const auto& cand_masses : candidates) {
                    auto candidate = make_distribution<rational>(cand_masses);
                    auto v = defeat_check(candidate, gp);
                    if (v.kind == defeat_kind::defeated) ++defeats;
                }
            }
        } catch (const error& e) {
            pass = false;
            why = e.what();
        }
        if (defeats == 0) pass = false;
        std::ostringstream d;
        d << defeats << " escaping candidates defeated" << (why.empty() ? "" : "; " + why);
        report(7, pass, "adversary members close up and defeat escaping candidates", d.str());
    }

    // 8. Exact-mode conservation: rational greedy and oracle couplings match
    // their marginals with equality, and greedy stays within m(n-1)+1 cells.
    {
        bool pass = true;
        std::string why;
        try {
            auto grid = eighth_grid(4);
            std::vector<exact_instance> cases;
            for (std::size_t a = 0; a < grid.size(); a += 3)
                for (std::size_t b = a + 1; b < grid.size(); b += 4)
                    cases.push_back(exact_instance::from_marginals(
                        {make_distribution<rational>(grid[a]),
                         make_distribution<rational>(grid[b])}));
            instance_generator gen(60012);
            for (int t = 0; t < 30; ++t)
                cases.push_back(dyadic_rationalized(gen.next_instance(2 + t % 2, 2 + t % 4)));

            for (const auto& S : cases) {
                auto tr = greedy_couple(S);  // construction verifies conservation exactly
                if (tr.coupling.cell_count() >
                    S.marginal_count() * (S.state_count() - 1) + 1)
                    pass = false;
                for (std::size_t j = 0; j < S.marginal_count(); ++j) {
                    std::vector<rational> sums(S.state_count(), rational(0));
                    for (const auto& c : tr.coupling.cells()) sums[c.indices[j]] += c.mass;
                    for (std::size_t k = 0; k < S.state_count(); ++k)
                        if (sums[k] != S.marginal(j).state(k)) pass = false;
                }
                if (S.marginal_count() == 2 && S.state_count() <= 4) {
                    auto res = exact_mec(S);
                    if (!res.exhaustive || !res.best_coupling) {
                        pass = false;
                        continue;
                    }
                    for (std::size_t j = 0; j < S.marginal_count(); ++j) {
                        std::vector<rational> sums(S.state_count(), rational(0));
                        for (const auto& c : res.best_coupling->cells())
                            sums[c.indices[j]] += c.mass;
                        for (std::size_t k = 0; k < S.state_count(); ++k)
                            if (sums[k] != S.marginal(j).state(k)) pass = false;
                    }
                }
            }
        } catch (const error& e) {
            pass = false;
            why = e.what();
        }
        report(8, pass, "exact-mode marginal conservation and cell-count bounds", why);
    }

    if (sweep.first_failure) {
        const auto& f = *sweep.first_failure;
        std::printf("sweep failure detail: trial %llu [%s] %s\n",
                    static_cast<unsigned long long>(f.trial), f.check.c_str(),
                    f.detail.c_str());
    }
    return failures;
}
