#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cmath>

#include "mec/greedy.hpp"
#include "mec/oracle.hpp"
#include "mec/random.hpp"

using namespace mec;
using Catch::Matchers::WithinAbs;

namespace {

instance coin_pair() {
    return instance::from_marginals(
        {make_distribution({0.6, 0.4}), make_distribution({0.5, 0.5})});
}

}  // namespace

TEST_CASE("identical marginals couple diagonally") {
    auto S = instance::from_marginals(
        {make_distribution({0.5, 0.5}), make_distribution({0.5, 0.5})});
    auto tr = greedy_couple(S);
    REQUIRE(tr.coupling.cell_count() == 2);
    CHECK(tr.coupling.cells()[0].indices == std::vector<std::uint32_t>{0, 0});
    CHECK(tr.coupling.cells()[1].indices == std::vector<std::uint32_t>{1, 1});
    CHECK(tr.coupling.masses() == std::vector<double>{0.5, 0.5});
    CHECK_THAT(tr.coupling.entropy_bits(), WithinAbs(1.0, 1e-12));
}

TEST_CASE("worked two-coin example") {
    auto tr = greedy_couple(coin_pair());
    REQUIRE(tr.coupling.cell_count() == 3);
    const auto masses = tr.coupling.masses();
    const std::vector<double> want{0.5, 0.4, 0.1};
    for (std::size_t i = 0; i < 3; ++i) CHECK_THAT(masses[i], WithinAbs(want[i], 1e-12));
    CHECK(tr.coupling.cells()[0].indices == std::vector<std::uint32_t>{0, 0});
    CHECK(tr.coupling.cells()[1].indices == std::vector<std::uint32_t>{1, 1});
    CHECK(tr.coupling.cells()[2].indices == std::vector<std::uint32_t>{0, 1});
    CHECK_THAT(tr.coupling.entropy_bits(), WithinAbs(1.3609640474436812, 1e-12));
}

TEST_CASE("single marginal couples to itself") {
    auto p = make_distribution({0.7, 0.2, 0.1});
    auto tr = greedy_couple(instance::from_marginals({p}));
    CHECK(tr.coupling.masses() == p.probs());
    auto point = greedy_couple(instance::from_marginals({make_distribution({1.0})}));
    CHECK(point.coupling.masses() == std::vector<double>{1.0});
}

TEST_CASE("certificate on the worked example") {
    auto S = coin_pair();
    auto tr = greedy_couple(S);
    auto cert = make_theorem1_certificate(tr, meet(S));
    REQUIRE(cert.entries.size() == 3);
    CHECK_THAT(cert.entries[0].lower_bound, WithinAbs(0.5, 1e-12));
    CHECK(cert.entries[0].max_j == 1);
    CHECK_THAT(cert.entries[1].lower_bound, WithinAbs(0.25, 1e-12));
    CHECK(cert.entries[1].max_j == 2);
    CHECK_THAT(cert.entries[2].lower_bound, WithinAbs(0.05, 1e-12));
    CHECK(cert.entries[2].max_j == 2);
}

TEST_CASE("certificate on a single marginal bounds each state from below") {
    auto p = make_distribution({0.5, 0.3, 0.2});
    auto S = instance::from_marginals({p});
    auto tr = greedy_couple(S);
    auto cert = make_theorem1_certificate(tr, meet(S));
    REQUIRE(cert.entries.size() == 3);
    CHECK_THAT(cert.entries[0].lower_bound, WithinAbs(0.5, 1e-12));  // tight at the first state
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(cert.entries[i].state == p.state(i));
        CHECK(cert.entries[i].lower_bound <= p.state(i) + 1e-12);
    }
}

TEST_CASE("gap report") {
    auto same = instance::from_marginals(
        {make_distribution({0.5, 0.5}), make_distribution({0.5, 0.5})});
    CHECK_THAT(bound_report(same).gap, WithinAbs(0.0, 1e-12));
    auto r = bound_report(coin_pair());
    CHECK_THAT(r.gap, WithinAbs(0.3609640474436812, 1e-12));
    CHECK_THAT(r.h_meet, WithinAbs(1.0, 1e-12));
}

TEST_CASE("greedy invariants over random instances") {
    instance_generator gen(21);
    for (int t = 0; t < 300; ++t) {
        std::size_t m = 1 + t % 4, n = 1 + t % 6;
        auto S = gen.next_instance(m, n);
        auto tr = greedy_couple(S);  // constructor validates marginal conservation
        CHECK(tr.coupling.cell_count() <= m * (n - 1) + 1);
        const auto masses = tr.coupling.masses();
        for (std::size_t i = 1; i < masses.size(); ++i)
            CHECK(masses[i] <= masses[i - 1] + 1e-12);
        for (std::size_t i = 0; i < tr.steps.size(); ++i)
            CHECK(tr.steps[i].mass == masses[i]);
        auto cert = make_theorem1_certificate(tr, meet(S));
        auto rep = bound_report(S);
        CHECK(rep.gap >= -1e-9);
        CHECK(rep.gap <= log2_e + 1e-9);
    }
}

TEST_CASE("rational greedy conserves marginals exactly") {
    auto S = exact_instance::from_marginals(
        {make_distribution<rational>({rational(3, 5), rational(2, 5)}),
         make_distribution<rational>({rational(1, 2), rational(1, 2)}),
         make_distribution<rational>({rational(3, 4), rational(1, 4)})});
    auto tr = greedy_couple(S, true);
    CHECK(tr.coupling.cell_count() <= 3 * (2 - 1) + 1);
    rational total(0);
    for (const auto& c : tr.coupling.cells()) total += c.mass;
    CHECK(total == rational(1));
    // explicit conservation, state by state
    for (std::size_t j = 0; j < S.marginal_count(); ++j) {
        std::vector<rational> sums(S.state_count(), rational(0));
        for (const auto& c : tr.coupling.cells()) sums[c.indices[j]] += c.mass;
        for (std::size_t k = 0; k < S.state_count(); ++k)
            CHECK(sums[k] == S.marginal(j).state(k));
    }
    // after the last step every residual is zero
    REQUIRE_FALSE(tr.residual_checkpoints.empty());
    for (const auto& marg : tr.residual_checkpoints.back())
        for (const auto& r : marg) CHECK(r == rational(0));
}

TEST_CASE("rational certificate holds with exact comparisons") {
    instance_generator gen(22);
    for (int t = 0; t < 25; ++t) {
        auto S = rationalized(gen.next_instance(2 + t % 2, 2 + t % 4));
        auto tr = greedy_couple(S);
        CHECK_NOTHROW(make_theorem1_certificate(tr, meet(S)));
    }
}

// Runtime shape probe for the heap-based scheduler; prints measurements and
// asserts nothing beyond completion.
TEST_CASE("greedy runtime scaling probe", "[.][perf]") {
    instance_generator gen(99);
    for (std::size_t n : {1000u, 2000u, 4000u, 8000u}) {
        auto S = gen.next_instance(4, n);
        auto t0 = std::chrono::steady_clock::now();
        auto tr = greedy_couple(S);
        auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0);
        WARN("m=4 n=" << n << ": " << tr.coupling.cell_count() << " cells in "
                      << dt.count() << " s");
    }
    SUCCEED();
}
