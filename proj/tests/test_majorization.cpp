#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mec/majorization.hpp"
#include "mec/random.hpp"
#include "mec/split.hpp"

using namespace mec;
using Catch::Matchers::WithinAbs;

TEST_CASE("majorizes on small cases") {
    auto coin = make_distribution({0.5, 0.5});
    auto skew = make_distribution({0.6, 0.4});
    CHECK(majorizes(skew, coin));
    CHECK(majorizes(skew, skew));
    CHECK_FALSE(majorizes(coin, skew));
    // supports of different lengths are zero-padded
    CHECK(majorizes(make_distribution({1.0}), coin));
    CHECK_FALSE(majorizes(coin, make_distribution({1.0})));
}

TEST_CASE("majorizes is reflexive/transitive and orders entropy") {
    instance_generator gen(11);
    for (int t = 0; t < 200; ++t) {
        auto a = gen.next_distribution(2 + t % 5);
        auto b = gen.next_distribution(2 + (t / 2) % 5);
        auto c = gen.next_distribution(2 + (t / 3) % 5);
        CHECK(majorizes(a, a));
        if (majorizes(a, b) && majorizes(b, c)) CHECK(majorizes(a, c));
        if (majorizes(a, b)) CHECK(entropy(a) <= entropy(b) + 1e-9);
    }
}

TEST_CASE("meet of two coins") {
    auto S = instance::from_marginals(
        {make_distribution({0.6, 0.4}), make_distribution({0.5, 0.5})});
    auto mt = meet(S);
    CHECK_THAT(mt.meet.state(0), WithinAbs(0.5, 1e-15));
    CHECK_THAT(mt.meet.state(1), WithinAbs(0.5, 1e-15));
    CHECK(mt.per_index_argmin == std::vector<std::uint32_t>{1, 0});
}

TEST_CASE("meet degenerate cases") {
    auto p = make_distribution({0.7, 0.2, 0.1});
    auto single = meet(instance::from_marginals({p}));
    REQUIRE(single.meet.size() == p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        CHECK_THAT(single.meet.state(i), WithinAbs(p.state(i), 1e-12));
    // identity is exact when the arithmetic is
    auto px = make_distribution<rational>({rational(7, 10), rational(1, 5), rational(1, 10)});
    CHECK(meet(exact_instance::from_marginals({px})).meet == px);
    auto point = meet(instance::from_marginals({make_distribution({1.0}),
                                                make_distribution({1.0})}));
    CHECK(point.meet == make_distribution({1.0}));
}

TEST_CASE("meet prefix sums are the pointwise minima, and meet lower-bounds S") {
    instance_generator gen(12);
    for (int t = 0; t < 150; ++t) {
        auto S = gen.next_instance(2 + t % 3, 2 + t % 5);
        auto mt = meet(S);
        for (std::size_t i = 1; i <= S.state_count(); ++i) {
            double lo = prefix_sum(S.marginal(0), i);
            for (std::size_t j = 1; j < S.marginal_count(); ++j)
                lo = std::min(lo, prefix_sum(S.marginal(j), i));
            CHECK_THAT(prefix_sum(mt.meet, i), WithinAbs(lo, 1e-9));
        }
        for (const auto& p : S.marginals()) CHECK(majorizes(p, mt.meet));
    }
}

TEST_CASE("meet prefix characterization is exact in rational mode") {
    auto S = exact_instance::from_marginals(
        {make_distribution<rational>({rational(3, 5), rational(2, 5)}),
         make_distribution<rational>({rational(1, 2), rational(1, 2)})});
    auto mt = meet(S);
    CHECK(mt.meet.state(0) == rational(1, 2));
    CHECK(mt.meet.state(1) == rational(1, 2));
    for (std::size_t i = 1; i <= 2; ++i)
        CHECK(mt.meet.prefix(i) ==
              std::min(S.marginal(0).prefix(i), S.marginal(1).prefix(i)));
}

TEST_CASE("strong majorization identity and witness") {
    auto coin = make_distribution({0.5, 0.5});
    auto w = is_strongly_majorized(coin, coin, 1.0);
    REQUIRE(w.holds);
    CHECK(w.cover == std::vector<std::uint32_t>{1, 2});

    auto w2 = is_strongly_majorized(coin, coin, 2.0);
    REQUIRE_FALSE(w2.holds);
    CHECK(w2.violating_index == 1);  // 2 * 0.5 > 0.5 already at the first prefix
}

TEST_CASE("split of a coin is 1-strongly majorized by the coin") {
    auto coin = make_distribution({0.5, 0.5});
    auto sp = split(coin, 0.5, 1e-12);
    auto w = is_strongly_majorized(sp, coin, 1.0);
    CHECK(w.holds);
    CHECK(w.cover.size() == sp.size());
}

TEST_CASE("strong majorization with alpha=1 implies plain majorization") {
    instance_generator gen(13);
    int hits = 0;
    for (int t = 0; t < 400; ++t) {
        auto p = gen.next_distribution(2 + t % 4);
        auto q = gen.next_distribution(2 + (t / 2) % 4);
        if (!is_strongly_majorized(p, q, 1.0).holds) continue;
        ++hits;
        CHECK(majorizes(q, p));
    }
    CHECK(hits > 10);  // the generator must actually exercise the implication
}

TEST_CASE("entropy bound under strong majorization") {
    auto coin = make_distribution({0.5, 0.5});
    auto r = check_strong_majorization_entropy_bound(coin, coin, 1.0);
    CHECK_THAT(r.slack, WithinAbs(0.0, 1e-12));

    // split of the coin: H = H(coin) + H(Geom_1/2) = 3 up to the 1e-12 tail
    auto sp = split(coin, 0.5, 1e-12);
    auto rs = check_strong_majorization_entropy_bound(std::span<const double>(sp.masses()),
                                                      std::span<const double>(coin.probs()),
                                                      1.0);
    CHECK_THAT(rs.h_p, WithinAbs(3.0, 1e-6));
    CHECK_THAT(rs.slack, WithinAbs(rs.h_p - 1.0, 1e-12));
    CHECK(rs.slack >= -1e-9);

    CHECK_THROWS_AS(check_strong_majorization_entropy_bound(
                        make_distribution({0.5, 0.5}), make_distribution({0.5, 0.5}), 2.0),
                    precondition_error);
}

TEST_CASE("entropy bound holds whenever the predicate passes") {
    instance_generator gen(14);
    int hits = 0;
    for (int t = 0; t < 400; ++t) {
        auto p = gen.next_distribution(2 + t % 4);
        auto q = gen.next_distribution(2 + (t / 3) % 4);
        for (double alpha : {1.0, 1.5, 2.0}) {
            if (!is_strongly_majorized(p, q, alpha).holds) continue;
            ++hits;
            auto r = check_strong_majorization_entropy_bound(p, q, alpha);
            CHECK(r.slack >= -1e-9);
        }
    }
    CHECK(hits > 10);
}

TEST_CASE("malformed over-unit prefix is rejected") {
    // covered and factor-feasible prefixes first, then mass runs past 1
    std::vector<double> too_much{0.5, 0.5, 0.5};
    std::vector<double> q{0.5, 0.5};
    CHECK_THROWS_AS(is_strongly_majorized(std::span<const double>(too_much),
                                          std::span<const double>(q), 1.0),
                    no_covering_prefix_error);
}
