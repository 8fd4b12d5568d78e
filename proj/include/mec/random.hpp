#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "mec/distribution.hpp"
#include "mec/instance.hpp"

namespace mec {

// Seeded generator of random instances. Each marginal is Dirichlet(1,...,1):
// n unit exponentials normalized, then sorted nonincreasing. The PRNG is
// std::mt19937_64 (bit-exact across standard libraries) and uniforms are
// mapped as (x >> 11) * 2^-53, so the same seed reproduces the same stream
// everywhere this PRNG choice is honored.
class instance_generator {
public:
    explicit instance_generator(std::uint64_t seed) : rng_(seed) {}

    double next_unit() {
        return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    }

    double next_exponential() { return -std::log1p(-next_unit()); }

    distribution next_distribution(std::size_t n) {
        std::vector<double> draws(n);
        for (auto& d : draws) d = next_exponential();
        return distribution::from_masses(std::move(draws), true);
    }

    instance next_instance(std::size_t m, std::size_t n) {
        std::vector<distribution> marginals;
        marginals.reserve(m);
        for (std::size_t j = 0; j < m; ++j) marginals.push_back(next_distribution(n));
        return instance::from_marginals(std::move(marginals));
    }

private:
    std::mt19937_64 rng_;
};

}  // namespace mec
